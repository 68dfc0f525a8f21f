// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rangeseg/evaluation.hpp"

namespace rangeseg {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start, Clock::time_point stop) {
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kNla: return "nla";
    case Method::kKnn: return "knn";
    case Method::kCopy: return "copy";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  if (name == "nla") return Method::kNla;
  if (name == "knn") return Method::kKnn;
  if (name == "copy") return Method::kCopy;
  throw std::invalid_argument("unknown post-processing method '" + std::string(name) + "'");
}

std::string MethodConfig::describe() const {
  std::ostringstream s;
  switch (method) {
    case Method::kNla: s << "kernel=" << nla.kernel; break;
    case Method::kKnn:
      s << "kernel=" << knn.kernel << ";k=" << knn.k << ";cutoff=" << knn.cutoff
        << ";sigma=" << knn.sigma;
      break;
    case Method::kCopy: s << "-"; break;
  }
  return s.str();
}

std::vector<ClassId> run_postprocess(const MethodConfig& config, const RangeImage& img,
                                     const LabelImage& labels, const PointProjection& proj) {
  switch (config.method) {
    case Method::kNla: return nla(img, labels, proj, config.nla);
    case Method::kKnn: return knn_postprocess(img, labels, proj, config.knn);
    case Method::kCopy: return copy_pixel_label(labels, proj);
  }
  throw std::invalid_argument("unknown method");
}

TimingStats summarize(std::vector<double> samples_ms) {
  if (samples_ms.empty()) throw std::invalid_argument("summarize: no samples");
  std::sort(samples_ms.begin(), samples_ms.end());
  return {percentile(samples_ms, 0.5), percentile(samples_ms, 0.1), percentile(samples_ms, 0.9)};
}

BenchReport bench(const BenchInput& input, const MethodConfig& method, int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("bench needs at least one repetition");
  if (input.cloud == nullptr || input.predictions == nullptr) {
    throw std::invalid_argument("bench needs a cloud and a prediction image");
  }

  std::vector<double> t_proj, t_post, t_eval;
  std::vector<ClassId> reference;
  std::optional<double> miou;
  for (int run = 0; run <= repetitions; ++run) {
    const auto t0 = Clock::now();
    const Projected projected = project(*input.cloud, input.config);
    const auto t1 = Clock::now();
    std::vector<ClassId> labels =
        run_postprocess(method, projected.image, *input.predictions, projected.points);
    const auto t2 = Clock::now();
    if (input.ground_truth != nullptr) {
      ConfusionMatrix conf(input.num_classes);
      accumulate(conf, *input.ground_truth, labels, input.ignore_id);
      miou = iou(conf).miou;
    }
    const auto t3 = Clock::now();

    if (run == 0) {
      reference = std::move(labels);
      continue;
    }
    if (labels != reference) {
      throw std::runtime_error("bench: run " + std::to_string(run) +
                               " produced labels different from the warm-up run");
    }
    t_proj.push_back(elapsed_ms(t0, t1));
    t_post.push_back(elapsed_ms(t1, t2));
    t_eval.push_back(elapsed_ms(t2, t3));
  }

  BenchReport report;
  report.points = input.cloud->size();
  report.height = input.config.height;
  report.width = input.config.width;
  report.method = std::string(method_name(method.method));
  report.params = method.describe();
  report.repetitions = repetitions;
  report.projection = summarize(t_proj);
  report.postprocess = summarize(t_post);
  report.evaluation = summarize(t_eval);
  report.miou = miou;
  return report;
}

}  // namespace rangeseg
