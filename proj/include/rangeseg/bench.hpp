// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_BENCH_HPP
#define RANGESEG_BENCH_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rangeseg/postprocess.hpp"
#include "rangeseg/projection.hpp"

namespace rangeseg {

enum class Method { kNla, kKnn, kCopy };

std::string_view method_name(Method m);
/// Throws std::invalid_argument for names other than nla, knn, copy.
Method method_from_name(std::string_view name);

struct MethodConfig {
  Method method = Method::kNla;
  NlaParams nla;
  KnnParams knn;

  /// e.g. "kernel=5" or "kernel=5;k=5;cutoff=1;sigma=1"
  std::string describe() const;
};

std::vector<ClassId> run_postprocess(const MethodConfig& config, const RangeImage& img,
                                     const LabelImage& labels, const PointProjection& proj);

struct TimingStats {
  double median_ms = 0.0;
  double p10_ms = 0.0;
  double p90_ms = 0.0;
};

/// Percentiles with linear interpolation between order statistics.
TimingStats summarize(std::vector<double> samples_ms);

struct BenchReport {
  std::size_t points = 0;
  int height = 0;
  int width = 0;
  std::string method;
  std::string params;
  int repetitions = 0;
  TimingStats projection;
  TimingStats postprocess;
  TimingStats evaluation;
  std::optional<double> miou;
};

struct BenchInput {
  const PointCloud* cloud = nullptr;
  ProjectionConfig config;
  const LabelImage* predictions = nullptr;  // aligned with `config`
  const std::vector<ClassId>* ground_truth = nullptr;  // training ids, optional
  int num_classes = 19;
  ClassId ignore_id = kIgnoreId;
};

/// One untimed warm-up run, then `repetitions` timed runs of projection,
/// post-processing and evaluation, each stage timed on its own. Throws
/// std::invalid_argument for repetitions < 1 and std::runtime_error if
/// any run's labels differ from the warm-up run.
BenchReport bench(const BenchInput& input, const MethodConfig& method, int repetitions);

}  // namespace rangeseg

#endif  // RANGESEG_BENCH_HPP
