// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/evaluation.hpp"

#include <numeric>
#include <stdexcept>

#include "rangeseg/error.hpp"

namespace rangeseg {

ConfusionMatrix::ConfusionMatrix(int num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes) * static_cast<std::size_t>(num_classes), 0),
      unassigned_(static_cast<std::size_t>(num_classes), 0) {
  if (num_classes < 1) throw std::invalid_argument("confusion matrix needs at least one class");
}

std::uint64_t ConfusionMatrix::count(int gt, int pred) const {
  return counts_[static_cast<std::size_t>(gt) * static_cast<std::size_t>(num_classes_) +
                 static_cast<std::size_t>(pred)];
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}) +
         std::accumulate(unassigned_.begin(), unassigned_.end(), std::uint64_t{0});
}

void ConfusionMatrix::add(int gt, int pred, std::uint64_t n) {
  counts_[static_cast<std::size_t>(gt) * static_cast<std::size_t>(num_classes_) +
          static_cast<std::size_t>(pred)] += n;
}

void ConfusionMatrix::add_unassigned(int gt, std::uint64_t n) {
  unassigned_[static_cast<std::size_t>(gt)] += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.num_classes_ != num_classes_) {
    throw std::invalid_argument("cannot merge confusion matrices of different class counts");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  for (std::size_t i = 0; i < unassigned_.size(); ++i) unassigned_[i] += other.unassigned_[i];
}

void accumulate(ConfusionMatrix& conf, std::span<const ClassId> gt, std::span<const ClassId> pred,
                ClassId ignore_id) {
  if (gt.size() != pred.size()) {
    throw DataError("accumulate: " + std::to_string(gt.size()) + " ground-truth labels vs " +
                    std::to_string(pred.size()) + " predictions");
  }
  const int n = conf.num_classes();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] == ignore_id) continue;
    if (gt[i] >= n) {
      throw DataError("ground-truth id " + std::to_string(gt[i]) + " at point " +
                      std::to_string(i) + " is outside [0, " + std::to_string(n) + ")");
    }
    if (pred[i] == ignore_id) {
      conf.add_unassigned(gt[i]);
      continue;
    }
    if (pred[i] >= n) {
      throw DataError("predicted id " + std::to_string(pred[i]) + " at point " +
                      std::to_string(i) + " is outside [0, " + std::to_string(n) + ")");
    }
    conf.add(gt[i], pred[i]);
  }
}

IouResult iou(const ConfusionMatrix& conf) {
  const int n = conf.num_classes();
  IouResult result;
  result.per_class.resize(static_cast<std::size_t>(n));
  double sum = 0.0;
  int defined = 0;
  for (int c = 0; c < n; ++c) {
    const std::uint64_t tp = conf.count(c, c);
    std::uint64_t fp = 0, fn = conf.unassigned(c);
    for (int o = 0; o < n; ++o) {
      if (o == c) continue;
      fp += conf.count(o, c);
      fn += conf.count(c, o);
    }
    const std::uint64_t denom = tp + fp + fn;
    if (denom == 0) continue;
    const double value = static_cast<double>(tp) / static_cast<double>(denom);
    result.per_class[static_cast<std::size_t>(c)] = value;
    sum += value;
    ++defined;
  }
  if (defined == 0) throw DataError("iou: every class has an empty denominator");
  result.miou = sum / defined;
  return result;
}

BlurReport blur_metric(const PointProjection& proj, std::span<const ClassId> gt,
                       std::span<const MethodLabels> methods, ClassId ignore_id) {
  const std::size_t n = proj.size();
  if (gt.size() != n) throw DataError("blur_metric: ground truth does not match the point count");
  for (const MethodLabels& m : methods) {
    if (m.labels.size() != n) {
      throw DataError("blur_metric: method '" + m.name + "' does not match the point count");
    }
  }

  BlurReport report;
  std::vector<std::size_t> correct(methods.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (proj.is_owner[i] || gt[i] == ignore_id) continue;
    ++report.occluded;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (methods[m].labels[i] == gt[i]) ++correct[m];
    }
  }
  report.applicable = report.occluded > 0;
  if (!report.applicable) return report;

  std::optional<double> nla_acc, copy_acc;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const double acc = static_cast<double>(correct[m]) / static_cast<double>(report.occluded);
    report.accuracy.emplace_back(methods[m].name, acc);
    if (methods[m].name == "nla") nla_acc = acc;
    if (methods[m].name == "copy") copy_acc = acc;
  }
  if (nla_acc && copy_acc) report.nla_minus_copy = *nla_acc - *copy_acc;
  return report;
}

}  // namespace rangeseg
