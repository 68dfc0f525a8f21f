// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_EVALUATION_HPP
#define RANGESEG_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rangeseg/point_cloud.hpp"
#include "rangeseg/projection.hpp"

namespace rangeseg {

/// counts[gt][pred] over points whose ground truth is not the ignore id.
/// A prediction equal to the ignore id is kept apart as "unassigned" and
/// scores as a false negative of the ground-truth class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return num_classes_; }
  std::uint64_t count(int gt, int pred) const;
  std::uint64_t unassigned(int gt) const { return unassigned_[static_cast<std::size_t>(gt)]; }
  std::uint64_t total() const;

  void add(int gt, int pred, std::uint64_t n = 1);
  void add_unassigned(int gt, std::uint64_t n = 1);
  /// Element-wise sum; associative and commutative.
  void merge(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int num_classes_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> unassigned_;
};

/// Throws DataError on length mismatch or a non-ignore id >= num_classes.
void accumulate(ConfusionMatrix& conf, std::span<const ClassId> gt, std::span<const ClassId> pred,
                ClassId ignore_id = kIgnoreId);

struct IouResult {
  std::vector<std::optional<double>> per_class;  // nullopt: TP + FP + FN == 0
  double miou = 0.0;                             // mean over defined classes
};

/// Throws DataError when no class has a non-zero denominator.
IouResult iou(const ConfusionMatrix& conf);

struct MethodLabels {
  std::string name;
  std::span<const ClassId> labels;
};

struct BlurReport {
  bool applicable = false;  // false when there is no occluded, labeled point
  std::size_t occluded = 0;
  std::vector<std::pair<std::string, double>> accuracy;  // per method, occluded points only
  std::optional<double> nla_minus_copy;  // set when methods "nla" and "copy" are both present
};

/// Accuracy restricted to occluded points (is_owner false) whose ground
/// truth is not the ignore id. Throws DataError on length mismatch.
BlurReport blur_metric(const PointProjection& proj, std::span<const ClassId> gt,
                       std::span<const MethodLabels> methods, ClassId ignore_id = kIgnoreId);

}  // namespace rangeseg

#endif  // RANGESEG_EVALUATION_HPP
