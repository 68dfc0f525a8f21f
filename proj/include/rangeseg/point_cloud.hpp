// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_POINT_CLOUD_HPP
#define RANGESEG_POINT_CLOUD_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rangeseg {

struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float remission = 0.0f;

  friend bool operator==(const Point&, const Point&) = default;
};

/// One LiDAR sweep in file order. All values are finite.
struct PointCloud {
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

using ClassId = std::uint16_t;

/// Per-point semantic and instance ids, index-aligned with a PointCloud.
struct LabelSet {
  std::vector<ClassId> semantic;
  std::vector<std::uint16_t> instance;

  std::size_t size() const { return semantic.size(); }
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

inline constexpr ClassId kIgnoreId = 255;

}  // namespace rangeseg

#endif  // RANGESEG_POINT_CLOUD_HPP
