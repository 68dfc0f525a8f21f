// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_PROJECTION_HPP
#define RANGESEG_PROJECTION_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "rangeseg/point_cloud.hpp"

namespace rangeseg {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Spherical image geometry. Defaults follow the HDL-64E layout used by
/// SemanticKITTI (64 x 2048, +3 deg / -25 deg).
struct ProjectionConfig {
  int height = 64;
  int width = 2048;
  double fov_up = deg_to_rad(3.0);    // above the horizon, radians
  double fov_down = deg_to_rad(25.0); // below the horizon, radians (magnitude)

  /// Throws std::invalid_argument unless H, W >= 1 and fov_up + fov_down > 0.
  void validate() const;
  double fov() const { return fov_up + fov_down; }
  std::size_t pixels() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
};

struct PixelCoord {
  int row = 0;
  int col = 0;
  bool pitch_clamped = false;  // pitch fell outside the vertical FOV

  friend bool operator==(const PixelCoord& a, const PixelCoord& b) {
    return a.row == b.row && a.col == b.col;
  }
};

/// Pixel of a Cartesian point with range `range` > 0. Rows outside the FOV
/// are clamped to the edge rows; columns are clamped to [0, W-1].
PixelCoord pixel_of(double x, double y, double z, double range, const ProjectionConfig& config);

/// Row-major H x W image of the owner point's channels.
struct RangeImage {
  int height = 0;
  int width = 0;
  std::vector<float> x, y, z, range, remission;
  std::vector<std::uint8_t> valid;
  std::vector<std::int32_t> owner;  // -1 on invalid pixels

  RangeImage() = default;
  RangeImage(int h, int w);

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }
  std::size_t pixels() const { return valid.size(); }
  std::size_t valid_count() const;
};

/// Per-point pixel assignment; `is_owner[i]` is false exactly for the
/// points hidden behind a nearer point on the same pixel.
struct PointProjection {
  int height = 0;
  int width = 0;
  std::vector<std::int32_t> row;
  std::vector<std::int32_t> col;
  std::vector<float> range;
  std::vector<std::uint8_t> is_owner;
  std::size_t clamped_rows = 0;  // points whose pitch was outside the FOV

  std::size_t size() const { return row.size(); }
  std::size_t pixel_index(std::size_t i) const {
    return static_cast<std::size_t>(row[i]) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col[i]);
  }
};

struct Projected {
  RangeImage image;
  PointProjection points;
};

/// Projects every point. The nearest point owns a pixel; equal ranges go to
/// the lower point index. Throws DataError on an empty cloud or a point at
/// the origin.
Projected project(const PointCloud& cloud, const ProjectionConfig& config);

/// Point at range `range` along the ray through the center of pixel
/// (row, col). Throws std::invalid_argument for indices outside the image
/// or a non-positive range.
std::array<double, 3> unproject_pixel(int row, int col, double range, const ProjectionConfig& config);

struct OcclusionStats {
  std::size_t points = 0;
  std::size_t owners = 0;
  std::size_t occluded = 0;
  double occluded_fraction = 0.0;
  /// multiplicity -> number of pixels hit by exactly that many points
  std::map<std::size_t, std::size_t> multiplicity;
  /// Only set when labels are supplied: occluded points whose label differs
  /// from their pixel owner's label.
  std::optional<std::size_t> disagreeing;
  std::optional<double> disagreement_fraction;
};

/// Throws DataError when `labels` does not match the point count.
OcclusionStats occlusion_stats(const PointProjection& proj, const LabelSet* labels = nullptr);

}  // namespace rangeseg

#endif  // RANGESEG_PROJECTION_HPP
