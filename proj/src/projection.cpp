// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rangeseg/error.hpp"

namespace rangeseg {

void ProjectionConfig::validate() const {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("projection size must be at least 1x1, got " +
                                std::to_string(height) + "x" + std::to_string(width));
  }
  if (!(fov() > 0.0) || !std::isfinite(fov())) {
    throw std::invalid_argument("fov_up + fov_down must be positive");
  }
}

PixelCoord pixel_of(double x, double y, double z, double range, const ProjectionConfig& config) {
  const double yaw = std::atan2(y, x);
  const double pitch = std::asin(std::clamp(z / range, -1.0, 1.0));

  const double u = std::floor(0.5 * (1.0 - yaw / std::numbers::pi) * config.width);
  const double v = std::floor((1.0 - (pitch + config.fov_down) / config.fov()) * config.height);

  PixelCoord px;
  px.col = static_cast<int>(std::clamp(u, 0.0, static_cast<double>(config.width - 1)));
  px.pitch_clamped = v < 0.0 || v > config.height - 1;
  px.row = static_cast<int>(std::clamp(v, 0.0, static_cast<double>(config.height - 1)));
  return px;
}

RangeImage::RangeImage(int h, int w) : height(h), width(w) {
  const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  x.assign(n, 0.0f);
  y.assign(n, 0.0f);
  z.assign(n, 0.0f);
  range.assign(n, 0.0f);
  remission.assign(n, 0.0f);
  valid.assign(n, 0);
  owner.assign(n, -1);
}

std::size_t RangeImage::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

Projected project(const PointCloud& cloud, const ProjectionConfig& config) {
  config.validate();
  if (cloud.empty()) {
    throw DataError("cannot project an empty cloud");
  }

  const std::size_t n = cloud.size();
  Projected out;
  out.image = RangeImage(config.height, config.width);
  PointProjection& proj = out.points;
  proj.height = config.height;
  proj.width = config.width;
  proj.row.resize(n);
  proj.col.resize(n);
  proj.range.resize(n);
  proj.is_owner.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = cloud.points[i];
    const double x = p.x, y = p.y, z = p.z;
    const double r = std::sqrt(x * x + y * y + z * z);
    if (!(r > 0.0)) {
      throw DataError("point " + std::to_string(i) + " has zero range");
    }
    const PixelCoord px = pixel_of(x, y, z, r, config);
    proj.row[i] = px.row;
    proj.col[i] = px.col;
    proj.range[i] = static_cast<float>(r);
    if (px.pitch_clamped) ++proj.clamped_rows;
  }

  // Ownership: lexicographic minimum of (range, index) per pixel. This is a
  // total order, so any reduction order yields the same owners.
  std::vector<std::int32_t>& owner = out.image.owner;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pix = proj.pixel_index(i);
    const std::int32_t cur = owner[pix];
    if (cur < 0 || proj.range[i] < proj.range[static_cast<std::size_t>(cur)]) {
      owner[pix] = static_cast<std::int32_t>(i);
    }
  }

  RangeImage& img = out.image;
  for (std::size_t pix = 0; pix < owner.size(); ++pix) {
    if (owner[pix] < 0) continue;
    const auto i = static_cast<std::size_t>(owner[pix]);
    const Point& p = cloud.points[i];
    img.valid[pix] = 1;
    img.x[pix] = p.x;
    img.y[pix] = p.y;
    img.z[pix] = p.z;
    img.range[pix] = proj.range[i];
    img.remission[pix] = p.remission;
    proj.is_owner[i] = 1;
  }
  return out;
}

std::array<double, 3> unproject_pixel(int row, int col, double range, const ProjectionConfig& config) {
  config.validate();
  if (row < 0 || row >= config.height || col < 0 || col >= config.width) {
    throw std::invalid_argument("pixel (" + std::to_string(row) + ", " + std::to_string(col) +
                                ") outside " + std::to_string(config.height) + "x" +
                                std::to_string(config.width) + " image");
  }
  if (!(range > 0.0)) {
    throw std::invalid_argument("unproject_pixel needs a positive range");
  }
  const double yaw = std::numbers::pi * (1.0 - 2.0 * (col + 0.5) / config.width);
  const double pitch = (1.0 - (row + 0.5) / config.height) * config.fov() - config.fov_down;
  return {range * std::cos(pitch) * std::cos(yaw), range * std::cos(pitch) * std::sin(yaw),
          range * std::sin(pitch)};
}

OcclusionStats occlusion_stats(const PointProjection& proj, const LabelSet* labels) {
  const std::size_t n = proj.size();
  if (labels != nullptr && labels->size() != n) {
    throw DataError("occlusion_stats: " + std::to_string(labels->size()) + " labels for " +
                    std::to_string(n) + " points");
  }

  const std::size_t pixels =
      static_cast<std::size_t>(proj.height) * static_cast<std::size_t>(proj.width);
  std::vector<std::size_t> hits(pixels, 0);
  std::vector<std::int64_t> owner_of(pixels, -1);
  OcclusionStats stats;
  stats.points = n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pix = proj.pixel_index(i);
    ++hits[pix];
    if (proj.is_owner[i]) {
      ++stats.owners;
      owner_of[pix] = static_cast<std::int64_t>(i);
    }
  }
  stats.occluded = n - stats.owners;
  stats.occluded_fraction = n == 0 ? 0.0 : static_cast<double>(stats.occluded) / n;
  for (std::size_t count : hits) {
    if (count > 0) ++stats.multiplicity[count];
  }

  if (labels != nullptr) {
    std::size_t disagree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (proj.is_owner[i]) continue;
      const std::int64_t o = owner_of[proj.pixel_index(i)];
      if (o < 0) {
        throw DataError("occluded point " + std::to_string(i) + " sits on a pixel without owner");
      }
      if (labels->semantic[i] != labels->semantic[static_cast<std::size_t>(o)]) ++disagree;
    }
    stats.disagreeing = disagree;
    stats.disagreement_fraction =
        stats.occluded == 0 ? 0.0 : static_cast<double>(disagree) / stats.occluded;
  }
  return stats;
}

}  // namespace rangeseg
