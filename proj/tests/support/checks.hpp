// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles: brute-force re-derivations of projection invariants and
// generators for random differential-test inputs. Nothing here calls into
// the code paths it checks beyond reading their outputs.

#ifndef RANGESEG_TESTS_SUPPORT_CHECKS_HPP
#define RANGESEG_TESTS_SUPPORT_CHECKS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "rangeseg/postprocess.hpp"
#include "rangeseg/projection.hpp"

namespace rangeseg::testing {

/// Pixel of a point, straight from the documented formula.
inline std::pair<int, int> reference_pixel(const Point& p, const ProjectionConfig& cfg) {
  const double x = p.x, y = p.y, z = p.z;
  const double r = std::sqrt(x * x + y * y + z * z);
  double u = std::floor(0.5 * (1.0 - std::atan2(y, x) / std::numbers::pi) * cfg.width);
  double v = std::floor((1.0 - (std::asin(z / r) + cfg.fov_down) / (cfg.fov_up + cfg.fov_down)) *
                        cfg.height);
  u = std::min(std::max(u, 0.0), cfg.width - 1.0);
  v = std::min(std::max(v, 0.0), cfg.height - 1.0);
  return {static_cast<int>(v), static_cast<int>(u)};
}

/// Checks bounds, formula agreement, owner minimality by rescanning every
/// pixel's members, the owner/occluded partition and the pixel round trip.
/// Returns an empty string when everything holds.
inline std::string check_projection(const PointCloud& cloud, const ProjectionConfig& cfg,
                                    const Projected& out) {
  const PointProjection& proj = out.points;
  const RangeImage& img = out.image;
  if (proj.size() != cloud.size()) return "point count mismatch";

  std::map<std::pair<int, int>, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (proj.row[i] < 0 || proj.row[i] >= cfg.height || proj.col[i] < 0 || proj.col[i] >= cfg.width) {
      return "point " + std::to_string(i) + " out of bounds";
    }
    if (reference_pixel(cloud.points[i], cfg) != std::make_pair(proj.row[i], proj.col[i])) {
      return "point " + std::to_string(i) + " disagrees with the reference formula";
    }
    const Point& p = cloud.points[i];
    const double x = p.x, y = p.y, z = p.z;
    if (proj.range[i] != static_cast<float>(std::sqrt(x * x + y * y + z * z))) {
      return "point " + std::to_string(i) + " has a wrong range";
    }
    members[{proj.row[i], proj.col[i]}].push_back(i);
  }

  std::size_t owners = 0, valid = 0;
  for (std::size_t pix = 0; pix < img.pixels(); ++pix) valid += img.valid[pix] ? 1 : 0;
  for (std::size_t i = 0; i < proj.size(); ++i) owners += proj.is_owner[i] ? 1 : 0;
  if (owners != valid) return "owners != valid pixels";
  if (valid != members.size()) return "valid pixels != occupied pixels";

  for (const auto& [pixel, idx] : members) {
    std::size_t best = idx.front();
    for (std::size_t i : idx) {
      if (proj.range[i] < proj.range[best]) best = i;  // idx ascending: ties keep lower index
    }
    const std::size_t pix = img.index(pixel.first, pixel.second);
    if (!img.valid[pix] || img.owner[pix] != static_cast<std::int32_t>(best)) {
      return "pixel (" + std::to_string(pixel.first) + "," + std::to_string(pixel.second) +
             ") owner is not the minimum-range point";
    }
    if (img.range[pix] != proj.range[best]) return "owner range not copied";
    for (std::size_t i : idx) {
      if ((i == best) != (proj.is_owner[i] != 0)) return "is_owner flag inconsistent";
    }
    const auto xyz = unproject_pixel(pixel.first, pixel.second, img.range[pix], cfg);
    const Point center{static_cast<float>(xyz[0]), static_cast<float>(xyz[1]),
                       static_cast<float>(xyz[2]), 0.0f};
    if (reference_pixel(center, cfg) != pixel) {
      return "round trip leaves pixel (" + std::to_string(pixel.first) + "," +
             std::to_string(pixel.second) + ")";
    }
  }
  return {};
}

/// Random points with deliberately repeated positions (exact range ties)
/// and a random configuration of irregular, small size.
struct RandomScan {
  PointCloud cloud;
  ProjectionConfig config;
};

inline RandomScan random_scan(std::uint64_t seed, int max_h = 9, int max_w = 17,
                              std::size_t max_points = 200) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  RandomScan s;
  s.config.height = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_h));
  s.config.width = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_w));
  s.config.fov_up = uniform(0.02, 0.3);
  s.config.fov_down = uniform(0.02, 0.5);
  const std::size_t n = 1 + rng() % max_points;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng() % 8 == 0) {
      s.cloud.points.push_back(s.cloud.points[rng() % i]);
      continue;
    }
    // A quarter of the ranges are whole meters so distinct pixels tie.
    const double r = rng() % 4 == 0 ? std::round(uniform(1.0, 6.0)) : uniform(0.5, 40.0);
    const double yaw = uniform(-std::numbers::pi, std::numbers::pi);
    const double pitch = uniform(-s.config.fov_down * 1.2, s.config.fov_up * 1.2);
    s.cloud.points.push_back({static_cast<float>(r * std::cos(pitch) * std::cos(yaw)),
                              static_cast<float>(r * std::cos(pitch) * std::sin(yaw)),
                              static_cast<float>(r * std::sin(pitch)),
                              static_cast<float>(uniform(0.0, 1.0))});
  }
  return s;
}

/// Uniformly random class per pixel.
inline LabelImage random_label_image(int h, int w, int num_classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabelImage img{h, w, std::vector<ClassId>(static_cast<std::size_t>(h) * static_cast<std::size_t>(w))};
  for (ClassId& c : img.labels) c = static_cast<ClassId>(rng() % static_cast<std::uint64_t>(num_classes));
  return img;
}

}  // namespace rangeseg::testing

#endif  // RANGESEG_TESTS_SUPPORT_CHECKS_HPP
