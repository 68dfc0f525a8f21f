// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_SYNTH_HPP
#define RANGESEG_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <utility>
#include <vector>

#include "rangeseg/point_cloud.hpp"
#include "rangeseg/projection.hpp"

namespace rangeseg {

enum class Shape { kBox, kCylinder };

/// Box or vertical cylinder standing at (center_x, center_y) with its
/// bottom at base_z. Boxes use length (local x), width (local y) and yaw;
/// cylinders use radius.
///
/// A thin object only partially blocks the beam: the ray records it and
/// continues to the next surface. Solid objects terminate the ray.
struct SceneObject {
  Shape shape = Shape::kBox;
  double center_x = 0.0;
  double center_y = 0.0;
  double base_z = 0.0;
  double length = 1.0;
  double width = 1.0;
  double radius = 0.5;
  double height = 1.0;
  double yaw = 0.0;  // radians
  ClassId label = 0;
  float remission = 0.5f;
  bool thin = false;
};

/// Desk-scale LiDAR scene: a ground plane plus boxes and cylinders, scanned
/// from the origin. Rays are laid out on `grid` with `rows_per_pixel` x
/// `cols_per_pixel` rays inside every pixel, so each point's pixel under
/// `grid` is known by construction.
struct SceneSpec {
  double ground_height = -1.73;
  ClassId ground_label = 40;
  float ground_remission = 0.3f;
  std::vector<SceneObject> objects;

  ProjectionConfig grid;
  int rows_per_pixel = 1;
  int cols_per_pixel = 1;
  int max_returns = 2;      // surfaces recorded per ray (thin objects pass)
  double max_range = 80.0;
  double jitter = 0.5;      // angular jitter, fraction of a ray cell
  double range_noise = 0.0;      // meters, std-dev along the ray
  double remission_noise = 0.02; // std-dev, result clamped to [0, 1]

  /// Throws std::invalid_argument on zero sampling density, objects below
  /// the ground plane, or non-positive dimensions.
  void validate() const;
};

struct SynthScene {
  PointCloud cloud;
  LabelSet labels;
  std::vector<std::int32_t> row;  // pixel under spec.grid, per point
  std::vector<std::int32_t> col;
};

/// Pure function of (spec, seed).
SynthScene synth_scene(const SceneSpec& spec, std::uint64_t seed);

/// Point pairs (i < j) sharing a pixel while carrying different labels.
std::vector<std::pair<std::size_t, std::size_t>> cross_class_copixel_pairs(const SynthScene& scene);

/// Plain-text scene description; see data/scenes/*.cfg for the grammar.
/// Throws FormatError on malformed lines.
SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::filesystem::path& path);

namespace scenes {

/// Flat ground at z = -2 and nothing else.
SceneSpec ground_only();

/// A thin pole at 8 m in front of a wall at 12 m, straight ahead.
SceneSpec pole_before_wall();

/// Street: road, two building rows, parked cars, thin poles and trunks.
SceneSpec street();

/// Random boxes and cylinders around the sensor; about a third are thin.
SceneSpec random(std::uint64_t seed, const ProjectionConfig& grid = {});

}  // namespace scenes

}  // namespace rangeseg

#endif  // RANGESEG_SYNTH_HPP
