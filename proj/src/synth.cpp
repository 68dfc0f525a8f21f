// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rangeseg/error.hpp"
#include "rangeseg/io.hpp"

namespace rangeseg {
namespace {

constexpr double kMinRange = 0.1;

// Portable draws from mt19937_64: the library distributions are not
// guaranteed to produce the same sequence across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct Ray {
  double dx, dy, dz;
};

std::optional<double> hit_ground(const Ray& ray, double ground_height) {
  if (ray.dz >= 0.0) return std::nullopt;
  return ground_height / ray.dz;
}

std::optional<double> hit_box(const Ray& ray, const SceneObject& box) {
  // Ray from the origin expressed in the box frame.
  const double c = std::cos(box.yaw), s = std::sin(box.yaw);
  const double ox = -(c * box.center_x + s * box.center_y);
  const double oy = -(-s * box.center_x + c * box.center_y);
  const double dx = c * ray.dx + s * ray.dy;
  const double dy = -s * ray.dx + c * ray.dy;
  const double origin[3] = {ox, oy, 0.0};
  const double dir[3] = {dx, dy, ray.dz};
  const double lo[3] = {-0.5 * box.length, -0.5 * box.width, box.base_z};
  const double hi[3] = {0.5 * box.length, 0.5 * box.width, box.base_z + box.height};

  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(dir[a]) < 1e-15) {
      if (origin[a] < lo[a] || origin[a] > hi[a]) return std::nullopt;
      continue;
    }
    double t0 = (lo[a] - origin[a]) / dir[a];
    double t1 = (hi[a] - origin[a]) / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_near <= kMinRange) return std::nullopt;
  return t_near;
}

std::optional<double> hit_cylinder(const Ray& ray, const SceneObject& cyl) {
  const double top = cyl.base_z + cyl.height;
  std::optional<double> best;
  auto consider = [&](double t) {
    if (t > kMinRange && (!best || t < *best)) best = t;
  };

  const double a = ray.dx * ray.dx + ray.dy * ray.dy;
  if (a > 1e-15) {
    const double dc = ray.dx * cyl.center_x + ray.dy * cyl.center_y;
    const double cc = cyl.center_x * cyl.center_x + cyl.center_y * cyl.center_y;
    const double disc = dc * dc - a * (cc - cyl.radius * cyl.radius);
    if (disc >= 0.0) {
      const double t = (dc - std::sqrt(disc)) / a;
      const double z = t * ray.dz;
      if (z >= cyl.base_z && z <= top) consider(t);
    }
  }
  if (std::abs(ray.dz) > 1e-15) {
    for (double plane : {cyl.base_z, top}) {
      const double t = plane / ray.dz;
      const double px = t * ray.dx - cyl.center_x;
      const double py = t * ray.dy - cyl.center_y;
      if (px * px + py * py <= cyl.radius * cyl.radius) consider(t);
    }
  }
  return best;
}

struct Hit {
  double t;
  std::size_t surface;  // 0 = ground, k = objects[k - 1]
};

}  // namespace

void SceneSpec::validate() const {
  grid.validate();
  if (rows_per_pixel < 1 || cols_per_pixel < 1) {
    throw std::invalid_argument("scene sampling density must be at least one ray per pixel");
  }
  if (max_returns < 1) throw std::invalid_argument("max_returns must be >= 1");
  if (!(max_range > kMinRange)) throw std::invalid_argument("max_range must exceed 0.1 m");
  if (!(jitter >= 0.0 && jitter < 1.0)) throw std::invalid_argument("jitter must lie in [0, 1)");
  if (!(range_noise >= 0.0) || !(remission_noise >= 0.0)) {
    throw std::invalid_argument("noise levels must be non-negative");
  }
  if (!(ground_height < 0.0)) throw std::invalid_argument("ground must lie below the sensor");
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const SceneObject& o = objects[k];
    const std::string name = "object " + std::to_string(k);
    if (o.base_z < ground_height) throw std::invalid_argument(name + " extends below the ground");
    if (!(o.height > 0.0)) throw std::invalid_argument(name + " needs a positive height");
    if (o.shape == Shape::kBox && !(o.length > 0.0 && o.width > 0.0)) {
      throw std::invalid_argument(name + " needs positive length and width");
    }
    if (o.shape == Shape::kCylinder && !(o.radius > 0.0)) {
      throw std::invalid_argument(name + " needs a positive radius");
    }
  }
}

SynthScene synth_scene(const SceneSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  SynthScene scene;

  const ProjectionConfig& g = spec.grid;
  const int sub_rows = spec.rows_per_pixel;
  const int sub_cols = spec.cols_per_pixel;
  std::vector<Hit> hits;
  hits.reserve(spec.objects.size() + 1);

  for (int row = 0; row < g.height; ++row) {
    for (int a = 0; a < sub_rows; ++a) {
      for (int col = 0; col < g.width; ++col) {
        for (int b = 0; b < sub_cols; ++b) {
          const double jv = spec.jitter * (rng.uniform() - 0.5);
          const double ju = spec.jitter * (rng.uniform() - 0.5);
          const double tv = (a + 0.5 + jv) / sub_rows;
          const double tu = (b + 0.5 + ju) / sub_cols;
          const double pitch = (1.0 - (row + tv) / g.height) * g.fov() - g.fov_down;
          const double yaw = std::numbers::pi * (1.0 - 2.0 * (col + tu) / g.width);
          const Ray ray{std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw),
                        std::sin(pitch)};

          hits.clear();
          if (auto t = hit_ground(ray, spec.ground_height)) hits.push_back({*t, 0});
          for (std::size_t k = 0; k < spec.objects.size(); ++k) {
            const SceneObject& o = spec.objects[k];
            auto t = o.shape == Shape::kBox ? hit_box(ray, o) : hit_cylinder(ray, o);
            if (t) hits.push_back({*t, k + 1});
          }
          std::sort(hits.begin(), hits.end(), [](const Hit& l, const Hit& r) {
            return l.t < r.t || (l.t == r.t && l.surface < r.surface);
          });

          int returns = 0;
          for (const Hit& hit : hits) {
            if (hit.t > spec.max_range || returns == spec.max_returns) break;
            const SceneObject* obj = hit.surface == 0 ? nullptr : &spec.objects[hit.surface - 1];
            double t = hit.t;
            if (spec.range_noise > 0.0) t = std::max(kMinRange, t + spec.range_noise * rng.normal());
            const float base = obj ? obj->remission : spec.ground_remission;
            double remission = base;
            if (spec.remission_noise > 0.0) remission += spec.remission_noise * rng.normal();

            scene.cloud.points.push_back(
                {static_cast<float>(t * ray.dx), static_cast<float>(t * ray.dy),
                 static_cast<float>(t * ray.dz),
                 static_cast<float>(std::clamp(remission, 0.0, 1.0))});
            scene.labels.semantic.push_back(obj ? obj->label : spec.ground_label);
            scene.labels.instance.push_back(static_cast<std::uint16_t>(hit.surface));
            scene.row.push_back(row);
            scene.col.push_back(col);
            ++returns;
            if (obj == nullptr || !obj->thin) break;
          }
        }
      }
    }
  }
  return scene;
}

std::vector<std::pair<std::size_t, std::size_t>> cross_class_copixel_pairs(const SynthScene& scene) {
  std::map<std::pair<int, int>, std::vector<std::size_t>> by_pixel;
  for (std::size_t i = 0; i < scene.row.size(); ++i) {
    by_pixel[{scene.row[i], scene.col[i]}].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [pixel, members] : by_pixel) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        if (scene.labels.semantic[members[a]] != scene.labels.semantic[members[b]]) {
          pairs.emplace_back(members[a], members[b]);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

SceneSpec parse_scene_spec(std::string_view text) {
  SceneSpec spec;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string key;
    if (!(in >> key)) continue;
    auto fail = [&](const std::string& why) {
      throw FormatError("scene line " + std::to_string(line_no) + " (" + key + "): " + why);
    };
    auto finish = [&] {
      if (in.fail()) fail("missing or non-numeric field");
      std::string extra;
      if (in >> extra) fail("unexpected token '" + extra + "'");
    };
    auto read_label = [&](ClassId& out) {
      long v = -1;
      in >> v;
      if (!in.fail() && (v < 0 || v > 0xFFFF)) fail("class id out of range");
      out = static_cast<ClassId>(v);
    };
    auto read_thin = [&](bool& thin) {
      std::string flag;
      if (in >> flag) {
        if (flag != "thin" && flag != "solid") fail("expected 'thin' or 'solid'");
        thin = flag == "thin";
      } else {
        in.clear();
      }
    };

    if (key == "grid") {
      in >> spec.grid.height >> spec.grid.width;
      finish();
    } else if (key == "fov_deg") {
      double up = 0, down = 0;
      in >> up >> down;
      finish();
      spec.grid.fov_up = deg_to_rad(up);
      spec.grid.fov_down = deg_to_rad(down);
    } else if (key == "samples_per_pixel") {
      in >> spec.rows_per_pixel >> spec.cols_per_pixel;
      finish();
    } else if (key == "max_returns") {
      in >> spec.max_returns;
      finish();
    } else if (key == "max_range") {
      in >> spec.max_range;
      finish();
    } else if (key == "jitter") {
      in >> spec.jitter;
      finish();
    } else if (key == "range_noise") {
      in >> spec.range_noise;
      finish();
    } else if (key == "remission_noise") {
      in >> spec.remission_noise;
      finish();
    } else if (key == "ground") {
      in >> spec.ground_height;
      read_label(spec.ground_label);
      in >> spec.ground_remission;
      finish();
    } else if (key == "box") {
      SceneObject o;
      o.shape = Shape::kBox;
      double yaw_deg = 0;
      in >> o.center_x >> o.center_y >> o.base_z >> o.length >> o.width >> o.height >> yaw_deg;
      read_label(o.label);
      in >> o.remission;
      if (in.fail()) fail("missing or non-numeric field");
      read_thin(o.thin);
      finish();
      o.yaw = deg_to_rad(yaw_deg);
      spec.objects.push_back(o);
    } else if (key == "cylinder") {
      SceneObject o;
      o.shape = Shape::kCylinder;
      in >> o.center_x >> o.center_y >> o.base_z >> o.radius >> o.height;
      read_label(o.label);
      in >> o.remission;
      if (in.fail()) fail("missing or non-numeric field");
      read_thin(o.thin);
      finish();
      spec.objects.push_back(o);
    } else {
      fail("unknown key");
    }
  }
  return spec;
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  return parse_scene_spec(read_text_file(path));
}

namespace scenes {

namespace {

SceneObject cylinder(double x, double y, double base, double radius, double height, ClassId label,
                     float remission, bool thin) {
  SceneObject o;
  o.shape = Shape::kCylinder;
  o.center_x = x;
  o.center_y = y;
  o.base_z = base;
  o.radius = radius;
  o.height = height;
  o.label = label;
  o.remission = remission;
  o.thin = thin;
  return o;
}

SceneObject box(double x, double y, double base, double length, double width, double height,
                double yaw_deg, ClassId label, float remission) {
  SceneObject o;
  o.shape = Shape::kBox;
  o.center_x = x;
  o.center_y = y;
  o.base_z = base;
  o.length = length;
  o.width = width;
  o.height = height;
  o.yaw = deg_to_rad(yaw_deg);
  o.label = label;
  o.remission = remission;
  return o;
}

}  // namespace

SceneSpec ground_only() {
  SceneSpec spec;
  spec.ground_height = -2.0;
  return spec;
}

SceneSpec pole_before_wall() {
  SceneSpec spec;
  spec.objects.push_back(box(12.2, 0.0, -1.73, 0.4, 12.0, 4.0, 0.0, 50, 0.45f));
  spec.objects.push_back(cylinder(8.0, 0.0, -1.73, 0.04, 3.0, 80, 0.6f, true));
  return spec;
}

SceneSpec street() {
  SceneSpec spec;
  const double g = spec.ground_height;
  spec.objects = {
      box(0.0, 9.5, g, 80.0, 2.0, 8.0, 0.0, 50, 0.4f),
      box(0.0, -9.5, g, 80.0, 2.0, 6.0, 0.0, 50, 0.4f),
      box(7.0, 3.6, g, 4.2, 1.8, 1.5, 0.0, 10, 0.7f),
      box(-9.0, -3.4, g, 4.4, 1.9, 1.6, 3.0, 10, 0.7f),
      box(18.0, 3.4, g, 4.0, 1.8, 1.5, -2.0, 10, 0.7f),
      cylinder(11.0, 6.5, g, 0.05, 4.5, 80, 0.6f, true),
      cylinder(-6.0, 6.5, g, 0.05, 4.5, 80, 0.6f, true),
      cylinder(22.0, -6.5, g, 0.05, 4.5, 80, 0.6f, true),
      cylinder(14.0, -6.8, g, 0.08, 2.5, 71, 0.35f, true),
      cylinder(-15.0, 6.8, g, 0.08, 2.5, 71, 0.35f, true),
      cylinder(-15.0, 6.8, g + 2.5, 1.2, 2.0, 70, 0.25f, false),
      cylinder(26.0, 6.8, g, 0.9, 3.0, 70, 0.25f, false),
  };
  return spec;
}

SceneSpec random(std::uint64_t seed, const ProjectionConfig& grid) {
  Rng rng(seed ^ 0x9E3779B97F4A7C15ull);
  SceneSpec spec;
  spec.grid = grid;
  spec.ground_height = rng.uniform(-2.2, -1.4);
  spec.cols_per_pixel = rng.uniform() < 0.5 ? 1 : 2;
  spec.jitter = rng.uniform(0.0, 0.8);
  spec.range_noise = rng.uniform() < 0.5 ? 0.0 : 0.01;
  const int count = 4 + static_cast<int>(rng.uniform() * 9.0);
  const double g = spec.ground_height;
  for (int k = 0; k < count; ++k) {
    const double dist = rng.uniform(4.0, 30.0);
    const double az = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double x = dist * std::cos(az), y = dist * std::sin(az);
    const double pick = rng.uniform();
    if (pick < 0.35) {
      const bool pole = rng.uniform() < 0.5;
      spec.objects.push_back(cylinder(x, y, g, rng.uniform(0.03, 0.08), rng.uniform(1.5, 5.0),
                                      pole ? 80 : 71, pole ? 0.6f : 0.35f, true));
    } else if (pick < 0.5) {
      spec.objects.push_back(cylinder(x, y, g, rng.uniform(0.3, 1.5), rng.uniform(0.5, 3.0), 70,
                                      0.25f, false));
    } else {
      static constexpr ClassId kBoxLabels[] = {10, 50, 51, 18};
      const ClassId label = kBoxLabels[static_cast<int>(rng.uniform() * 4.0) % 4];
      const double length = rng.uniform(0.5, 2.0 * dist / 3.0);
      const double width = rng.uniform(0.5, 2.0 * dist / 3.0);
      spec.objects.push_back(box(x, y, g, std::min(length, 8.0), std::min(width, 8.0),
                                 rng.uniform(0.8, 5.0), rng.uniform(0.0, 180.0), label,
                                 static_cast<float>(rng.uniform(0.2, 0.8))));
    }
  }
  return spec;
}

}  // namespace scenes

}  // namespace rangeseg
