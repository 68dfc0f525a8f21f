// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_INTERP_HPP
#define RANGESEG_INTERP_HPP

#include <array>
#include <span>
#include <vector>

#include "rangeseg/feature_map.hpp"

namespace rangeseg {

enum class Metric { kL1, kL2 };

struct InterpSpec {
  int k = 4;
  Metric metric = Metric::kL1;
  double eps = 1e-12;  // distances below this return the known value as-is

  void validate() const;
};

/// (row, col) in lattice units.
using Coord2 = std::array<double, 2>;

struct KnownSample {
  Coord2 position;
  std::span<const double> value;
};

double distance(const Coord2& a, const Coord2& b, Metric metric);

/// Inverse-distance weighted mean of the k nearest known samples. Equal
/// distances keep input order. Throws std::invalid_argument on an empty
/// known set, k > |known|, or mismatched value lengths.
std::vector<double> distance_interpolate(std::span<const KnownSample> known, const Coord2& query,
                                         const InterpSpec& spec);

/// distance_interpolate over the lattice nodes of `fmap` (node (r, c) at
/// position (r, c), input order row-major), evaluated at `query` inside
/// the lattice. Only a window around the query is searched; it is grown
/// until no node outside it can be among the k nearest.
std::vector<double> lattice_interpolate(const FeatureMap& fmap, const Coord2& query,
                                        const InterpSpec& spec);

/// Lattice coordinate sampled by output index `i` under the corner-aligned
/// convention: i * (in - 1) / (out - 1), or 0 when out == 1.
double corner_aligned_coord(int i, int in_size, int out_size);

/// Corner-aligned bilinear resize to a size at least as large as the input.
FeatureMap bilinear_upsample(const FeatureMap& fmap, int out_h, int out_w);

/// Upsamples every map to the resolution of the first and concatenates
/// channels in list order. Each map must be the first map's size divided
/// by the same power of two in both dimensions.
FeatureMap fid_concat(std::span<const FeatureMap> maps);

struct Discrepancy {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  FeatureMap diff;  // distance interpolation minus bilinear, per output sample
};

/// Compares lattice_interpolate against bilinear_upsample at every output
/// sample of the corner-aligned grid.
Discrepancy interp_discrepancy(const FeatureMap& fmap, int out_h, int out_w,
                               const InterpSpec& spec = {});

}  // namespace rangeseg

#endif  // RANGESEG_INTERP_HPP
