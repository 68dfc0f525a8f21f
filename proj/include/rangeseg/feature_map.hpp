// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_FEATURE_MAP_HPP
#define RANGESEG_FEATURE_MAP_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rangeseg {

/// Dense H x W x C tensor stored row-major with channels innermost, so each
/// pixel's channel vector is contiguous.
struct FeatureMap {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int h, int w, int c, double fill = 0.0)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c),
             fill) {}

  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(col)) *
           static_cast<std::size_t>(channels);
  }
  double& at(int row, int col, int ch) { return data[offset(row, col) + static_cast<std::size_t>(ch)]; }
  double at(int row, int col, int ch) const {
    return data[offset(row, col) + static_cast<std::size_t>(ch)];
  }
  std::span<const double> pixel(int row, int col) const {
    return {data.data() + offset(row, col), static_cast<std::size_t>(channels)};
  }
  std::span<double> pixel(int row, int col) {
    return {data.data() + offset(row, col), static_cast<std::size_t>(channels)};
  }
};

}  // namespace rangeseg

#endif  // RANGESEG_FEATURE_MAP_HPP
