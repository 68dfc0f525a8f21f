// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_NORMALS_HPP
#define RANGESEG_NORMALS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

#include "rangeseg/feature_map.hpp"
#include "rangeseg/projection.hpp"
#include "rangeseg/raw_dump.hpp"

namespace rangeseg {

/// Unit surface normals facing the sensor, one per range-image pixel.
struct NormalMap {
  int height = 0;
  int width = 0;
  std::vector<float> n1, n2, n3;
  std::vector<std::uint8_t> valid;

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }
};

/// Forward-difference normals: cross product of the steps to the next
/// column (wrapping) and the next row (not wrapping). Pixels without both
/// neighbors, or with a degenerate cross product, are invalid.
NormalMap estimate_normals(const RangeImage& img);

struct ChannelStat {
  double mean = 0.0;
  double std = 1.0;
};

/// Per-channel standardization constants keyed by channel.
using ChannelStats = std::map<Channel, ChannelStat>;

/// `channel mean std` lines, `#` comments. Throws FormatError on malformed
/// lines and std::invalid_argument on std <= 0.
ChannelStats parse_channel_stats(std::string_view text);
ChannelStats load_channel_stats(const std::filesystem::path& path);

enum class InputLayout {
  kFiveChannel,   // x, y, z, range, remission
  kEightChannel,  // ... plus n1, n2, n3
};

int channel_count(InputLayout layout);

/// Standardized network input, channels in layout order. Pixels without a
/// point (and, for the normal channels, without a valid normal) are 0.
/// Throws std::invalid_argument when a needed channel has no stats or a
/// non-positive std, and when the eight-channel layout is requested without
/// normals.
FeatureMap build_input_tensor(const RangeImage& img, const NormalMap* normals,
                              const ChannelStats& stats, InputLayout layout);

}  // namespace rangeseg

#endif  // RANGESEG_NORMALS_HPP
