// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_RENDER_HPP
#define RANGESEG_RENDER_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "rangeseg/io.hpp"
#include "rangeseg/postprocess.hpp"

namespace rangeseg {

using Rgb = std::array<std::uint8_t, 3>;
using ColorTable = std::map<ClassId, Rgb>;

/// `id r g b` lines, `#` comments.
ColorTable parse_color_table(std::string_view text);
ColorTable load_color_table(const std::filesystem::path& path);

struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

/// Binary PPM (P6), maxval 255.
Bytes encode_ppm(const RgbImage& img);

/// Grayscale, linearly stretched over the masked pixels' [min, max];
/// unmasked pixels are black. An empty mask means every pixel counts.
RgbImage render_channel(int height, int width, std::span<const float> values,
                        std::span<const std::uint8_t> mask = {});

/// Class colors; ids missing from the table and unmasked pixels are black.
RgbImage render_labels(const LabelImage& labels, const ColorTable& colors,
                       std::span<const std::uint8_t> mask = {});

}  // namespace rangeseg

#endif  // RANGESEG_RENDER_HPP
