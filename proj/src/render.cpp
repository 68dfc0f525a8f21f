// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rangeseg/error.hpp"

namespace rangeseg {

ColorTable parse_color_table(std::string_view text) {
  ColorTable table;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    long id = 0, r = 0, g = 0, b = 0;
    if (!(in >> id)) continue;
    std::string extra;
    if (!(in >> r >> g >> b) || (in >> extra) || id < 0 || id > 0xFFFF || r < 0 || r > 255 ||
        g < 0 || g > 255 || b < 0 || b > 255) {
      throw FormatError("color table line " + std::to_string(line_no) + ": expected 'id r g b'");
    }
    table[static_cast<ClassId>(id)] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                       static_cast<std::uint8_t>(b)};
  }
  return table;
}

ColorTable load_color_table(const std::filesystem::path& path) {
  return parse_color_table(read_text_file(path));
}

Bytes encode_ppm(const RgbImage& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  Bytes out(header.size() + img.rgb.size());
  std::transform(header.begin(), header.end(), out.begin(),
                 [](char c) { return static_cast<std::byte>(c); });
  std::transform(img.rgb.begin(), img.rgb.end(), out.begin() + static_cast<std::ptrdiff_t>(header.size()),
                 [](std::uint8_t v) { return static_cast<std::byte>(v); });
  return out;
}

RgbImage render_channel(int height, int width, std::span<const float> values,
                        std::span<const std::uint8_t> mask) {
  const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  if (values.size() != n || (!mask.empty() && mask.size() != n)) {
    throw DataError("render_channel: buffer sizes do not match the image");
  }
  auto counted = [&](std::size_t i) { return mask.empty() || mask[i] != 0; };
  float lo = std::numeric_limits<float>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    if (!counted(i)) continue;
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  RgbImage img{height, width, std::vector<std::uint8_t>(3 * n, 0)};
  const float span = hi > lo ? hi - lo : 1.0f;
  for (std::size_t i = 0; i < n; ++i) {
    if (!counted(i)) continue;
    const auto v = static_cast<std::uint8_t>(std::lround(255.0f * (values[i] - lo) / span));
    img.rgb[3 * i] = img.rgb[3 * i + 1] = img.rgb[3 * i + 2] = v;
  }
  return img;
}

RgbImage render_labels(const LabelImage& labels, const ColorTable& colors,
                       std::span<const std::uint8_t> mask) {
  const std::size_t n = labels.labels.size();
  if (!mask.empty() && mask.size() != n) throw DataError("render_labels: mask size mismatch");
  RgbImage img{labels.height, labels.width, std::vector<std::uint8_t>(3 * n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.empty() && !mask[i]) continue;
    auto it = colors.find(labels.labels[i]);
    if (it == colors.end()) continue;
    std::copy(it->second.begin(), it->second.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  return img;
}

}  // namespace rangeseg
