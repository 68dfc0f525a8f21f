// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/normals.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rangeseg/error.hpp"
#include "rangeseg/io.hpp"

namespace rangeseg {

NormalMap estimate_normals(const RangeImage& img) {
  NormalMap out;
  out.height = img.height;
  out.width = img.width;
  const std::size_t n = img.pixels();
  out.n1.assign(n, 0.0f);
  out.n2.assign(n, 0.0f);
  out.n3.assign(n, 0.0f);
  out.valid.assign(n, 0);

  for (int row = 0; row + 1 < img.height; ++row) {
    for (int col = 0; col < img.width; ++col) {
      const std::size_t p = img.index(row, col);
      const std::size_t ph = img.index(row, (col + 1) % img.width);
      const std::size_t pv = img.index(row + 1, col);
      if (!img.valid[p] || !img.valid[ph] || !img.valid[pv] || ph == p) continue;

      const double px = img.x[p], py = img.y[p], pz = img.z[p];
      const double ax = img.x[ph] - px, ay = img.y[ph] - py, az = img.z[ph] - pz;
      const double bx = img.x[pv] - px, by = img.y[pv] - py, bz = img.z[pv] - pz;
      const double cx = ay * bz - az * by;
      const double cy = az * bx - ax * bz;
      const double cz = ax * by - ay * bx;
      const double norm = std::sqrt(cx * cx + cy * cy + cz * cz);
      if (!(norm >= 1e-12)) continue;

      float nx = static_cast<float>(cx / norm);
      float ny = static_cast<float>(cy / norm);
      float nz = static_cast<float>(cz / norm);
      // Orientation is decided on the stored floats so the sign test holds
      // exactly for what consumers read back.
      if (static_cast<double>(nx) * px + static_cast<double>(ny) * py +
              static_cast<double>(nz) * pz > 0.0) {
        nx = -nx;
        ny = -ny;
        nz = -nz;
      }
      out.n1[p] = nx;
      out.n2[p] = ny;
      out.n3[p] = nz;
      out.valid[p] = 1;
    }
  }
  return out;
}

ChannelStats parse_channel_stats(std::string_view text) {
  ChannelStats stats;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string name;
    if (!(in >> name)) continue;
    ChannelStat s;
    std::string extra;
    if (!(in >> s.mean >> s.std) || (in >> extra)) {
      throw FormatError("stats line " + std::to_string(line_no) + ": expected 'channel mean std'");
    }
    if (!(s.std > 0.0)) {
      throw std::invalid_argument("stats line " + std::to_string(line_no) + ": std must be > 0");
    }
    stats[channel_from_name(name)] = s;
  }
  return stats;
}

ChannelStats load_channel_stats(const std::filesystem::path& path) {
  return parse_channel_stats(read_text_file(path));
}

int channel_count(InputLayout layout) { return layout == InputLayout::kFiveChannel ? 5 : 8; }

FeatureMap build_input_tensor(const RangeImage& img, const NormalMap* normals,
                              const ChannelStats& stats, InputLayout layout) {
  const int channels = channel_count(layout);
  if (layout == InputLayout::kEightChannel) {
    if (normals == nullptr) {
      throw std::invalid_argument("eight-channel input requested without a normal map");
    }
    if (normals->height != img.height || normals->width != img.width) {
      throw std::invalid_argument("normal map size does not match the range image");
    }
  }
  std::vector<ChannelStat> per_channel;
  for (int c = 0; c < channels; ++c) {
    const auto ch = static_cast<Channel>(c);
    auto it = stats.find(ch);
    if (it == stats.end()) {
      throw std::invalid_argument("no standardization stats for channel " +
                                  std::string(channel_name(ch)));
    }
    if (!(it->second.std > 0.0)) {
      throw std::invalid_argument("std of channel " + std::string(channel_name(ch)) +
                                  " must be > 0");
    }
    per_channel.push_back(it->second);
  }

  const std::vector<float>* sources[8] = {&img.x, &img.y, &img.z, &img.range, &img.remission,
                                          nullptr, nullptr, nullptr};
  if (normals != nullptr && layout == InputLayout::kEightChannel) {
    sources[5] = &normals->n1;
    sources[6] = &normals->n2;
    sources[7] = &normals->n3;
  }

  FeatureMap out(img.height, img.width, channels);
  for (std::size_t pix = 0; pix < img.pixels(); ++pix) {
    if (!img.valid[pix]) continue;
    double* dst = out.data.data() + pix * static_cast<std::size_t>(channels);
    for (int c = 0; c < channels; ++c) {
      if (c >= 5 && !normals->valid[pix]) continue;
      const ChannelStat& s = per_channel[static_cast<std::size_t>(c)];
      dst[c] = ((*sources[c])[pix] - s.mean) / s.std;
    }
  }
  return out;
}

}  // namespace rangeseg
