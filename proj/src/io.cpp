// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "rangeseg/error.hpp"

namespace rangeseg {

namespace le {

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::byte>((v >> shift) & 0xFFu));
  }
}

void put_f32(Bytes& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(std::span<const std::byte> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  }
  return v;
}

float get_f32(std::span<const std::byte> in, std::size_t offset) {
  return std::bit_cast<float>(get_u32(in, offset));
}

}  // namespace le

PointCloud read_scan(std::span<const std::byte> bytes) {
  if (bytes.size() % 16 != 0) {
    throw FormatError("scan length " + std::to_string(bytes.size()) +
                      " is not a multiple of 16 bytes");
  }
  PointCloud cloud;
  const std::size_t n = bytes.size() / 16;
  cloud.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point& p = cloud.points[i];
    p.x = le::get_f32(bytes, 16 * i);
    p.y = le::get_f32(bytes, 16 * i + 4);
    p.z = le::get_f32(bytes, 16 * i + 8);
    p.remission = le::get_f32(bytes, 16 * i + 12);
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) ||
        !std::isfinite(p.remission)) {
      throw DataError("non-finite value in scan at point " + std::to_string(i));
    }
  }
  return cloud;
}

Bytes write_scan(const PointCloud& cloud) {
  Bytes out;
  out.reserve(cloud.size() * 16);
  for (const Point& p : cloud.points) {
    le::put_f32(out, p.x);
    le::put_f32(out, p.y);
    le::put_f32(out, p.z);
    le::put_f32(out, p.remission);
  }
  return out;
}

LabelSet read_labels(std::span<const std::byte> bytes) {
  if (bytes.size() % 4 != 0) {
    throw FormatError("label length " + std::to_string(bytes.size()) +
                      " is not a multiple of 4 bytes");
  }
  LabelSet labels;
  const std::size_t n = bytes.size() / 4;
  labels.semantic.resize(n);
  labels.instance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t word = le::get_u32(bytes, 4 * i);
    labels.semantic[i] = static_cast<ClassId>(word & 0xFFFFu);
    labels.instance[i] = static_cast<std::uint16_t>(word >> 16);
  }
  return labels;
}

Bytes write_labels(const LabelSet& labels) {
  if (labels.instance.size() != labels.semantic.size()) {
    throw DataError("semantic and instance arrays differ in length");
  }
  Bytes out;
  out.reserve(labels.size() * 4);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    le::put_u32(out, static_cast<std::uint32_t>(labels.semantic[i]) |
                         (static_cast<std::uint32_t>(labels.instance[i]) << 16));
  }
  return out;
}

LabelSet make_labels(std::vector<ClassId> semantic) {
  LabelSet labels;
  labels.instance.assign(semantic.size(), 0);
  labels.semantic = std::move(semantic);
  return labels;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Bytes out(raw.size());
  std::memcpy(out.data(), raw.data(), raw.size());
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw FormatError("short write to " + path.string());
  }
}

ClassId RemapTable::lookup(ClassId raw, bool* listed) const {
  auto it = mapping.find(raw);
  if (listed != nullptr) *listed = it != mapping.end();
  return it == mapping.end() ? ignore_id : it->second;
}

RemapResult remap_labels(const LabelSet& labels, const RemapTable& table) {
  RemapResult result;
  result.labels.instance = labels.instance;
  result.labels.semantic.reserve(labels.size());
  for (ClassId raw : labels.semantic) {
    bool listed = false;
    result.labels.semantic.push_back(table.lookup(raw, &listed));
    if (!listed) ++result.unlisted;
  }
  return result;
}

RemapTable parse_remap_table(std::string_view text) {
  RemapTable table;
  table.mapping.clear();
  std::vector<std::pair<long, long>> pairs;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    long value = 0;
    std::string extra;
    auto fail = [&] {
      throw FormatError("remap table line " + std::to_string(line_no) + ": '" + line + "'");
    };
    if (first == "num_classes" || first == "ignore") {
      if (!(fields >> value) || (fields >> extra) || value < 1 || value > 0xFFFF) fail();
      if (first == "num_classes") {
        table.num_classes = static_cast<int>(value);
      } else {
        table.ignore_id = static_cast<ClassId>(value);
      }
      continue;
    }
    long raw = 0;
    try {
      std::size_t used = 0;
      raw = std::stol(first, &used);
      if (used != first.size()) fail();
    } catch (const std::logic_error&) {
      fail();
    }
    if (!(fields >> value) || (fields >> extra) || raw < 0 || raw > 0xFFFF || value < 0 ||
        value > 0xFFFF) {
      fail();
    }
    pairs.emplace_back(raw, value);
  }
  for (auto [raw, train] : pairs) {
    if (train >= table.num_classes && train != table.ignore_id) {
      throw FormatError("remap table maps " + std::to_string(raw) + " to " +
                        std::to_string(train) + ", outside [0, " +
                        std::to_string(table.num_classes) + ") and not the ignore id");
    }
    table.mapping[static_cast<ClassId>(raw)] = static_cast<ClassId>(train);
  }
  return table;
}

RemapTable load_remap_table(const std::filesystem::path& path) {
  return parse_remap_table(read_text_file(path));
}

}  // namespace rangeseg
