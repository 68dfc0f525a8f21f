// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_IO_HPP
#define RANGESEG_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rangeseg/point_cloud.hpp"

namespace rangeseg {

using Bytes = std::vector<std::byte>;

// SemanticKITTI scan: little-endian float32 (x, y, z, remission) per point.
// Throws FormatError when the length is not a multiple of 16 and DataError
// naming the first point that carries a non-finite value.
PointCloud read_scan(std::span<const std::byte> bytes);
Bytes write_scan(const PointCloud& cloud);

// SemanticKITTI label: little-endian uint32 per point, semantic id in the
// low 16 bits and instance id in the high 16 bits.
LabelSet read_labels(std::span<const std::byte> bytes);
Bytes write_labels(const LabelSet& labels);

/// Labels with every instance id zero.
LabelSet make_labels(std::vector<ClassId> semantic);

Bytes read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

/// Raw SemanticKITTI id to training id. Ids absent from the table map to
/// `ignore_id`.
struct RemapTable {
  std::unordered_map<ClassId, ClassId> mapping;
  int num_classes = 19;
  ClassId ignore_id = kIgnoreId;

  ClassId lookup(ClassId raw, bool* listed = nullptr) const;
};

struct RemapResult {
  LabelSet labels;
  std::size_t unlisted = 0;  // points whose raw id had no table entry
};

RemapResult remap_labels(const LabelSet& labels, const RemapTable& table);

/// Parses `raw_id train_id` lines; `#` starts a comment. Optional directives
/// `num_classes N` and `ignore N`. Throws FormatError on malformed lines and
/// on train ids that are neither < num_classes nor the ignore id.
RemapTable parse_remap_table(std::string_view text);
RemapTable load_remap_table(const std::filesystem::path& path);

/// Little-endian primitive encoding shared by all binary formats.
namespace le {
void put_u32(Bytes& out, std::uint32_t v);
void put_f32(Bytes& out, float v);
std::uint32_t get_u32(std::span<const std::byte> in, std::size_t offset);
float get_f32(std::span<const std::byte> in, std::size_t offset);
}  // namespace le

}  // namespace rangeseg

#endif  // RANGESEG_IO_HPP
