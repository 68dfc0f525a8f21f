// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_RAW_DUMP_HPP
#define RANGESEG_RAW_DUMP_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rangeseg/feature_map.hpp"
#include "rangeseg/io.hpp"
#include "rangeseg/projection.hpp"

// Binary interchange between CLI stages. All integers are little-endian
// uint32 and all samples little-endian float32, row-major.
//
//   channel dump:  "RIMG" H W channel_id | H*W float32            (16-byte header)
//   feature dump:  "RFMP" H W 0xFFFFFFFF C | H*W*C float32, HWC   (20-byte header)
//   projection:    "RPRJ" H W N          | N * (row, col, range f32, flags)
//                  flags: bit 0 set for the pixel owner, other bits zero
//
// Invalid range-image pixels are written as 0 in every channel.

namespace rangeseg {

enum class Channel : std::uint32_t {
  kX = 0,
  kY = 1,
  kZ = 2,
  kRange = 3,
  kRemission = 4,
  kN1 = 5,
  kN2 = 6,
  kN3 = 7,
};

inline constexpr std::uint32_t kChannelMagic = 0x474D4952;     // "RIMG"
inline constexpr std::uint32_t kFeatureMagic = 0x504D4652;     // "RFMP"
inline constexpr std::uint32_t kProjectionMagic = 0x4A525052;  // "RPRJ"

std::string_view channel_name(Channel ch);
/// Throws FormatError for unknown names.
Channel channel_from_name(std::string_view name);

struct ChannelDump {
  int height = 0;
  int width = 0;
  Channel channel = Channel::kRange;
  std::vector<float> values;
};

Bytes write_channel_dump(const ChannelDump& dump);
ChannelDump read_channel_dump(std::span<const std::byte> bytes);

/// Channel of a range image with invalid pixels zeroed.
ChannelDump range_image_channel(const RangeImage& img, Channel ch);

Bytes write_feature_dump(const FeatureMap& fmap);
FeatureMap read_feature_dump(std::span<const std::byte> bytes);

Bytes write_projection(const PointProjection& proj);
PointProjection read_projection(std::span<const std::byte> bytes);

/// Rebuilds a RangeImage from its channel dumps and the projection sidecar.
/// Pixel ownership comes from the sidecar; a pixel is valid iff it has an
/// owner, whose range must equal the dumped range. Missing channels
/// (nullptr) are left at zero. Throws DataError on any inconsistency.
RangeImage assemble_range_image(const PointProjection& proj, const ChannelDump& range,
                                const ChannelDump* x = nullptr, const ChannelDump* y = nullptr,
                                const ChannelDump* z = nullptr, const ChannelDump* remission = nullptr);

}  // namespace rangeseg

#endif  // RANGESEG_RAW_DUMP_HPP
