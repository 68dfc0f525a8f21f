// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/raw_dump.hpp"

#include <array>
#include <cmath>
#include <string>

#include "rangeseg/error.hpp"

namespace rangeseg {
namespace {

constexpr std::array<std::string_view, 8> kChannelNames = {"x",         "y",  "z",  "range",
                                                           "remission", "n1", "n2", "n3"};
constexpr std::uint32_t kAllChannels = 0xFFFFFFFFu;

void check_magic(std::span<const std::byte> bytes, std::uint32_t magic, std::size_t header,
                 const char* what) {
  if (bytes.size() < header) {
    throw FormatError(std::string(what) + ": truncated header");
  }
  if (le::get_u32(bytes, 0) != magic) {
    throw FormatError(std::string(what) + ": bad magic");
  }
}

}  // namespace

std::string_view channel_name(Channel ch) {
  const auto id = static_cast<std::uint32_t>(ch);
  if (id >= kChannelNames.size()) throw FormatError("unknown channel id " + std::to_string(id));
  return kChannelNames[id];
}

Channel channel_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
    if (kChannelNames[i] == name) return static_cast<Channel>(i);
  }
  throw FormatError("unknown channel '" + std::string(name) + "'");
}

Bytes write_channel_dump(const ChannelDump& dump) {
  const std::size_t n = static_cast<std::size_t>(dump.height) * static_cast<std::size_t>(dump.width);
  if (dump.values.size() != n) throw DataError("channel dump size does not match H*W");
  Bytes out;
  out.reserve(16 + 4 * n);
  le::put_u32(out, kChannelMagic);
  le::put_u32(out, static_cast<std::uint32_t>(dump.height));
  le::put_u32(out, static_cast<std::uint32_t>(dump.width));
  le::put_u32(out, static_cast<std::uint32_t>(dump.channel));
  for (float v : dump.values) le::put_f32(out, v);
  return out;
}

ChannelDump read_channel_dump(std::span<const std::byte> bytes) {
  check_magic(bytes, kChannelMagic, 16, "channel dump");
  ChannelDump dump;
  const std::uint32_t h = le::get_u32(bytes, 4), w = le::get_u32(bytes, 8);
  dump.channel = static_cast<Channel>(le::get_u32(bytes, 12));
  channel_name(dump.channel);
  const std::uint64_t n = static_cast<std::uint64_t>(h) * w;
  if (bytes.size() != 16 + 4 * n) {
    throw FormatError("channel dump: payload size does not match " + std::to_string(h) + "x" +
                      std::to_string(w));
  }
  dump.height = static_cast<int>(h);
  dump.width = static_cast<int>(w);
  dump.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) dump.values[i] = le::get_f32(bytes, 16 + 4 * i);
  return dump;
}

ChannelDump range_image_channel(const RangeImage& img, Channel ch) {
  const std::vector<float>* src = nullptr;
  switch (ch) {
    case Channel::kX: src = &img.x; break;
    case Channel::kY: src = &img.y; break;
    case Channel::kZ: src = &img.z; break;
    case Channel::kRange: src = &img.range; break;
    case Channel::kRemission: src = &img.remission; break;
    default: throw DataError("range images carry no " + std::string(channel_name(ch)) + " channel");
  }
  ChannelDump dump{img.height, img.width, ch, *src};
  for (std::size_t i = 0; i < dump.values.size(); ++i) {
    if (!img.valid[i]) dump.values[i] = 0.0f;
  }
  return dump;
}

Bytes write_feature_dump(const FeatureMap& fmap) {
  Bytes out;
  out.reserve(20 + 4 * fmap.data.size());
  le::put_u32(out, kFeatureMagic);
  le::put_u32(out, static_cast<std::uint32_t>(fmap.height));
  le::put_u32(out, static_cast<std::uint32_t>(fmap.width));
  le::put_u32(out, kAllChannels);
  le::put_u32(out, static_cast<std::uint32_t>(fmap.channels));
  for (double v : fmap.data) le::put_f32(out, static_cast<float>(v));
  return out;
}

FeatureMap read_feature_dump(std::span<const std::byte> bytes) {
  check_magic(bytes, kFeatureMagic, 20, "feature dump");
  const std::uint32_t h = le::get_u32(bytes, 4), w = le::get_u32(bytes, 8),
                      c = le::get_u32(bytes, 16);
  const std::uint64_t n = static_cast<std::uint64_t>(h) * w * c;
  if (bytes.size() != 20 + 4 * n) throw FormatError("feature dump: payload size mismatch");
  FeatureMap fmap(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
  for (std::size_t i = 0; i < n; ++i) fmap.data[i] = le::get_f32(bytes, 20 + 4 * i);
  return fmap;
}

Bytes write_projection(const PointProjection& proj) {
  Bytes out;
  out.reserve(16 + 16 * proj.size());
  le::put_u32(out, kProjectionMagic);
  le::put_u32(out, static_cast<std::uint32_t>(proj.height));
  le::put_u32(out, static_cast<std::uint32_t>(proj.width));
  le::put_u32(out, static_cast<std::uint32_t>(proj.size()));
  for (std::size_t i = 0; i < proj.size(); ++i) {
    le::put_u32(out, static_cast<std::uint32_t>(proj.row[i]));
    le::put_u32(out, static_cast<std::uint32_t>(proj.col[i]));
    le::put_f32(out, proj.range[i]);
    le::put_u32(out, proj.is_owner[i] ? 1u : 0u);
  }
  return out;
}

PointProjection read_projection(std::span<const std::byte> bytes) {
  check_magic(bytes, kProjectionMagic, 16, "projection sidecar");
  PointProjection proj;
  proj.height = static_cast<int>(le::get_u32(bytes, 4));
  proj.width = static_cast<int>(le::get_u32(bytes, 8));
  const std::size_t n = le::get_u32(bytes, 12);
  if (bytes.size() != 16 + 16 * n) throw FormatError("projection sidecar: payload size mismatch");
  proj.row.resize(n);
  proj.col.resize(n);
  proj.range.resize(n);
  proj.is_owner.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t at = 16 + 16 * i;
    const std::uint32_t r = le::get_u32(bytes, at), c = le::get_u32(bytes, at + 4);
    if (r >= static_cast<std::uint32_t>(proj.height) || c >= static_cast<std::uint32_t>(proj.width)) {
      throw DataError("projection sidecar: point " + std::to_string(i) + " outside the image");
    }
    proj.row[i] = static_cast<std::int32_t>(r);
    proj.col[i] = static_cast<std::int32_t>(c);
    proj.range[i] = le::get_f32(bytes, at + 8);
    proj.is_owner[i] = (le::get_u32(bytes, at + 12) & 1u) ? 1 : 0;
  }
  return proj;
}

RangeImage assemble_range_image(const PointProjection& proj, const ChannelDump& range,
                                const ChannelDump* x, const ChannelDump* y, const ChannelDump* z,
                                const ChannelDump* remission) {
  auto check_dims = [&](const ChannelDump* d) {
    if (d != nullptr && (d->height != proj.height || d->width != proj.width)) {
      throw DataError("channel " + std::string(channel_name(d->channel)) +
                      " does not match the projection size");
    }
  };
  for (const ChannelDump* d : {&range, x, y, z, remission}) check_dims(d);

  RangeImage img(proj.height, proj.width);
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (!proj.is_owner[i]) continue;
    const std::size_t pix = proj.pixel_index(i);
    if (img.valid[pix]) {
      throw DataError("projection sidecar: two owners on pixel " + std::to_string(pix));
    }
    if (range.values[pix] != proj.range[i]) {
      throw DataError("range dump disagrees with the owner range at pixel " + std::to_string(pix));
    }
    img.valid[pix] = 1;
    img.owner[pix] = static_cast<std::int32_t>(i);
    img.range[pix] = range.values[pix];
    if (x) img.x[pix] = x->values[pix];
    if (y) img.y[pix] = y->values[pix];
    if (z) img.z[pix] = z->values[pix];
    if (remission) img.remission[pix] = remission->values[pix];
  }
  return img;
}

}  // namespace rangeseg
