// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/render.hpp"

#include <gtest/gtest.h>

#include "rangeseg/error.hpp"

namespace rangeseg {
namespace {

TEST(RenderTest, PpmHeaderAndPayload) {
  const RgbImage img{1, 2, {1, 2, 3, 4, 5, 6}};
  const Bytes ppm = encode_ppm(img);
  const std::string header = "P6\n2 1\n255\n";
  ASSERT_EQ(ppm.size(), header.size() + 6);
  for (std::size_t i = 0; i < header.size(); ++i) EXPECT_EQ(static_cast<char>(ppm[i]), header[i]);
  EXPECT_EQ(ppm.back(), std::byte{6});
}

TEST(RenderTest, ChannelStretchIgnoresMaskedPixels) {
  const std::vector<float> values{2.0f, 4.0f, 3.0f, 1000.0f};
  const std::vector<std::uint8_t> mask{1, 1, 1, 0};
  const RgbImage img = render_channel(2, 2, values, mask);
  EXPECT_EQ(img.rgb[0], 0);
  EXPECT_EQ(img.rgb[3], 255);
  EXPECT_EQ(img.rgb[6], 128);
  EXPECT_EQ(img.rgb[9], 0);
  const RgbImage flat = render_channel(1, 2, std::vector<float>{5.0f, 5.0f});
  EXPECT_EQ(flat.rgb, std::vector<std::uint8_t>(6, 0));
  EXPECT_THROW(render_channel(2, 2, std::vector<float>(3)), DataError);
}

TEST(RenderTest, LabelColorsFromTable) {
  const ColorTable colors = parse_color_table("# id r g b\n10 245 150 100\n40 255 0 255\n");
  const LabelImage labels{1, 3, {10, 40, 99}};
  const RgbImage img = render_labels(labels, colors);
  EXPECT_EQ(img.rgb, (std::vector<std::uint8_t>{245, 150, 100, 255, 0, 255, 0, 0, 0}));
  const RgbImage masked = render_labels(labels, colors, std::vector<std::uint8_t>{0, 1, 1});
  EXPECT_EQ(masked.rgb[0], 0);
  EXPECT_EQ(masked.rgb[3], 255);
}

TEST(RenderTest, ColorTableErrors) {
  EXPECT_THROW(parse_color_table("10 1 2\n"), FormatError);
  EXPECT_THROW(parse_color_table("10 1 2 300\n"), FormatError);
  const ColorTable shipped = load_color_table(std::string(RANGESEG_DATA_DIR) + "/semantic_kitti_colors.txt");
  EXPECT_TRUE(shipped.count(10));
  EXPECT_TRUE(shipped.count(81));
}

}  // namespace
}  // namespace rangeseg
