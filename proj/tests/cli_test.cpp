// SPDX-License-Identifier: Apache-2.0
//
// Runs the rangeseg executable and compares its files with in-process calls.

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "rangeseg/bench.hpp"
#include "rangeseg/io.hpp"
#include "rangeseg/normals.hpp"
#include "rangeseg/postprocess.hpp"
#include "rangeseg/projection.hpp"
#include "rangeseg/raw_dump.hpp"
#include "rangeseg/synth.hpp"

namespace rangeseg {
namespace {

namespace fs = std::filesystem;

const std::string kCli = RANGESEG_CLI;
const std::string kData = RANGESEG_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("rangeseg_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string path(const std::string& name) { return (dir_ / name).string(); }

  // Exit status of `rangeseg args`, stdout captured into `out`.
  static int run(const std::string& args, std::string* out = nullptr) {
    const std::string log = path("stdout.txt");
    const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    if (out) *out = read_text_file(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static fs::path dir_;
};

fs::path CliTest::dir_;

TEST_F(CliTest, SynthIsByteIdenticalAcrossRuns) {
  const std::string spec = kData + "/scenes/plane.cfg";
  ASSERT_EQ(run("synth --spec " + spec + " --seed 7 --out " + path("a")), 0);
  ASSERT_EQ(run("synth --spec " + spec + " --seed 7 --out " + path("b")), 0);
  EXPECT_EQ(read_file(path("a.bin")), read_file(path("b.bin")));
  EXPECT_EQ(read_file(path("a.label")), read_file(path("b.label")));
  ASSERT_EQ(run("synth --spec " + spec + " --seed 8 --out " + path("c")), 0);
  EXPECT_NE(read_file(path("a.bin")), read_file(path("c.bin")));

  const SynthScene direct = synth_scene(load_scene_spec(spec), 7);
  EXPECT_EQ(read_file(path("a.bin")), write_scan(direct.cloud));
}

TEST_F(CliTest, ProjectWritesInBoundsSidecarMatchingTheLibrary) {
  ASSERT_EQ(run("synth --preset street --seed 3 --out " + path("st")), 0);
  ASSERT_EQ(run("project --scan " + path("st.bin") + " --h 64 --w 2048 --out " + path("st")), 0);
  const PointProjection side = read_projection(read_file(path("st.proj")));
  for (std::size_t i = 0; i < side.size(); ++i) {
    ASSERT_GE(side.row[i], 0);
    ASSERT_LT(side.row[i], 64);
    ASSERT_GE(side.col[i], 0);
    ASSERT_LT(side.col[i], 2048);
  }
  const Projected p = project(read_scan(read_file(path("st.bin"))), ProjectionConfig{});
  EXPECT_EQ(side.row, p.points.row);
  EXPECT_EQ(side.col, p.points.col);
  EXPECT_EQ(side.range, p.points.range);
  EXPECT_EQ(side.is_owner, p.points.is_owner);
  EXPECT_EQ(read_file(path("st.range.img")), write_channel_dump(range_image_channel(p.image, Channel::kRange)));
  EXPECT_EQ(read_file(path("st.remission.img")),
            write_channel_dump(range_image_channel(p.image, Channel::kRemission)));
}

TEST_F(CliTest, NormalsAndInputTensorMatchTheLibrary) {
  ASSERT_EQ(run("synth --preset pole_wall --seed 2 --out " + path("pw")), 0);
  ASSERT_EQ(run("project --scan " + path("pw.bin") + " --out " + path("pw")), 0);
  const std::string stats = kData + "/channel_stats.txt";
  ASSERT_EQ(run("normals --in " + path("pw") + " --stats " + stats + " --channels 8"), 0);

  const Projected p = project(read_scan(read_file(path("pw.bin"))), ProjectionConfig{});
  const NormalMap n = estimate_normals(p.image);
  const ChannelDump n3 = read_channel_dump(read_file(path("pw.n3.img")));
  for (std::size_t pix = 0; pix < n3.values.size(); ++pix) {
    ASSERT_EQ(n3.values[pix], n.valid[pix] ? n.n3[pix] : 0.0f);
  }
  const FeatureMap want = build_input_tensor(p.image, &n, load_channel_stats(stats), InputLayout::kEightChannel);
  const FeatureMap got = read_feature_dump(read_file(path("pw.input.fmap")));
  ASSERT_EQ(got.channels, 8);
  ASSERT_EQ(got.data.size(), want.data.size());
  for (std::size_t i = 0; i < got.data.size(); ++i) {
    ASSERT_EQ(got.data[i], static_cast<double>(static_cast<float>(want.data[i])));
  }
}

TEST_F(CliTest, NlaBeatsCopyOnOccludedPointsEndToEnd) {
  ASSERT_EQ(run("synth --preset pole_wall --seed 11 --out " + path("ow")), 0);
  ASSERT_EQ(run("project --scan " + path("ow.bin") + " --labels " + path("ow.label") +
                " --oracle-pred --out " + path("ow")),
            0);
  const std::string common = " --range " + path("ow.range.img") + " --proj " + path("ow.proj") +
                             " --pred " + path("ow.pred.label");
  ASSERT_EQ(run("postprocess --method nla --kernel 5" + common + " --out " + path("nla.label")), 0);
  ASSERT_EQ(run("postprocess --method copy" + common + " --out " + path("copy.label")), 0);

  auto occluded_accuracy = [&](const std::string& pred) {
    std::string out;
    EXPECT_EQ(run("eval --gt " + path("ow.label") + " --pred " + path(pred) + " --proj " + path("ow.proj") +
                      " --csv " + path(pred + ".csv"),
                  &out),
              0);
    const std::string key = "occluded_accuracy ";
    const auto at = out.find(key);
    EXPECT_NE(at, std::string::npos) << out;
    return std::stod(out.substr(at + key.size()));
  };
  const double nla_acc = occluded_accuracy("nla.label");
  const double copy_acc = occluded_accuracy("copy.label");
  EXPECT_GT(nla_acc, copy_acc);
  EXPECT_NE(read_text_file(path("nla.label.csv")).find("miou,"), std::string::npos);

  // The file pipeline equals the in-process composition.
  const PointCloud cloud = read_scan(read_file(path("ow.bin")));
  const LabelSet gt = read_labels(read_file(path("ow.label")));
  const Projected p = project(cloud, ProjectionConfig{});
  const LabelImage pred = owner_label_image(p.image, gt);
  EXPECT_EQ(read_labels(read_file(path("nla.label"))).semantic, nla(p.image, pred, p.points));
  EXPECT_EQ(read_labels(read_file(path("copy.label"))).semantic, copy_pixel_label(pred, p.points));
}

TEST_F(CliTest, OcclusionStatsBenchRenderAndSelftest) {
  ASSERT_EQ(run("synth --preset pole_wall --seed 5 --out " + path("bw")), 0);
  ASSERT_EQ(run("project --scan " + path("bw.bin") + " --h 16 --w 512 --out " + path("bw")), 0);
  std::string out;
  ASSERT_EQ(run("occlusion-stats --proj " + path("bw.proj") + " --labels " + path("bw.label"), &out), 0);
  EXPECT_NE(out.find("cross_class_occluded"), std::string::npos);

  ASSERT_EQ(run("bench --scan " + path("bw.bin") + " --labels " + path("bw.label") +
                    " --h 16 --w 512 --reps 3 --method nla,knn --kernel 3,5",
                &out),
            0);
  std::istringstream lines(out);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("method,params,points,median_ms,p10_ms,p90_ms,miou", 0), 0u) << out;
  while (std::getline(lines, line)) rows += line.empty() ? 0 : 1;
  EXPECT_EQ(rows, 4);

  ASSERT_EQ(run("render --channel " + path("bw.range.img") + " --proj " + path("bw.proj") + " --out " +
                path("r.ppm")),
            0);
  const Bytes ppm = read_file(path("r.ppm"));
  EXPECT_EQ(ppm.size(), std::string("P6\n512 16\n255\n").size() + 3u * 16u * 512u);
  ASSERT_EQ(run("render --labels " + path("bw.label") + " --proj " + path("bw.proj") + " --out " +
                path("l.ppm")),
            0);

  EXPECT_EQ(run("selftest --seeds 10", &out), 0) << out;
}

TEST_F(CliTest, ExitCodes) {
  std::string out;
  EXPECT_EQ(run("--help", &out), 0);
  EXPECT_NE(out.find("postprocess"), std::string::npos);
  EXPECT_EQ(run("frobnicate", &out), 1);
  EXPECT_NE(out.find("Subcommands:"), std::string::npos) << out;
  EXPECT_EQ(run("project --scan x.bin --bogus-flag 1 --out y"), 1);
  EXPECT_EQ(run("project --scan " + path("does_not_exist.bin") + " --out " + path("z")), 2);
  EXPECT_EQ(run("project --scan " + path("missing.bin") + " --h 0 --out " + path("z")), 1);

  write_file(path("bad.bin"), Bytes(17));
  EXPECT_EQ(run("project --scan " + path("bad.bin") + " --out " + path("z")), 2);

  ASSERT_EQ(run("synth --preset plane --seed 1 --out " + path("pl")), 0);
  ASSERT_EQ(run("project --scan " + path("pl.bin") + " --h 8 --w 64 --out " + path("pl")), 0);
  ASSERT_EQ(run("project --scan " + path("pl.bin") + " --h 8 --w 32 --out " + path("other")), 0);
  EXPECT_EQ(run("postprocess --method nla --kernel 4 --range " + path("pl.range.img") + " --proj " +
                path("pl.proj") + " --pred " + path("pl.label") + " --out " + path("o.label")),
            1);
  // Prediction file sized for points, not pixels.
  EXPECT_EQ(run("postprocess --method nla --range " + path("pl.range.img") + " --proj " + path("pl.proj") +
                " --pred " + path("pl.label") + " --out " + path("o.label")),
            2);
  // Range dump from a different grid.
  EXPECT_EQ(run("postprocess --method copy --range " + path("other.range.img") + " --proj " +
                path("pl.proj") + " --pred " + path("pl.label") + " --out " + path("o.label")),
            2);
}

}  // namespace
}  // namespace rangeseg
