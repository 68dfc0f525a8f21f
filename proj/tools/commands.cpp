// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "rangeseg/bench.hpp"
#include "rangeseg/error.hpp"
#include "rangeseg/evaluation.hpp"
#include "rangeseg/interp.hpp"
#include "rangeseg/io.hpp"
#include "rangeseg/normals.hpp"
#include "rangeseg/postprocess.hpp"
#include "rangeseg/projection.hpp"
#include "rangeseg/raw_dump.hpp"
#include "rangeseg/render.hpp"
#include "rangeseg/synth.hpp"

namespace rangeseg::cli {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = RANGESEG_DATA_DIR;

struct GridFlags {
  int height = 64;
  int width = 2048;
  double fov_up_deg = 3.0;
  double fov_down_deg = 25.0;

  void add_to(CLI::App* sub) {
    sub->add_option("--h", height, "image rows")->capture_default_str();
    sub->add_option("--w", width, "image columns")->capture_default_str();
    sub->add_option("--fov-up", fov_up_deg, "degrees above the horizon")->capture_default_str();
    sub->add_option("--fov-down", fov_down_deg, "degrees below the horizon (magnitude)")
        ->capture_default_str();
  }
  ProjectionConfig config() const {
    ProjectionConfig cfg;
    cfg.height = height;
    cfg.width = width;
    cfg.fov_up = deg_to_rad(fov_up_deg);
    cfg.fov_down = deg_to_rad(fov_down_deg);
    cfg.validate();
    return cfg;
  }
};

// Per-point ids from labels, optionally remapped to training ids.
struct IdFlags {
  std::string remap_path = kDataDir + "/semantic_kitti_remap.txt";
  bool no_remap = false;

  void add_to(CLI::App* sub) {
    sub->add_option("--remap", remap_path, "raw-to-training id table")->capture_default_str();
    sub->add_flag("--no-remap", no_remap, "evaluate raw ids as they are (ignore id 0)");
  }
  std::optional<RemapTable> table() const {
    if (no_remap) return std::nullopt;
    return load_remap_table(remap_path);
  }
};

ClassId ignore_of(const std::optional<RemapTable>& table) {
  return table ? table->ignore_id : ClassId{0};
}

std::vector<ClassId> to_eval_ids(const LabelSet& raw, const std::optional<RemapTable>& table,
                                 std::size_t* unlisted = nullptr) {
  if (!table) return raw.semantic;
  RemapResult r = remap_labels(raw, *table);
  if (unlisted) *unlisted = r.unlisted;
  return std::move(r.labels.semantic);
}

int class_count(const std::optional<RemapTable>& table, std::initializer_list<const std::vector<ClassId>*> ids) {
  if (table) return table->num_classes;
  int n = 1;
  for (const auto* v : ids) {
    for (ClassId id : *v) n = std::max(n, id + 1);
  }
  return n;
}

fs::path channel_path(const std::string& prefix, Channel ch) {
  return prefix + "." + std::string(channel_name(ch)) + ".img";
}

LabelImage load_label_image(const fs::path& path, const PointProjection& proj) {
  LabelSet ids = read_labels(read_file(path));
  const std::size_t pixels = static_cast<std::size_t>(proj.height) * static_cast<std::size_t>(proj.width);
  if (ids.size() != pixels) {
    throw DataError(path.string() + " holds " + std::to_string(ids.size()) + " labels, expected " +
                    std::to_string(proj.height) + "x" + std::to_string(proj.width) + " pixels");
  }
  return {proj.height, proj.width, std::move(ids.semantic)};
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// ---------------------------------------------------------------- synth

void add_synth(CLI::App& app) {
  struct Opts {
    std::string spec, preset, out;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synth", "ray-cast a scene description into PREFIX.bin / PREFIX.label");
  auto* spec = sub->add_option("--spec", o->spec, "scene file (data/scenes/*.cfg grammar)");
  sub->add_option("--preset", o->preset, "built-in scene: plane, pole_wall, street, random")
      ->check(CLI::IsMember({"plane", "pole_wall", "street", "random"}))
      ->excludes(spec);
  sub->add_option("--seed", o->seed, "random seed")->capture_default_str();
  sub->add_option("--out", o->out, "output prefix")->required();
  sub->callback([o] {
    SceneSpec spec;
    if (!o->spec.empty()) {
      spec = load_scene_spec(o->spec);
    } else if (o->preset == "plane") {
      spec = scenes::ground_only();
    } else if (o->preset == "pole_wall") {
      spec = scenes::pole_before_wall();
    } else if (o->preset == "street") {
      spec = scenes::street();
    } else if (o->preset == "random") {
      spec = scenes::random(o->seed);
    } else {
      throw std::invalid_argument("synth needs --spec or --preset");
    }
    const SynthScene scene = synth_scene(spec, o->seed);
    write_file(o->out + ".bin", write_scan(scene.cloud));
    write_file(o->out + ".label", write_labels(scene.labels));
    std::cout << "points " << scene.cloud.size() << "\n";
  });
}

// -------------------------------------------------------------- project

void add_project(CLI::App& app) {
  struct Opts {
    std::string scan, out, labels;
    bool oracle_pred = false;
    GridFlags grid;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand(
      "project", "spherical projection: PREFIX.{x,y,z,range,remission}.img and PREFIX.proj");
  sub->add_option("--scan", o->scan, "input .bin")->required();
  sub->add_option("--out", o->out, "output prefix")->required();
  o->grid.add_to(sub);
  auto* labels = sub->add_option("--labels", o->labels, "per-point .label for the occlusion report");
  sub->add_flag("--oracle-pred", o->oracle_pred,
                "also write PREFIX.pred.label, each pixel holding its owner's label")
      ->needs(labels);
  sub->callback([o] {
    const ProjectionConfig cfg = o->grid.config();
    const PointCloud cloud = read_scan(read_file(o->scan));
    const Projected p = project(cloud, cfg);
    for (Channel ch : {Channel::kX, Channel::kY, Channel::kZ, Channel::kRange, Channel::kRemission}) {
      write_file(channel_path(o->out, ch), write_channel_dump(range_image_channel(p.image, ch)));
    }
    write_file(o->out + ".proj", write_projection(p.points));

    std::optional<LabelSet> gt;
    if (!o->labels.empty()) gt = read_labels(read_file(o->labels));
    const OcclusionStats stats = occlusion_stats(p.points, gt ? &*gt : nullptr);
    std::cout << "points " << stats.points << "\nvalid_pixels " << stats.owners << "\noccluded "
              << stats.occluded << "\nclamped_rows " << p.points.clamped_rows << "\n";
    if (o->oracle_pred) {
      const LabelImage pred = owner_label_image(p.image, *gt);
      write_file(o->out + ".pred.label", write_labels(make_labels(pred.labels)));
    }
  });
}

// -------------------------------------------------------------- normals

void add_normals(CLI::App& app) {
  struct Opts {
    std::string in, out, stats;
    int channels = 8;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand(
      "normals", "PREFIX.{n1,n2,n3}.img from a projected scan, optionally the input tensor");
  sub->add_option("--in", o->in, "prefix written by project")->required();
  sub->add_option("--out", o->out, "output prefix (default: --in)");
  sub->add_option("--stats", o->stats, "channel stats; writes PREFIX.input.fmap");
  sub->add_option("--channels", o->channels, "input tensor layout")
      ->check(CLI::IsMember({5, 8}))
      ->capture_default_str();
  sub->callback([o] {
    const std::string out = o->out.empty() ? o->in : o->out;
    const PointProjection proj = read_projection(read_file(o->in + ".proj"));
    auto load = [&](Channel ch) { return read_channel_dump(read_file(channel_path(o->in, ch))); };
    const ChannelDump range = load(Channel::kRange), x = load(Channel::kX), y = load(Channel::kY),
                      z = load(Channel::kZ), rem = load(Channel::kRemission);
    const RangeImage img = assemble_range_image(proj, range, &x, &y, &z, &rem);
    const NormalMap normals = estimate_normals(img);

    const std::vector<float>* n[3] = {&normals.n1, &normals.n2, &normals.n3};
    const Channel ch[3] = {Channel::kN1, Channel::kN2, Channel::kN3};
    for (int i = 0; i < 3; ++i) {
      ChannelDump d{img.height, img.width, ch[i], *n[i]};
      for (std::size_t pix = 0; pix < d.values.size(); ++pix) {
        if (!normals.valid[pix]) d.values[pix] = 0.0f;
      }
      write_file(channel_path(out, ch[i]), write_channel_dump(d));
    }
    const auto valid = std::count(normals.valid.begin(), normals.valid.end(), std::uint8_t{1});
    std::cout << "valid_normals " << valid << " of " << img.valid_count() << " pixels\n";

    if (!o->stats.empty()) {
      const InputLayout layout = o->channels == 5 ? InputLayout::kFiveChannel : InputLayout::kEightChannel;
      const FeatureMap t = build_input_tensor(img, &normals, load_channel_stats(o->stats), layout);
      write_file(out + ".input.fmap", write_feature_dump(t));
    }
  });
}

// -------------------------------------------------------- channel-stats

void add_channel_stats(CLI::App& app) {
  struct Opts {
    std::vector<std::string> scans;
    std::string out;
    GridFlags grid;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand(
      "channel-stats", "mean and std of the eight input channels over projected scans");
  sub->add_option("--scan", o->scans, "input .bin files")->required();
  sub->add_option("--out", o->out, "stats file (stdout when omitted)");
  o->grid.add_to(sub);
  sub->callback([o] {
    const ProjectionConfig cfg = o->grid.config();
    double sum[8] = {}, sq[8] = {};
    std::size_t count[8] = {};
    for (const std::string& path : o->scans) {
      const RangeImage img = project(read_scan(read_file(path)), cfg).image;
      const NormalMap normals = estimate_normals(img);
      const std::vector<float>* src[8] = {&img.x, &img.y, &img.z, &img.range, &img.remission,
                                          &normals.n1, &normals.n2, &normals.n3};
      for (std::size_t pix = 0; pix < img.pixels(); ++pix) {
        for (int c = 0; c < 8; ++c) {
          const bool ok = c < 5 ? img.valid[pix] != 0 : normals.valid[pix] != 0;
          if (!ok) continue;
          const double v = (*src[c])[pix];
          sum[c] += v;
          sq[c] += v * v;
          ++count[c];
        }
      }
    }
    std::ostringstream text;
    text << "# channel mean std\n";
    for (int c = 0; c < 8; ++c) {
      if (count[c] == 0) throw DataError("no samples for channel " + std::string(channel_name(Channel(c))));
      const double mean = sum[c] / static_cast<double>(count[c]);
      const double var = std::max(0.0, sq[c] / static_cast<double>(count[c]) - mean * mean);
      text << channel_name(static_cast<Channel>(c)) << " " << std::setprecision(6) << mean << " "
           << std::max(std::sqrt(var), 1e-6) << "\n";
    }
    if (o->out.empty()) {
      std::cout << text.str();
    } else {
      const std::string s = text.str();
      write_file(o->out, std::as_bytes(std::span(s.data(), s.size())));
    }
  });
}

// ---------------------------------------------------------- postprocess

struct MethodFlags {
  std::string method = "nla";
  int kernel = 5;
  KnnParams knn;

  void add_to(CLI::App* sub) {
    sub->add_option("--method", method, "nla, knn or copy")
        ->check(CLI::IsMember({"nla", "knn", "copy"}))
        ->capture_default_str();
    sub->add_option("--kernel", kernel, "odd window size")->capture_default_str();
    sub->add_option("--knn-k", knn.k, "KNN neighbor count")->capture_default_str();
    sub->add_option("--cutoff", knn.cutoff, "KNN range cutoff, meters")->capture_default_str();
    sub->add_option("--sigma", knn.sigma, "KNN gaussian sigma, pixels")->capture_default_str();
  }
  MethodConfig config() const {
    MethodConfig m;
    m.method = method_from_name(method);
    m.nla.kernel = kernel;
    m.knn = knn;
    m.knn.kernel = kernel;
    if (m.method == Method::kNla) m.nla.validate();
    if (m.method == Method::kKnn) m.knn.validate();
    return m;
  }
};

void add_postprocess(CLI::App& app) {
  struct Opts {
    std::string range, proj, pred, out;
    MethodFlags method;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("postprocess", "per-pixel predictions to per-point labels");
  sub->add_option("--range", o->range, "range channel dump")->required();
  sub->add_option("--proj", o->proj, "projection sidecar")->required();
  sub->add_option("--pred", o->pred, "per-pixel prediction image in .label format")->required();
  sub->add_option("--out", o->out, "per-point .label output")->required();
  o->method.add_to(sub);
  sub->callback([o] {
    const MethodConfig method = o->method.config();
    const PointProjection proj = read_projection(read_file(o->proj));
    const ChannelDump range = read_channel_dump(read_file(o->range));
    if (range.channel != Channel::kRange) throw DataError(o->range + " is not a range dump");
    const RangeImage img = assemble_range_image(proj, range);
    const LabelImage pred = load_label_image(o->pred, proj);
    write_file(o->out, write_labels(make_labels(run_postprocess(method, img, pred, proj))));
  });
}

// ----------------------------------------------------------------- eval

void add_eval(CLI::App& app) {
  struct Opts {
    std::string gt, pred, csv, proj;
    bool pred_train_ids = false;
    IdFlags ids;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("eval", "per-class IoU and mIoU of per-point predictions");
  sub->add_option("--gt", o->gt, "ground-truth .label (raw ids)")->required();
  sub->add_option("--pred", o->pred, "predicted .label")->required();
  sub->add_flag("--pred-train-ids", o->pred_train_ids, "predictions already hold training ids");
  o->ids.add_to(sub);
  sub->add_option("--csv", o->csv, "also write the table as CSV");
  sub->add_option("--proj", o->proj, "projection sidecar; adds occluded-point accuracy");
  sub->callback([o] {
    const auto table = o->ids.table();
    const ClassId ignore = ignore_of(table);
    std::size_t unlisted = 0;
    const std::vector<ClassId> gt = to_eval_ids(read_labels(read_file(o->gt)), table, &unlisted);
    const LabelSet raw_pred = read_labels(read_file(o->pred));
    const std::vector<ClassId> pred =
        o->pred_train_ids ? raw_pred.semantic : to_eval_ids(raw_pred, table);
    const int n = class_count(table, {&gt, &pred});

    ConfusionMatrix conf(n);
    accumulate(conf, gt, pred, ignore);
    const IouResult r = iou(conf);

    std::ostringstream csv;
    csv << "class,iou\n";
    std::cout << std::left << std::setw(8) << "class" << "iou\n";
    for (int c = 0; c < n; ++c) {
      const auto& v = r.per_class[static_cast<std::size_t>(c)];
      if (!v) continue;
      std::cout << std::left << std::setw(8) << c << fixed(*v, 4) << "\n";
      csv << c << "," << fixed(*v, 6) << "\n";
    }
    std::cout << std::left << std::setw(8) << "mIoU" << fixed(r.miou, 4) << "\n";
    csv << "miou," << fixed(r.miou, 6) << "\n";
    if (unlisted > 0) std::cout << "unlisted_gt_ids " << unlisted << "\n";

    if (!o->proj.empty()) {
      const PointProjection proj = read_projection(read_file(o->proj));
      const std::vector<MethodLabels> methods{{"pred", pred}};
      const BlurReport blur = blur_metric(proj, gt, methods, ignore);
      if (blur.applicable) {
        std::cout << "occluded_accuracy " << fixed(blur.accuracy.front().second, 4) << " over "
                  << blur.occluded << " points\n";
        csv << "occluded_accuracy," << fixed(blur.accuracy.front().second, 6) << "\n";
      } else {
        std::cout << "occluded_accuracy n/a\n";
      }
    }
    if (!o->csv.empty()) {
      const std::string s = csv.str();
      write_file(o->csv, std::as_bytes(std::span(s.data(), s.size())));
    }
  });
}

// ------------------------------------------------------ occlusion-stats

void add_occlusion_stats(CLI::App& app) {
  struct Opts {
    std::string proj, labels;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("occlusion-stats", "points hidden behind a pixel owner");
  sub->add_option("--proj", o->proj, "projection sidecar")->required();
  sub->add_option("--labels", o->labels, "per-point .label; counts cross-class occlusion");
  sub->callback([o] {
    const PointProjection proj = read_projection(read_file(o->proj));
    std::optional<LabelSet> labels;
    if (!o->labels.empty()) labels = read_labels(read_file(o->labels));
    const OcclusionStats s = occlusion_stats(proj, labels ? &*labels : nullptr);
    std::cout << "points " << s.points << "\nowners " << s.owners << "\noccluded " << s.occluded
              << "\noccluded_fraction " << fixed(s.occluded_fraction, 6) << "\n";
    if (s.disagreeing) {
      std::cout << "cross_class_occluded " << *s.disagreeing << "\ncross_class_fraction "
                << fixed(*s.disagreement_fraction, 6) << "\n";
    }
    for (const auto& [mult, pixels] : s.multiplicity) {
      std::cout << "pixels_with_" << mult << "_points " << pixels << "\n";
    }
  });
}

// ---------------------------------------------------------------- bench

void add_bench(CLI::App& app) {
  struct Opts {
    std::string scan, labels, pred, csv;
    std::vector<std::string> methods{"nla", "knn"};
    std::vector<int> kernels{5};
    std::vector<int> knn_k{5};
    std::vector<double> cutoffs{1.0};
    std::vector<double> sigmas{1.0};
    int reps = 20;
    GridFlags grid;
    IdFlags ids;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("bench", "latency of projection, post-processing and evaluation");
  sub->add_option("--scan", o->scan, "input .bin")->required();
  sub->add_option("--labels", o->labels, "ground-truth .label: enables mIoU and oracle predictions");
  sub->add_option("--pred", o->pred, "per-pixel prediction image (default: ground-truth owners)");
  sub->add_option("--method", o->methods, "methods to time")
      ->delimiter(',')
      ->check(CLI::IsMember({"nla", "knn", "copy"}));
  sub->add_option("--kernel", o->kernels, "kernel sizes to sweep")->delimiter(',');
  sub->add_option("--knn-k", o->knn_k, "KNN neighbor counts to sweep")->delimiter(',');
  sub->add_option("--cutoff", o->cutoffs, "KNN cutoffs to sweep")->delimiter(',');
  sub->add_option("--sigma", o->sigmas, "KNN sigmas to sweep")->delimiter(',');
  sub->add_option("--reps", o->reps, "timed repetitions after one warm-up")->capture_default_str();
  sub->add_option("--csv", o->csv, "write the CSV here instead of stdout");
  o->grid.add_to(sub);
  o->ids.add_to(sub);
  sub->callback([o] {
    const ProjectionConfig cfg = o->grid.config();
    const PointCloud cloud = read_scan(read_file(o->scan));
    const auto table = o->ids.table();

    std::optional<std::vector<ClassId>> gt;
    if (!o->labels.empty()) gt = to_eval_ids(read_labels(read_file(o->labels)), table);
    const Projected p = project(cloud, cfg);
    LabelImage pred;
    if (!o->pred.empty()) {
      pred = load_label_image(o->pred, p.points);
    } else if (gt) {
      pred = owner_label_image(p.image, make_labels(*gt));
    } else {
      throw std::invalid_argument("bench needs --pred or --labels");
    }

    BenchInput in;
    in.cloud = &cloud;
    in.config = cfg;
    in.predictions = &pred;
    if (gt) {
      in.ground_truth = &*gt;
      in.ignore_id = ignore_of(table);
      in.num_classes = class_count(table, {&*gt, &pred.labels});
    }

    std::vector<MethodConfig> configs;
    for (const std::string& name : o->methods) {
      const Method m = method_from_name(name);
      for (int kernel : o->kernels) {
        MethodConfig c;
        c.method = m;
        c.nla.kernel = kernel;
        c.knn.kernel = kernel;
        if (m != Method::kKnn) {
          if (m == Method::kNla) c.nla.validate();
          configs.push_back(c);
          if (m == Method::kCopy) break;
          continue;
        }
        for (int k : o->knn_k) {
          for (double cutoff : o->cutoffs) {
            for (double sigma : o->sigmas) {
              c.knn.k = k;
              c.knn.cutoff = cutoff;
              c.knn.sigma = sigma;
              c.knn.validate();
              configs.push_back(c);
            }
          }
        }
      }
    }

    std::ostringstream csv;
    csv << "method,params,points,median_ms,p10_ms,p90_ms,miou,projection_median_ms,"
           "evaluation_median_ms\n";
    for (const MethodConfig& c : configs) {
      const BenchReport r = bench(in, c, o->reps);
      csv << r.method << "," << r.params << "," << r.points << "," << fixed(r.postprocess.median_ms, 4)
          << "," << fixed(r.postprocess.p10_ms, 4) << "," << fixed(r.postprocess.p90_ms, 4) << ","
          << (r.miou ? fixed(*r.miou, 6) : std::string()) << "," << fixed(r.projection.median_ms, 4)
          << "," << fixed(r.evaluation.median_ms, 4) << "\n";
    }
    if (o->csv.empty()) {
      std::cout << csv.str();
    } else {
      const std::string s = csv.str();
      write_file(o->csv, std::as_bytes(std::span(s.data(), s.size())));
    }
  });
}

// --------------------------------------------------------------- render

void add_render(CLI::App& app) {
  struct Opts {
    std::string channel, labels, proj, out;
    std::string colors = kDataDir + "/semantic_kitti_colors.txt";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("render", "channel dump or labels to a PPM image");
  auto* ch = sub->add_option("--channel", o->channel, "channel dump (grayscale)");
  auto* lb = sub->add_option("--labels", o->labels, "per-pixel or per-point .label (needs --proj)");
  ch->excludes(lb);
  sub->add_option("--proj", o->proj, "projection sidecar: image size and empty-pixel mask");
  sub->add_option("--colors", o->colors, "class color table")->capture_default_str();
  sub->add_option("--out", o->out, "output .ppm")->required();
  sub->callback([o] {
    std::optional<PointProjection> proj;
    std::vector<std::uint8_t> mask;
    if (!o->proj.empty()) {
      proj = read_projection(read_file(o->proj));
      mask.assign(static_cast<std::size_t>(proj->height) * static_cast<std::size_t>(proj->width), 0);
      for (std::size_t i = 0; i < proj->size(); ++i) {
        if (proj->is_owner[i]) mask[proj->pixel_index(i)] = 1;
      }
    }
    RgbImage img;
    if (!o->channel.empty()) {
      const ChannelDump d = read_channel_dump(read_file(o->channel));
      if (proj && (proj->height != d.height || proj->width != d.width)) {
        throw DataError("channel dump and projection differ in size");
      }
      img = render_channel(d.height, d.width, d.values, mask);
    } else if (!o->labels.empty()) {
      if (!proj) throw std::invalid_argument("render --labels needs --proj");
      const LabelSet ids = read_labels(read_file(o->labels));
      LabelImage li{proj->height, proj->width, std::vector<ClassId>(mask.size(), 0)};
      if (ids.size() == mask.size()) {
        li.labels = ids.semantic;
      } else if (ids.size() == proj->size()) {
        for (std::size_t i = 0; i < proj->size(); ++i) {
          if (proj->is_owner[i]) li.labels[proj->pixel_index(i)] = ids.semantic[i];
        }
      } else {
        throw DataError(o->labels + " matches neither the pixel nor the point count");
      }
      img = render_labels(li, load_color_table(o->colors), mask);
    } else {
      throw std::invalid_argument("render needs --channel or --labels");
    }
    write_file(o->out, encode_ppm(img));
  });
}

// ------------------------------------------------------------- selftest

// Differential checks against the brute-force forms on seeded random
// scenes; returns the number of failures.
int run_selftest(int seeds, std::ostream& log) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = {}) {
    log << (ok ? "[PASS] " : "[FAIL] ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    if (!ok) ++failures;
  };

  int proj_bad = 0, nla_bad = 0, copy_bad = 0;
  for (int s = 0; s < seeds; ++s) {
    ProjectionConfig grid;
    grid.height = 8 + s % 9;
    grid.width = 64 + 8 * (s % 5);
    const SceneSpec spec = scenes::random(static_cast<std::uint64_t>(s), grid);
    const SynthScene scene = synth_scene(spec, static_cast<std::uint64_t>(s));
    const Projected p = project(scene.cloud, grid);

    // Owner of each pixel is the lowest-index point of minimal range.
    std::vector<std::int64_t> best(grid.pixels(), -1);
    for (std::size_t i = 0; i < scene.cloud.size(); ++i) {
      const std::size_t pix = p.points.pixel_index(i);
      if (best[pix] < 0 || p.points.range[i] < p.points.range[static_cast<std::size_t>(best[pix])]) {
        best[pix] = static_cast<std::int64_t>(i);
      }
      if (scene.row[i] != p.points.row[i] || scene.col[i] != p.points.col[i]) ++proj_bad;
    }
    for (std::size_t pix = 0; pix < best.size(); ++pix) {
      if (best[pix] != p.image.owner[pix]) ++proj_bad;
    }

    const LabelImage labels = owner_label_image(p.image, scene.labels);
    for (int kernel : {1, 3, 5, 7}) {
      if (nla(p.image, labels, p.points, {kernel}) != patch_oracle(p.image, labels, p.points, {kernel})) {
        ++nla_bad;
      }
    }
    if (nla(p.image, labels, p.points, {1}) != copy_pixel_label(labels, p.points)) ++copy_bad;
  }
  report("projection owners and constructed pixels", proj_bad == 0, std::to_string(proj_bad) + " mismatches");
  report("nla matches the literal patch scan", nla_bad == 0, std::to_string(nla_bad) + " mismatches");
  report("nla with kernel 1 equals copy", copy_bad == 0, std::to_string(copy_bad) + " mismatches");

  double node_gap = 0.0;
  for (int s = 0; s < std::max(1, seeds / 5); ++s) {
    FeatureMap f(3 + s % 4, 4 + s % 3, 2);
    for (std::size_t i = 0; i < f.data.size(); ++i) f.data[i] = std::sin(0.7 * double(i) + s);
    const Discrepancy d = interp_discrepancy(f, 2 * f.height - 1, 2 * f.width - 1);
    for (int r = 0; r < f.height; ++r) {
      for (int c = 0; c < f.width; ++c) {
        for (int k = 0; k < 2; ++k) node_gap = std::max(node_gap, std::abs(d.diff.at(2 * r, 2 * c, k)));
      }
    }
  }
  report("interpolation exact at lattice nodes", node_gap <= 1e-12, "max gap " + std::to_string(node_gap));
  return failures;
}

void add_selftest(CLI::App& app, int& exit_code) {
  auto seeds = std::make_shared<int>(50);
  auto* sub = app.add_subcommand("selftest", "differential checks of the core operations");
  sub->add_option("--seeds", *seeds, "random scenes to check")->capture_default_str();
  sub->callback([seeds, &exit_code] {
    if (*seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
    if (run_selftest(*seeds, std::cout) > 0) exit_code = 2;
  });
}

}  // namespace

void register_commands(CLI::App& app, int& exit_code) {
  add_synth(app);
  add_project(app);
  add_normals(app);
  add_channel_stats(app);
  add_postprocess(app);
  add_eval(app);
  add_occlusion_stats(app);
  add_bench(app);
  add_render(app);
  add_selftest(app, exit_code);
}

}  // namespace rangeseg::cli
