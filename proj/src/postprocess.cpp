// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rangeseg/error.hpp"

namespace rangeseg {
namespace {

constexpr float kInf = std::numeric_limits<float>::infinity();

void check_aligned(const RangeImage& img, const LabelImage& labels, const PointProjection& proj) {
  const std::size_t pixels = static_cast<std::size_t>(img.height) * static_cast<std::size_t>(img.width);
  if (img.valid.size() != pixels || img.range.size() != pixels) {
    throw DataError("range image buffers do not match its size");
  }
  if (labels.height != img.height || labels.width != img.width || labels.labels.size() != pixels) {
    throw DataError("label image " + std::to_string(labels.height) + "x" +
                    std::to_string(labels.width) + " is not aligned with the " +
                    std::to_string(img.height) + "x" + std::to_string(img.width) + " range image");
  }
  if (proj.height != img.height || proj.width != img.width) {
    throw DataError("projection size does not match the range image");
  }
  const std::size_t n = proj.size();
  if (proj.col.size() != n || proj.range.size() != n || proj.is_owner.size() != n) {
    throw DataError("projection arrays differ in length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (proj.row[i] < 0 || proj.row[i] >= img.height || proj.col[i] < 0 ||
        proj.col[i] >= img.width) {
      throw DataError("point " + std::to_string(i) + " projects outside the image");
    }
  }
}

[[noreturn]] void throw_empty_patch(std::size_t i) {
  throw DataError("no valid pixel in the patch of point " + std::to_string(i));
}

}  // namespace

void NlaParams::validate() const {
  if (kernel < 1 || kernel % 2 == 0) {
    throw std::invalid_argument("NLA kernel must be odd and >= 1, got " + std::to_string(kernel));
  }
}

void KnnParams::validate() const {
  if (kernel < 1 || kernel % 2 == 0) {
    throw std::invalid_argument("KNN kernel must be odd and >= 1, got " + std::to_string(kernel));
  }
  if (k < 1) throw std::invalid_argument("KNN k must be >= 1");
  if (!(cutoff > 0.0)) throw std::invalid_argument("KNN cutoff must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("KNN sigma must be > 0");
}

LabelImage owner_label_image(const RangeImage& img, const LabelSet& labels) {
  LabelImage out{img.height, img.width, std::vector<ClassId>(img.pixels(), 0)};
  for (std::size_t pix = 0; pix < img.pixels(); ++pix) {
    if (!img.valid[pix]) continue;
    const auto owner = static_cast<std::size_t>(img.owner[pix]);
    if (owner >= labels.size()) throw DataError("pixel owner has no label");
    out.labels[pix] = labels.semantic[owner];
  }
  return out;
}

std::vector<ClassId> nla(const RangeImage& img, const LabelImage& labels,
                         const PointProjection& proj, const NlaParams& params) {
  params.validate();
  check_aligned(img, labels, proj);
  const int h = img.height, w = img.width, half = params.kernel / 2;

  // Empty pixels read as +inf so they never win the strict-less test.
  std::vector<float> ranges(img.range);
  for (std::size_t pix = 0; pix < ranges.size(); ++pix) {
    if (!img.valid[pix]) ranges[pix] = kInf;
  }

  std::vector<ClassId> out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const int r0 = std::max(0, proj.row[i] - half), r1 = std::min(h - 1, proj.row[i] + half);
    const int c0 = std::max(0, proj.col[i] - half), c1 = std::min(w - 1, proj.col[i] + half);
    const float target = proj.range[i];
    float best = kInf;
    std::size_t best_pix = 0;
    for (int r = r0; r <= r1; ++r) {
      const std::size_t row_base = static_cast<std::size_t>(r) * static_cast<std::size_t>(w);
      for (int c = c0; c <= c1; ++c) {
        const float diff = std::abs(ranges[row_base + static_cast<std::size_t>(c)] - target);
        if (diff < best) {
          best = diff;
          best_pix = row_base + static_cast<std::size_t>(c);
        }
      }
    }
    if (best == kInf) throw_empty_patch(i);
    out[i] = labels.labels[best_pix];
  }
  return out;
}

std::vector<ClassId> patch_oracle(const RangeImage& img, const LabelImage& labels,
                                  const PointProjection& proj, const NlaParams& params) {
  params.validate();
  check_aligned(img, labels, proj);
  const int half = params.kernel / 2;
  std::vector<ClassId> out;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    float min_diff = kInf;
    ClassId label_each = 0;
    bool found = false;
    for (int dn = -half; dn <= half; ++dn) {
      for (int dm = -half; dm <= half; ++dm) {
        const int hn = proj.row[i] + dn;
        const int wm = proj.col[i] + dm;
        if (hn < 0 || hn >= img.height || wm < 0 || wm >= img.width) continue;
        const std::size_t pix = img.index(hn, wm);
        const float range_at = img.valid[pix] ? img.range[pix] : kInf;
        if (std::abs(range_at - proj.range[i]) < min_diff) {
          label_each = labels.labels[pix];
          min_diff = std::abs(range_at - proj.range[i]);
          found = true;
        }
      }
    }
    if (!found) throw_empty_patch(i);
    out.push_back(label_each);
  }
  return out;
}

std::vector<ClassId> knn_postprocess(const RangeImage& img, const LabelImage& labels,
                                     const PointProjection& proj, const KnnParams& params) {
  params.validate();
  check_aligned(img, labels, proj);
  const int h = img.height, w = img.width, half = params.kernel / 2;
  const auto k = static_cast<std::size_t>(params.k);
  const float cutoff = static_cast<float>(params.cutoff);

  std::vector<double> spatial(static_cast<std::size_t>(half) + 1);
  for (int d = 0; d <= half; ++d) {
    spatial[static_cast<std::size_t>(d)] =
        std::exp(-static_cast<double>(d * d) / (2.0 * params.sigma * params.sigma));
  }

  struct Candidate {
    float diff;
    std::uint32_t order;  // row-major position within the window
    std::uint16_t chebyshev;
    ClassId label;
  };
  struct Vote {
    ClassId label;
    double weight;
  };
  std::vector<Candidate> cand;
  cand.reserve(static_cast<std::size_t>(params.kernel) * static_cast<std::size_t>(params.kernel));
  std::vector<Vote> votes;
  votes.reserve(k);

  std::vector<ClassId> out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const int pr = proj.row[i], pc = proj.col[i];
    const int r0 = std::max(0, pr - half), r1 = std::min(h - 1, pr + half);
    const int c0 = std::max(0, pc - half), c1 = std::min(w - 1, pc + half);
    const float target = proj.range[i];
    cand.clear();
    std::uint32_t order = 0;
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c, ++order) {
        const std::size_t pix = img.index(r, c);
        if (!img.valid[pix]) continue;
        const auto cheb = static_cast<std::uint16_t>(std::max(std::abs(r - pr), std::abs(c - pc)));
        cand.push_back({std::abs(img.range[pix] - target), order, cheb, labels.labels[pix]});
      }
    }
    if (cand.empty()) throw_empty_patch(i);

    const std::size_t keep = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(keep), cand.end(),
                      [](const Candidate& a, const Candidate& b) {
                        return a.diff < b.diff || (a.diff == b.diff && a.order < b.order);
                      });

    votes.clear();
    for (std::size_t j = 0; j < keep; ++j) {
      if (cand[j].diff > cutoff) continue;
      const double weight = spatial[cand[j].chebyshev];
      auto it = std::find_if(votes.begin(), votes.end(),
                             [&](const Vote& v) { return v.label == cand[j].label; });
      if (it == votes.end()) {
        votes.push_back({cand[j].label, weight});
      } else {
        it->weight += weight;
      }
    }
    if (votes.empty()) {
      out[i] = cand.front().label;
      continue;
    }
    const Vote* best = &votes.front();
    for (const Vote& v : votes) {
      if (v.weight > best->weight || (v.weight == best->weight && v.label < best->label)) best = &v;
    }
    out[i] = best->label;
  }
  return out;
}

std::vector<ClassId> copy_pixel_label(const LabelImage& labels, const PointProjection& proj) {
  if (labels.height != proj.height || labels.width != proj.width ||
      labels.labels.size() != static_cast<std::size_t>(proj.height) * static_cast<std::size_t>(proj.width)) {
    throw DataError("label image is not aligned with the projection");
  }
  std::vector<std::uint8_t> owned(labels.labels.size(), 0);
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj.is_owner[i]) owned[proj.pixel_index(i)] = 1;
  }
  std::vector<ClassId> out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const std::size_t pix = proj.pixel_index(i);
    if (!owned[pix]) {
      throw DataError("point " + std::to_string(i) + " lies on a pixel without owner");
    }
    out[i] = labels.labels[pix];
  }
  return out;
}

std::vector<ClassId> true_3d_oracle(const RangeImage& img, const LabelImage& labels,
                                    const PointProjection& proj, const PointCloud& cloud) {
  check_aligned(img, labels, proj);
  if (cloud.size() != proj.size()) {
    throw DataError("cloud and projection differ in point count");
  }
  std::vector<std::size_t> owners;
  for (std::size_t i = 0; i < proj.size(); ++i) {
    if (proj.is_owner[i]) owners.push_back(i);
  }
  if (owners.empty()) throw DataError("true_3d_oracle: no pixel owners");

  std::vector<ClassId> out(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const Point& p = cloud.points[i];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_owner = owners.front();
    for (std::size_t o : owners) {
      const Point& q = cloud.points[o];
      const double dx = static_cast<double>(p.x) - q.x;
      const double dy = static_cast<double>(p.y) - q.y;
      const double dz = static_cast<double>(p.z) - q.z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) {
        best = d2;
        best_owner = o;
      }
    }
    out[i] = labels.labels[proj.pixel_index(best_owner)];
  }
  return out;
}

}  // namespace rangeseg
