// SPDX-License-Identifier: Apache-2.0

#include "rangeseg/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rangeseg {

void InterpSpec::validate() const {
  if (k < 1) throw std::invalid_argument("interpolation needs k >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("interpolation eps must be > 0");
}

double distance(const Coord2& a, const Coord2& b, Metric metric) {
  const double dr = a[0] - b[0];
  const double dc = a[1] - b[1];
  return metric == Metric::kL1 ? std::abs(dr) + std::abs(dc) : std::sqrt(dr * dr + dc * dc);
}

std::vector<double> distance_interpolate(std::span<const KnownSample> known, const Coord2& query,
                                         const InterpSpec& spec) {
  spec.validate();
  if (known.empty()) throw std::invalid_argument("distance_interpolate: no known samples");
  const auto k = static_cast<std::size_t>(spec.k);
  if (k > known.size()) {
    throw std::invalid_argument("distance_interpolate: k = " + std::to_string(k) + " exceeds " +
                                std::to_string(known.size()) + " known samples");
  }
  const std::size_t channels = known.front().value.size();
  for (const KnownSample& s : known) {
    if (s.value.size() != channels) {
      throw std::invalid_argument("distance_interpolate: known values differ in length");
    }
  }

  std::vector<double> dist(known.size());
  for (std::size_t i = 0; i < known.size(); ++i) {
    dist[i] = distance(query, known[i].position, spec.metric);
  }
  std::vector<std::size_t> order(known.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                    });

  if (dist[order[0]] < spec.eps) {
    const auto& v = known[order[0]].value;
    return {v.begin(), v.end()};
  }
  std::vector<double> out(channels, 0.0);
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = order[j];
    const double w = 1.0 / dist[i];
    weight_sum += w;
    for (std::size_t c = 0; c < channels; ++c) out[c] += w * known[i].value[c];
  }
  for (double& v : out) v /= weight_sum;
  return out;
}

std::vector<double> lattice_interpolate(const FeatureMap& fmap, const Coord2& query,
                                        const InterpSpec& spec) {
  spec.validate();
  const int h = fmap.height, w = fmap.width;
  if (h < 1 || w < 1) throw std::invalid_argument("lattice_interpolate: empty feature map");
  if (!(query[0] >= 0.0 && query[0] <= h - 1 && query[1] >= 0.0 && query[1] <= w - 1)) {
    throw std::invalid_argument("lattice_interpolate: query outside the lattice");
  }
  const auto total = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  if (static_cast<std::size_t>(spec.k) > total) {
    throw std::invalid_argument("lattice_interpolate: k exceeds the number of lattice nodes");
  }

  const int r0 = std::min(static_cast<int>(std::floor(query[0])), h - 1);
  const int c0 = std::min(static_cast<int>(std::floor(query[1])), w - 1);
  std::vector<KnownSample> window;
  std::vector<double> dists;
  for (int radius = 1;; ++radius) {
    const int r_lo = std::max(0, r0 - radius), r_hi = std::min(h - 1, r0 + 1 + radius);
    const int c_lo = std::max(0, c0 - radius), c_hi = std::min(w - 1, c0 + 1 + radius);
    window.clear();
    dists.clear();
    for (int r = r_lo; r <= r_hi; ++r) {
      for (int c = c_lo; c <= c_hi; ++c) {
        const Coord2 pos{static_cast<double>(r), static_cast<double>(c)};
        window.push_back({pos, fmap.pixel(r, c)});
        dists.push_back(distance(query, pos, spec.metric));
      }
    }
    const bool covers_all = r_lo == 0 && c_lo == 0 && r_hi == h - 1 && c_hi == w - 1;
    if (covers_all) break;
    // Nodes outside the window differ from the query by at least radius + 1
    // in one coordinate, so they cannot tie or beat a k-th distance below it.
    if (window.size() >= static_cast<std::size_t>(spec.k)) {
      std::nth_element(dists.begin(), dists.begin() + (spec.k - 1), dists.end());
      if (dists[static_cast<std::size_t>(spec.k - 1)] < radius + 1) break;
    }
  }
  return distance_interpolate(window, query, spec);
}

double corner_aligned_coord(int i, int in_size, int out_size) {
  if (out_size == 1) return 0.0;
  return static_cast<double>(i) * (in_size - 1) / (out_size - 1);
}

FeatureMap bilinear_upsample(const FeatureMap& fmap, int out_h, int out_w) {
  if (fmap.height < 1 || fmap.width < 1 || fmap.channels < 1) {
    throw std::invalid_argument("bilinear_upsample: zero-sized input");
  }
  if (out_h < fmap.height || out_w < fmap.width) {
    throw std::invalid_argument("bilinear_upsample: output " + std::to_string(out_h) + "x" +
                                std::to_string(out_w) + " is smaller than the input");
  }
  const int h = fmap.height, w = fmap.width, ch = fmap.channels;
  FeatureMap out(out_h, out_w, ch);

  // Separable: per output row/column the lower node and fractional weight.
  auto axis = [](int in, int n) {
    std::vector<std::pair<int, double>> taps(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double coord = corner_aligned_coord(i, in, n);
      const int lo = std::min(static_cast<int>(std::floor(coord)), in - 1);
      taps[static_cast<std::size_t>(i)] = {lo, lo == in - 1 ? 0.0 : coord - lo};
    }
    return taps;
  };
  const auto rows = axis(h, out_h);
  const auto cols = axis(w, out_w);

  for (int i = 0; i < out_h; ++i) {
    const auto [r, fr] = rows[static_cast<std::size_t>(i)];
    const int r1 = std::min(r + 1, h - 1);
    for (int j = 0; j < out_w; ++j) {
      const auto [c, fc] = cols[static_cast<std::size_t>(j)];
      const int c1 = std::min(c + 1, w - 1);
      auto v00 = fmap.pixel(r, c), v01 = fmap.pixel(r, c1);
      auto v10 = fmap.pixel(r1, c), v11 = fmap.pixel(r1, c1);
      auto dst = out.pixel(i, j);
      // Difference form: constants come out exact, and f == 0 at nodes.
      for (int k = 0; k < ch; ++k) {
        const double top = v00[k] + fc * (v01[k] - v00[k]);
        const double bottom = v10[k] + fc * (v11[k] - v10[k]);
        dst[k] = top + fr * (bottom - top);
      }
    }
  }
  return out;
}

FeatureMap fid_concat(std::span<const FeatureMap> maps) {
  if (maps.empty()) throw std::invalid_argument("fid_concat: no feature maps");
  const int h = maps[0].height, w = maps[0].width;
  int total = 0;
  for (std::size_t m = 0; m < maps.size(); ++m) {
    const FeatureMap& f = maps[m];
    bool ok = f.height >= 1 && f.width >= 1 && f.channels >= 1 && h % f.height == 0 &&
              w % f.width == 0;
    if (ok) {
      const int sh = h / f.height, sw = w / f.width;
      ok = sh == sw && (sh & (sh - 1)) == 0;
    }
    if (!ok) {
      throw std::invalid_argument("fid_concat: map " + std::to_string(m) + " (" +
                                  std::to_string(f.height) + "x" + std::to_string(f.width) +
                                  "x" + std::to_string(f.channels) + ") is not " +
                                  std::to_string(h) + "x" + std::to_string(w) +
                                  " divided by a power of two");
    }
    total += f.channels;
  }

  FeatureMap out(h, w, total);
  int base = 0;
  for (const FeatureMap& f : maps) {
    const FeatureMap up = (f.height == h && f.width == w) ? f : bilinear_upsample(f, h, w);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        auto src = up.pixel(r, c);
        std::copy(src.begin(), src.end(), out.pixel(r, c).begin() + base);
      }
    }
    base += f.channels;
  }
  return out;
}

Discrepancy interp_discrepancy(const FeatureMap& fmap, int out_h, int out_w,
                               const InterpSpec& spec) {
  const FeatureMap bilinear = bilinear_upsample(fmap, out_h, out_w);
  Discrepancy result;
  result.diff = FeatureMap(out_h, out_w, fmap.channels);
  double sum = 0.0;
  for (int i = 0; i < out_h; ++i) {
    const double y = corner_aligned_coord(i, fmap.height, out_h);
    for (int j = 0; j < out_w; ++j) {
      const double x = corner_aligned_coord(j, fmap.width, out_w);
      const std::vector<double> dist = lattice_interpolate(fmap, {y, x}, spec);
      auto ref = bilinear.pixel(i, j);
      auto dst = result.diff.pixel(i, j);
      for (int c = 0; c < fmap.channels; ++c) {
        dst[c] = dist[static_cast<std::size_t>(c)] - ref[c];
        result.max_abs = std::max(result.max_abs, std::abs(dst[c]));
        sum += std::abs(dst[c]);
      }
    }
  }
  result.mean_abs = result.diff.data.empty() ? 0.0 : sum / static_cast<double>(result.diff.data.size());
  return result;
}

}  // namespace rangeseg
