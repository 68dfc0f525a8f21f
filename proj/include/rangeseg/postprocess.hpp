// SPDX-License-Identifier: Apache-2.0

#ifndef RANGESEG_POSTPROCESS_HPP
#define RANGESEG_POSTPROCESS_HPP

#include <cstddef>
#include <vector>

#include "rangeseg/point_cloud.hpp"
#include "rangeseg/projection.hpp"

namespace rangeseg {

/// Per-pixel class predictions aligned with a RangeImage. Only pixels that
/// are valid in the range image are read.
struct LabelImage {
  int height = 0;
  int width = 0;
  std::vector<ClassId> labels;  // row-major

  ClassId at(std::size_t pixel) const { return labels[pixel]; }
};

/// Label image holding each pixel owner's ground-truth label (0 elsewhere).
/// Stands in for a perfect network in tests and benchmarks.
LabelImage owner_label_image(const RangeImage& img, const LabelSet& labels);

struct NlaParams {
  int kernel = 5;

  void validate() const;  // odd, >= 1
};

struct KnnParams {
  int kernel = 5;
  int k = 5;
  double cutoff = 1.0;  // meters of |range difference|
  double sigma = 1.0;   // pixels

  void validate() const;
};

/// Nearest label assignment. Each point scans the kernel x kernel patch
/// around its pixel (truncated at the image border) in row-major order and
/// takes the label of the first valid pixel minimizing
/// |pixel range - point range|. Throws DataError on misaligned inputs.
std::vector<ClassId> nla(const RangeImage& img, const LabelImage& labels,
                         const PointProjection& proj, const NlaParams& params = {});

/// Range-gated, Gaussian-weighted vote over the kernel window: the k
/// smallest |range difference| pixels (row-major order on ties) within
/// `cutoff` vote with weight exp(-d^2 / 2 sigma^2), d the Chebyshev pixel
/// offset. With nothing inside the cutoff the nearest candidate decides.
/// Equal votes go to the lower class id.
std::vector<ClassId> knn_postprocess(const RangeImage& img, const LabelImage& labels,
                                     const PointProjection& proj, const KnnParams& params = {});

/// Every point takes its own pixel's label.
std::vector<ClassId> copy_pixel_label(const LabelImage& labels, const PointProjection& proj);

/// Literal reimplementation of nla used for differential testing.
std::vector<ClassId> patch_oracle(const RangeImage& img, const LabelImage& labels,
                                  const PointProjection& proj, const NlaParams& params = {});

/// Label of the Euclidean-nearest pixel owner in 3D (lowest point index on
/// ties), found by exhaustive search. O(points x owners).
std::vector<ClassId> true_3d_oracle(const RangeImage& img, const LabelImage& labels,
                                    const PointProjection& proj, const PointCloud& cloud);

}  // namespace rangeseg

#endif  // RANGESEG_POSTPROCESS_HPP
