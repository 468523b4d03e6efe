/*
 * Copyright 2026 The logratio Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOGRATIO_DISTANCES_H_
#define LOGRATIO_DISTANCES_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logratio/core.h"

namespace logratio {

// Small discrete segmentation map, row-major region ids.
struct SegMask {
  int width = 0;
  int height = 0;
  std::vector<int> labels;

  int at(int row, int col) const { return labels[row * width + col]; }
};

// Throws if the grid is not fully populated or has non-positive dimensions.
void validate_mask(const SegMask& mask);

// Reads {"width": w, "height": h, "labels": [row-major ints]}.
SegMask parse_mask_json(const std::string& text);

// Sum over joints of the plain (not squared) Euclidean distance between
// corresponding 2-D joint positions. Labels are laid out x0, y0, x1, y1, ...
double joint_sum_distance(ConstVec pose_a, ConstVec pose_b, std::size_t joint_count);

// Mean IoU over `region_ids`. Ids absent from both masks are skipped; an id
// present in exactly one mask contributes 0. Empty `region_ids` means "every
// id that occurs in either mask".
double miou(const SegMask& a, const SegMask& b, std::span<const int> region_ids = {});

// 1 - miou(a, b).
double layout_distance(const SegMask& a, const SegMask& b,
                       std::span<const int> region_ids = {});

using PairwiseFn = std::function<double(ConstVec, ConstVec)>;

// sum_x min_y w(x, y) + sum_y min_x w(x, y). Both sets must be non-empty.
double set_min_sum_distance(std::span<const Vector> xs, std::span<const Vector> ys,
                            const PairwiseFn& pairwise);

enum class MetricKind { kSquaredEuclidean, kJointSum, kMaskMiouComplement, kSetMinSum };

std::string_view metric_kind_name(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

// Label-space distance D(y_a, y_b) behind one interface.
class LabelMetric {
 public:
  static LabelMetric squared_euclidean();
  static LabelMetric joint_sum(std::size_t joint_count);
  static LabelMetric mask_miou_complement(int width, int height,
                                          std::vector<int> region_ids = {});
  // Defaults the inner pairwise function to squared Euclidean over item vectors.
  static LabelMetric set_min_sum(PairwiseFn pairwise = {});

  MetricKind kind() const { return kind_; }
  std::string_view name() const { return metric_kind_name(kind_); }
  std::size_t joint_count() const { return joint_count_; }
  int mask_width() const { return mask_width_; }
  int mask_height() const { return mask_height_; }
  const std::vector<int>& region_ids() const { return region_ids_; }

  double operator()(const Label& a, const Label& b) const;

  // Checks that a label is well-formed for this metric (length, mask ids, ...).
  void validate(const Label& label) const;

 private:
  explicit LabelMetric(MetricKind kind) : kind_(kind) {}
  SegMask to_mask(const Label& label) const;

  MetricKind kind_;
  std::size_t joint_count_ = 0;
  int mask_width_ = 0;
  int mask_height_ = 0;
  std::vector<int> region_ids_;
  PairwiseFn pairwise_;
};

// Symmetric matrix with entry (i, j) = metric(y_i, y_j) and a zero diagonal.
// Errors carry the offending sample indices.
Matrix pairwise_label_matrix(const Dataset& dataset, const LabelMetric& metric);

}  // namespace logratio

#endif  // LOGRATIO_DISTANCES_H_
