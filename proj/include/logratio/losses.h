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

#ifndef LOGRATIO_LOSSES_H_
#define LOGRATIO_LOSSES_H_

#include <optional>
#include <span>
#include <string_view>

#include "logratio/core.h"
#include "logratio/distances.h"

namespace logratio {

inline constexpr double kTripletMargin = 0.2;
inline constexpr double kDenseTripletMargin = 0.03;
inline constexpr double kDistanceFloor = 1e-12;

// Value and gradients of a loss on one triplet with respect to the three
// embedding vectors. grad_a == -(grad_i + grad_j) by construction, and all
// gradients are zero when `active` is false.
struct TripletLossOutput {
  double value = 0.0;
  Vector grad_a;
  Vector grad_i;
  Vector grad_j;
  bool active = false;
};

// Hinge [D(f_a, f_p) - D(f_a, f_n) + margin]_+ on squared Euclidean distances.
TripletLossOutput triplet_loss(ConstVec f_a, ConstVec f_p, ConstVec f_n, double margin);

// Same functional form as triplet_loss, applied to a densely mined triplet
// (a, i, j) with D(y_a, y_i) < D(y_a, y_j). The caller guarantees the order.
TripletLossOutput dense_triplet_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j,
                                     double margin = kDenseTripletMargin);

// Squared discrepancy between the log ratio of embedding distances and the
// log ratio of label distances (natural log). Parameter-free: there is no
// margin. Any of the four distances below `floor` is rejected with a
// ValidationError naming the pair.
TripletLossOutput log_ratio_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j,
                                 double label_dist_ai, double label_dist_aj,
                                 double floor = kDistanceFloor);

// Convenience overload evaluating the label distances with `metric`.
TripletLossOutput log_ratio_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j, const Label& y_a,
                                 const Label& y_i, const Label& y_j, const LabelMetric& metric,
                                 double floor = kDistanceFloor);

enum class LossKind { kTriplet, kLogRatio, kDenseTriplet };

std::string_view loss_kind_name(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

struct LossConfig {
  LossKind kind = LossKind::kLogRatio;
  // Only used by the hinge losses. Unset means the per-kind default.
  std::optional<double> margin;
  double distance_floor = kDistanceFloor;

  double effective_margin() const;
  void validate() const;
};

struct BatchLoss {
  double mean_value = 0.0;
  // One row per embedding row, holding d(mean loss)/d(embedding).
  Matrix gradients;
  std::size_t active_triplets = 0;
};

// Mean loss over `triplets` and the per-row gradient of that mean. Triplet
// indices address rows of `embeddings` and of `label_distances` (only read by
// the log-ratio loss). Throws on an empty triplet list.
BatchLoss batch_loss(std::span<const Triplet> triplets, const Matrix& embeddings,
                     const Matrix& label_distances, const LossConfig& config);

}  // namespace logratio

#endif  // LOGRATIO_LOSSES_H_
