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

#ifndef LOGRATIO_MINING_H_
#define LOGRATIO_MINING_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "logratio/core.h"
#include "logratio/rng.h"

namespace logratio {

inline constexpr std::size_t kNearestNeighbors = 5;
inline constexpr std::size_t kBinaryPositiveCount = 30;

// Anchor plus members: the k label-space nearest neighbors of the anchor
// (ascending distance, ties by index) followed by random fill.
struct Minibatch {
  std::size_t anchor = 0;
  std::vector<std::size_t> members;
  std::size_t k_nearest = 0;

  std::size_t size() const { return members.size() + 1; }
  bool operator==(const Minibatch&) const = default;
};

// The k nearest samples to `anchor` under `label_matrix`, excluding the
// anchor itself, ordered by (distance, index).
std::vector<std::size_t> nearest_neighbors(const Matrix& label_matrix, std::size_t anchor,
                                           std::size_t k);

// Requires batch_size <= number of samples and k < batch_size.
Minibatch build_minibatch(std::size_t anchor, std::size_t batch_size, std::size_t k,
                          const Matrix& label_matrix, Rng& rng);

// Every unordered member pair {i, j} with D(y_a, y_i) != D(y_a, y_j),
// oriented so the nearer member comes first, sorted by (i, j). Exact ties are
// skipped since they carry no ordering.
std::vector<Triplet> mine_dense(const Minibatch& batch, const Matrix& label_matrix);

// Binary-quantized triplet (anchor, positive, negative). The flags record
// where the quantization contradicts the label distances:
//   anchor_order_violated:   D(y_a, y_p) >= D(y_a, y_n)
//   positive_order_violated: D(y_p, y_n) <  D(y_p, y_a), i.e. the positive
//                            sits closer to the negative than to its anchor.
struct BinaryTriplet {
  std::size_t a = 0;
  std::size_t p = 0;
  std::size_t n = 0;
  bool anchor_order_violated = false;
  bool positive_order_violated = false;

  bool violates() const { return anchor_order_violated || positive_order_violated; }
  Triplet triplet() const { return {a, p, n}; }
};

// The positive_count nearest label-neighbors of the anchor form the positive
// pool and every other sample the negative pool; draws triplet_count
// (p, n) pairs uniformly with replacement. Violating triplets are kept and
// flagged, not filtered.
std::vector<BinaryTriplet> mine_binary(std::size_t anchor, const Matrix& label_matrix,
                                       std::size_t positive_count, std::size_t triplet_count,
                                       Rng& rng);

// One minibatch per sample as anchor, visiting anchors in a seeded random
// permutation.
std::vector<Minibatch> epoch_schedule(std::size_t batch_size, std::size_t k,
                                      const Matrix& label_matrix, Rng& rng);

// Drops triplets whose anchor-to-member label distances fall below `floor`,
// which the log-ratio loss cannot take.
std::vector<Triplet> drop_degenerate(std::span<const Triplet> triplets,
                                     const Matrix& label_matrix, double floor);

enum class MiningKind { kDense, kBinary };

std::string_view mining_kind_name(MiningKind kind);
MiningKind parse_mining_kind(std::string_view name);

}  // namespace logratio

#endif  // LOGRATIO_MINING_H_
