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

#include "logratio/mining.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace logratio {
namespace {

void check_square(const Matrix& m, const char* op) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(op) + ": label matrix must be square and non-empty");
  }
}

}  // namespace

std::vector<std::size_t> nearest_neighbors(const Matrix& label_matrix, std::size_t anchor,
                                           std::size_t k) {
  check_square(label_matrix, "nearest_neighbors");
  const std::size_t n = label_matrix.rows();
  if (anchor >= n) throw ValidationError("nearest_neighbors: anchor out of range");
  if (k > n - 1) {
    throw ValidationError("nearest_neighbors: k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(n - 1) + " non-anchor samples");
  }
  std::vector<std::size_t> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != anchor) others.push_back(i);
  }
  const ConstVec dist = label_matrix.row(anchor);
  auto closer = [&dist](std::size_t x, std::size_t y) {
    return dist[x] != dist[y] ? dist[x] < dist[y] : x < y;
  };
  std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k),
                    others.end(), closer);
  others.resize(k);
  return others;
}

Minibatch build_minibatch(std::size_t anchor, std::size_t batch_size, std::size_t k,
                          const Matrix& label_matrix, Rng& rng) {
  check_square(label_matrix, "build_minibatch");
  const std::size_t n = label_matrix.rows();
  if (batch_size > n) {
    throw ValidationError("build_minibatch: batch size " + std::to_string(batch_size) +
                          " exceeds dataset size " + std::to_string(n));
  }
  if (batch_size < 2) throw ValidationError("build_minibatch: batch size must be >= 2");
  if (k >= batch_size) throw ValidationError("build_minibatch: k must be < batch size");

  Minibatch batch;
  batch.anchor = anchor;
  batch.k_nearest = k;
  batch.members = nearest_neighbors(label_matrix, anchor, k);

  std::vector<bool> taken(n, false);
  taken[anchor] = true;
  for (std::size_t m : batch.members) taken[m] = true;
  std::vector<std::size_t> pool;
  pool.reserve(n - k - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) pool.push_back(i);
  }
  // Partial Fisher-Yates: the first `fill` slots become a uniform sample
  // without replacement.
  const std::size_t fill = batch_size - 1 - k;
  for (std::size_t s = 0; s < fill; ++s) {
    const std::size_t pick = s + static_cast<std::size_t>(rng.below(pool.size() - s));
    std::swap(pool[s], pool[pick]);
    batch.members.push_back(pool[s]);
  }
  return batch;
}

std::vector<Triplet> mine_dense(const Minibatch& batch, const Matrix& label_matrix) {
  check_square(label_matrix, "mine_dense");
  const std::size_t a = batch.anchor;
  const ConstVec dist = label_matrix.row(a);
  std::vector<Triplet> out;
  const auto& m = batch.members;
  out.reserve(m.size() * (m.size() - (m.empty() ? 0 : 1)) / 2);
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      const double dx = dist[m[x]];
      const double dy = dist[m[y]];
      if (dx < dy) {
        out.push_back({a, m[x], m[y]});
      } else if (dy < dx) {
        out.push_back({a, m[y], m[x]});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BinaryTriplet> mine_binary(std::size_t anchor, const Matrix& label_matrix,
                                       std::size_t positive_count, std::size_t triplet_count,
                                       Rng& rng) {
  check_square(label_matrix, "mine_binary");
  const std::size_t n = label_matrix.rows();
  if (positive_count == 0 || positive_count + 1 >= n) {
    throw ValidationError("mine_binary: positive count " + std::to_string(positive_count) +
                          " must be in [1, " + std::to_string(n > 2 ? n - 2 : 0) + "]");
  }
  const std::vector<std::size_t> positives = nearest_neighbors(label_matrix, anchor, positive_count);
  std::vector<bool> is_positive(n, false);
  for (std::size_t p : positives) is_positive[p] = true;
  std::vector<std::size_t> negatives;
  negatives.reserve(n - positive_count - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != anchor && !is_positive[i]) negatives.push_back(i);
  }

  std::vector<BinaryTriplet> out;
  out.reserve(triplet_count);
  for (std::size_t t = 0; t < triplet_count; ++t) {
    BinaryTriplet bt;
    bt.a = anchor;
    bt.p = positives[rng.below(positives.size())];
    bt.n = negatives[rng.below(negatives.size())];
    bt.anchor_order_violated = !(label_matrix(anchor, bt.p) < label_matrix(anchor, bt.n));
    bt.positive_order_violated = label_matrix(bt.p, bt.n) < label_matrix(bt.p, anchor);
    out.push_back(bt);
  }
  return out;
}

std::vector<Minibatch> epoch_schedule(std::size_t batch_size, std::size_t k,
                                      const Matrix& label_matrix, Rng& rng) {
  check_square(label_matrix, "epoch_schedule");
  std::vector<std::size_t> anchors(label_matrix.rows());
  std::iota(anchors.begin(), anchors.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(anchors));
  std::vector<Minibatch> out;
  out.reserve(anchors.size());
  for (std::size_t a : anchors) out.push_back(build_minibatch(a, batch_size, k, label_matrix, rng));
  return out;
}

std::vector<Triplet> drop_degenerate(std::span<const Triplet> triplets,
                                     const Matrix& label_matrix, double floor) {
  std::vector<Triplet> out;
  out.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (label_matrix(t.a, t.i) >= floor && label_matrix(t.a, t.j) >= floor) out.push_back(t);
  }
  return out;
}

std::string_view mining_kind_name(MiningKind kind) {
  return kind == MiningKind::kDense ? "dense" : "binary";
}

MiningKind parse_mining_kind(std::string_view name) {
  if (name == "dense") return MiningKind::kDense;
  if (name == "binary") return MiningKind::kBinary;
  throw ValidationError("unknown mining strategy '" + std::string(name) + "'");
}

}  // namespace logratio
