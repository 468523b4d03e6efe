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

#ifndef LOGRATIO_TRAINER_H_
#define LOGRATIO_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "logratio/core.h"
#include "logratio/distances.h"
#include "logratio/losses.h"
#include "logratio/mining.h"
#include "logratio/model.h"
#include "logratio/optimizer.h"

namespace logratio {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  std::size_t k = kNearestNeighbors;
  LossConfig loss;
  MiningKind mining = MiningKind::kDense;
  // Binary mining only: size of the positive pool and triplets per step.
  std::size_t positive_count = kBinaryPositiveCount;
  std::optional<std::size_t> binary_triplets;  // default: batch_size - 1
  OptimizerConfig optimizer;
  std::vector<std::size_t> hidden = {64};
  std::size_t embedding_dim = 16;
  // Default: on for the hinge losses, off for log-ratio.
  std::optional<bool> unit_norm;
  std::uint64_t seed = 1;
  // Validation nDCG every n epochs; 0 disables.
  std::size_t eval_every = 0;
  std::size_t eval_k = 8;

  bool effective_unit_norm() const;
  std::size_t effective_binary_triplets() const;
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double learning_rate = 0.0;
  std::size_t steps = 0;
  std::optional<double> ndcg_val;

  bool operator==(const EpochRecord&) const = default;
};

struct ValidationSplit {
  const Dataset* queries = nullptr;
  const Dataset* gallery = nullptr;
};

// Called with each minibatch's embedding table (rows: anchor, then members).
using EmbeddingObserver = std::function<void(const Matrix&)>;

struct TrainResult {
  EmbeddingModel model;
  // Entry 0 is the loss of the untrained model over one schedule; entries
  // 1..epochs are the mean minibatch losses seen while training.
  std::vector<EpochRecord> log;
};

// The untrained model train() starts from: dims {d_in, hidden..., d_emb},
// weights drawn from the config seed.
EmbeddingModel initial_model(std::size_t input_dim, const TrainConfig& config);

// Runs epoch schedules of minibatches, mining, batch loss, backpropagation
// and one optimizer step per minibatch. Deterministic for a given config.
// Throws DivergenceError with epoch/step context on a non-finite loss.
TrainResult train(const Dataset& dataset, const LabelMetric& metric, const TrainConfig& config,
                  const ValidationSplit& validation = {},
                  const EmbeddingObserver& observer = {});

}  // namespace logratio

#endif  // LOGRATIO_TRAINER_H_
