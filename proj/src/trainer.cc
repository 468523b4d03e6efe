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

#include "logratio/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "logratio/eval.h"

namespace logratio {
namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kProbeStream = 1;
constexpr std::uint64_t kEpochStreamBase = 1000;

// One minibatch worth of supervision in local row coordinates: row 0 is the
// anchor, triplets index rows.
struct Step {
  std::vector<std::size_t> rows;
  std::vector<Triplet> triplets;
  Matrix label_distances;
};

Step localize(std::vector<std::size_t> rows, std::span<const Triplet> triplets,
              const Matrix& labels) {
  Step step;
  std::unordered_map<std::size_t, std::size_t> local;
  for (std::size_t r = 0; r < rows.size(); ++r) local.emplace(rows[r], r);
  step.triplets.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    step.triplets.push_back({local.at(t.a), local.at(t.i), local.at(t.j)});
  }
  step.label_distances = Matrix(rows.size(), rows.size());
  for (std::size_t x = 0; x < rows.size(); ++x) {
    for (std::size_t y = 0; y < rows.size(); ++y) {
      step.label_distances(x, y) = labels(rows[x], rows[y]);
    }
  }
  step.rows = std::move(rows);
  return step;
}

std::vector<Step> dense_steps(const TrainConfig& config, const Matrix& labels, Rng& rng) {
  std::vector<Step> steps;
  for (const Minibatch& batch : epoch_schedule(config.batch_size, config.k, labels, rng)) {
    std::vector<Triplet> triplets = mine_dense(batch, labels);
    if (config.loss.kind == LossKind::kLogRatio) {
      triplets = drop_degenerate(triplets, labels, config.loss.distance_floor);
    }
    std::vector<std::size_t> rows{batch.anchor};
    rows.insert(rows.end(), batch.members.begin(), batch.members.end());
    steps.push_back(localize(std::move(rows), triplets, labels));
  }
  return steps;
}

std::vector<Step> binary_steps(const TrainConfig& config, const Matrix& labels, Rng& rng) {
  std::vector<std::size_t> anchors(labels.rows());
  std::iota(anchors.begin(), anchors.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(anchors));
  std::vector<Step> steps;
  steps.reserve(anchors.size());
  for (std::size_t a : anchors) {
    std::vector<Triplet> triplets;
    for (const BinaryTriplet& bt : mine_binary(a, labels, config.positive_count,
                                               config.effective_binary_triplets(), rng)) {
      triplets.push_back(bt.triplet());
    }
    if (config.loss.kind == LossKind::kLogRatio) {
      triplets = drop_degenerate(triplets, labels, config.loss.distance_floor);
    }
    std::vector<std::size_t> rows{a};
    for (const Triplet& t : triplets) {
      for (std::size_t idx : {t.i, t.j}) {
        if (std::find(rows.begin(), rows.end(), idx) == rows.end()) rows.push_back(idx);
      }
    }
    steps.push_back(localize(std::move(rows), triplets, labels));
  }
  return steps;
}

class Runner {
 public:
  Runner(const Dataset& dataset, const Matrix& labels, const TrainConfig& config,
         const EmbeddingObserver& observer, EmbeddingModel& model)
      : dataset_(dataset), labels_(labels), config_(config), observer_(observer), model_(model) {}

  std::vector<Step> schedule(Rng& rng) const {
    return config_.mining == MiningKind::kDense ? dense_steps(config_, labels_, rng)
                                                : binary_steps(config_, labels_, rng);
  }

  // Returns the minibatch loss, or nullopt when the batch had no usable
  // triplets. Updates the model when `optimizer` is given.
  std::optional<double> run(Step& step, Optimizer* optimizer, std::size_t epoch,
                            std::size_t index) {
    const std::size_t rows = step.rows.size();
    caches_.resize(std::max(caches_.size(), rows));
    Matrix embeddings(rows, model_.output_dim());
    for (std::size_t r = 0; r < rows; ++r) {
      const Vector e = model_.forward(dataset_[step.rows[r]].features, &caches_[r]);
      std::copy(e.begin(), e.end(), embeddings.row(r).begin());
    }
    if (!all_finite(embeddings.data())) diverged(epoch, index, "non-finite embedding");
    if (observer_) observer_(embeddings);

    if (config_.loss.kind == LossKind::kLogRatio) {
      const double floor = config_.loss.distance_floor;
      std::erase_if(step.triplets, [&](const Triplet& t) {
        return squared_euclidean(embeddings.row(t.a), embeddings.row(t.i)) < floor ||
               squared_euclidean(embeddings.row(t.a), embeddings.row(t.j)) < floor;
      });
    }
    if (step.triplets.empty()) return std::nullopt;

    const BatchLoss loss = batch_loss(step.triplets, embeddings, step.label_distances, config_.loss);
    if (!std::isfinite(loss.mean_value)) diverged(epoch, index, "non-finite loss");
    if (optimizer && loss.active_triplets > 0) {
      grads_.assign(model_.parameter_count(), 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        const ConstVec g = loss.gradients.row(r);
        if (std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) continue;
        model_.backward(caches_[r], g, grads_);
      }
      if (!all_finite(grads_)) diverged(epoch, index, "non-finite gradient");
      optimizer->step(model_.mutable_parameters(), grads_);
      if (!all_finite(model_.parameters())) diverged(epoch, index, "non-finite parameters");
    }
    return loss.mean_value;
  }

 private:
  [[noreturn]] static void diverged(std::size_t epoch, std::size_t index, const char* what) {
    throw DivergenceError("training diverged at epoch " + std::to_string(epoch) + ", step " +
                          std::to_string(index) + ": " + what);
  }

  const Dataset& dataset_;
  const Matrix& labels_;
  const TrainConfig& config_;
  const EmbeddingObserver& observer_;
  EmbeddingModel& model_;
  std::vector<ForwardCache> caches_;
  Vector grads_;
};

}  // namespace

bool TrainConfig::effective_unit_norm() const {
  return unit_norm.value_or(loss.kind != LossKind::kLogRatio);
}

std::size_t TrainConfig::effective_binary_triplets() const {
  return binary_triplets.value_or(batch_size > 1 ? batch_size - 1 : 1);
}

void TrainConfig::validate() const {
  if (batch_size < 2) throw ValidationError("batch_size must be >= 2");
  if (k >= batch_size) throw ValidationError("k must be smaller than batch_size");
  if (embedding_dim == 0) throw ValidationError("embedding_dim must be positive");
  for (std::size_t h : hidden) {
    if (h == 0) throw ValidationError("hidden layer widths must be positive");
  }
  if (mining == MiningKind::kBinary) {
    if (positive_count == 0) throw ValidationError("positive_count must be positive");
    if (effective_binary_triplets() == 0) throw ValidationError("binary_triplets must be positive");
  }
  if (eval_k == 0) throw ValidationError("eval_k must be positive");
  loss.validate();
  optimizer.validate();
}

EmbeddingModel initial_model(std::size_t input_dim, const TrainConfig& config) {
  std::vector<std::size_t> dims{input_dim};
  dims.insert(dims.end(), config.hidden.begin(), config.hidden.end());
  dims.push_back(config.embedding_dim);
  Rng rng = Rng(config.seed).fork(kInitStream);
  return EmbeddingModel::initialize(dims, config.effective_unit_norm(), rng);
}

TrainResult train(const Dataset& dataset, const LabelMetric& metric, const TrainConfig& config,
                  const ValidationSplit& validation, const EmbeddingObserver& observer) {
  config.validate();
  if (config.batch_size > dataset.size()) {
    throw ValidationError("batch_size " + std::to_string(config.batch_size) +
                          " exceeds training set size " + std::to_string(dataset.size()));
  }
  if (config.mining == MiningKind::kBinary && config.positive_count + 1 >= dataset.size()) {
    throw ValidationError("positive_count must be smaller than training set size - 1");
  }
  const Matrix labels = pairwise_label_matrix(dataset, metric);

  TrainResult result;
  result.model = initial_model(dataset.feature_dim(), config);
  Optimizer optimizer(config.optimizer, result.model.parameter_count());
  Runner runner(dataset, labels, config, observer, result.model);
  const Rng root(config.seed);

  auto validate_ndcg = [&](std::size_t epoch) -> std::optional<double> {
    if (!validation.queries || !validation.gallery || config.eval_every == 0) return std::nullopt;
    if (epoch % config.eval_every != 0) return std::nullopt;
    const std::size_t K = std::min(config.eval_k, validation.gallery->size());
    return mean_ndcg(result.model, *validation.queries, *validation.gallery, metric, K);
  };

  auto run_epoch = [&](std::size_t epoch, Rng rng, Optimizer* opt) {
    std::vector<Step> steps = runner.schedule(rng);
    Vector losses;
    losses.reserve(steps.size());
    for (std::size_t s = 0; s < steps.size(); ++s) {
      if (auto value = runner.run(steps[s], opt, epoch, s)) losses.push_back(*value);
    }
    EpochRecord record;
    record.epoch = epoch;
    record.steps = losses.size();
    record.mean_loss = losses.empty() ? 0.0 : pairwise_sum(losses) / static_cast<double>(losses.size());
    return record;
  };

  EpochRecord initial = run_epoch(0, root.fork(kProbeStream), nullptr);
  initial.learning_rate = optimizer.learning_rate();
  initial.ndcg_val = validate_ndcg(0);
  result.log.push_back(initial);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    optimizer.set_epoch(epoch - 1);
    EpochRecord record = run_epoch(epoch, root.fork(kEpochStreamBase + epoch), &optimizer);
    record.learning_rate = optimizer.learning_rate();
    record.ndcg_val = validate_ndcg(epoch);
    result.log.push_back(record);
  }
  return result;
}

}  // namespace logratio
