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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "logratio/synthdata.h"
#include "logratio/trainer.h"

using namespace logratio;

namespace {

Dataset ramp(std::size_t n, std::uint64_t seed = 1) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kRamp;
  spec.n = n;
  spec.d_lab = 3;
  spec.noise = 0.0;
  spec.seed = seed;
  return generate(spec);
}

TrainConfig small_config() {
  TrainConfig c;
  c.epochs = 3;
  c.batch_size = 12;
  c.hidden = {16};
  c.embedding_dim = 8;
  return c;
}

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

}  // namespace

TEST_CASE("zero epochs leave the initialization untouched") {
  const Dataset d = ramp(60);
  TrainConfig c = small_config();
  c.epochs = 0;
  const TrainResult r = train(d, LabelMetric::squared_euclidean(), c);
  CHECK(r.model == initial_model(d.feature_dim(), c));
  CHECK(r.log.size() == 1);
  CHECK(r.log[0].epoch == 0);
}

TEST_CASE("training is deterministic") {
  const Dataset d = ramp(60);
  for (MiningKind mining : {MiningKind::kDense, MiningKind::kBinary}) {
    TrainConfig c = small_config();
    c.mining = mining;
    c.positive_count = 10;
    if (mining == MiningKind::kBinary) c.loss.kind = LossKind::kTriplet;
    const TrainResult a = train(d, LabelMetric::squared_euclidean(), c);
    const TrainResult b = train(d, LabelMetric::squared_euclidean(), c);
    CHECK(a.model == b.model);
    CHECK(a.log == b.log);
    c.seed = 2;
    CHECK_FALSE(train(d, LabelMetric::squared_euclidean(), c).model == a.model);
  }
}

TEST_CASE("log-ratio training converges on a noiseless ramp") {
  const Dataset d = ramp(200);
  TrainConfig c;
  c.epochs = 30;
  c.embedding_dim = 16;
  const TrainResult r = train(d, LabelMetric::squared_euclidean(), c);
  REQUIRE(r.log.size() == 31);
  // Observed ratio is about 1e-2; the contract is 0.1.
  CHECK(r.log.back().mean_loss < 0.1 * r.log.front().mean_loss);
  for (std::size_t e = 1; e < r.log.size(); ++e) {
    CHECK(r.log[e].learning_rate == doctest::Approx(1e-2 * std::pow(0.9, e - 1)));
    CHECK(r.log[e].steps == 200);
  }
}

TEST_CASE("late epochs beat early epochs for every loss") {
  const Dataset d = ramp(150, 3);
  for (LossKind kind : {LossKind::kLogRatio, LossKind::kTriplet, LossKind::kDenseTriplet}) {
    TrainConfig c;
    c.epochs = 12;
    c.hidden = {32};
    c.loss.kind = kind;
    c.mining = kind == LossKind::kTriplet ? MiningKind::kBinary : MiningKind::kDense;
    const TrainResult r = train(d, LabelMetric::squared_euclidean(), c);
    const auto& L = r.log;
    const std::size_t n = L.size();
    CAPTURE(loss_kind_name(kind));
    CHECK(median3(L[n - 1].mean_loss, L[n - 2].mean_loss, L[n - 3].mean_loss) <
          median3(L[1].mean_loss, L[2].mean_loss, L[3].mean_loss));
  }
}

TEST_CASE("unit-norm embeddings during training") {
  const Dataset d = ramp(40);
  TrainConfig c = small_config();
  c.loss.kind = LossKind::kDenseTriplet;
  CHECK(c.effective_unit_norm());
  double worst = 0;
  std::size_t calls = 0;
  train(d, LabelMetric::squared_euclidean(), c, {}, [&](const Matrix& emb) {
    ++calls;
    for (std::size_t r = 0; r < emb.rows(); ++r) worst = std::max(worst, std::abs(l2_norm(emb.row(r)) - 1.0));
  });
  CHECK(calls == 4 * 40);  // includes the initial probe pass
  CHECK(worst <= 1e-9);
  c.loss.kind = LossKind::kLogRatio;
  CHECK_FALSE(c.effective_unit_norm());
}

TEST_CASE("validation nDCG is logged when requested") {
  const Dataset d = ramp(120);
  const Split s = split(d, 0.6, 10, 4);
  TrainConfig c = small_config();
  c.eval_every = 1;
  c.eval_k = 4;
  const TrainResult r = train(s.train, LabelMetric::squared_euclidean(), c, {&s.queries, &s.gallery});
  for (const EpochRecord& e : r.log) {
    REQUIRE(e.ndcg_val.has_value());
    CHECK(*e.ndcg_val > 0.0);
    CHECK(*e.ndcg_val <= 1.0 + 1e-12);
  }
}

TEST_CASE("train config validation and divergence") {
  const Dataset d = ramp(20);
  TrainConfig c = small_config();
  c.batch_size = 21;
  CHECK_THROWS_AS(train(d, LabelMetric::squared_euclidean(), c), ValidationError);
  c = small_config();
  c.k = 12;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = small_config();
  c.mining = MiningKind::kBinary;
  c.positive_count = 19;
  CHECK_THROWS_AS(train(d, LabelMetric::squared_euclidean(), c), ValidationError);
  CHECK(small_config().effective_binary_triplets() == 11);

  c = small_config();
  c.loss.kind = LossKind::kTriplet;
  c.unit_norm = false;
  c.optimizer.learning_rate = 1e150;
  CHECK_THROWS_AS(train(d, LabelMetric::squared_euclidean(), c), DivergenceError);
}
