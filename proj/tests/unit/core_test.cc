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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "logratio/core.h"
#include "logratio/dataset_io.h"
#include "logratio/rng.h"
#include "oracles.h"

using namespace logratio;

TEST_CASE("squared euclidean of a 3-4-5 offset") {
  CHECK(squared_euclidean(Vector{1, 2}, Vector{4, 6}) == 25.0);
  CHECK(squared_euclidean(Vector{}, Vector{}) == 0.0);
  CHECK_THROWS_AS(squared_euclidean(Vector{1}, Vector{1, 2}), ValidationError);
}

TEST_CASE("l2 normalize") {
  const Vector v = l2_normalize(Vector{3, 4});
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  CHECK_THROWS_AS(l2_normalize(Vector{0, 0}), ValidationError);
  CHECK_THROWS_AS(l2_normalize(Vector{NAN, 1}), ValidationError);
}

TEST_CASE("pairwise sum is exact on integers and order-fixed") {
  Vector v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum(Vector{}) == 0.0);
  Rng rng(3);
  Vector r = oracle::random_vector(777, rng);
  CHECK(pairwise_sum(r) == pairwise_sum(r));
  CHECK(pairwise_sum(r) == doctest::Approx(std::accumulate(r.begin(), r.end(), 0.0)));
}

TEST_CASE("rng is reproducible and forks are independent") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
  Rng f0 = Rng(42).fork(0), f1 = Rng(42).fork(1);
  CHECK(f0.next_u64() != f1.next_u64());
  Rng u(7);
  double mean = 0, sq = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double x = u.normal();
    mean += x;
    sq += x * x;
  }
  CHECK(std::abs(mean / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  for (int k = 0; k < 1000; ++k) {
    const auto v = u.below(7);
    CHECK(v < 7);
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
  }
  std::vector<int> perm(50);
  std::iota(perm.begin(), perm.end(), 0);
  u.shuffle(std::span<int>(perm));
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < 50; ++k) CHECK(sorted[k] == k);
}

TEST_CASE("dataset validation") {
  auto sample = [](std::int64_t id, Vector f, Vector y) {
    LabeledSample s;
    s.id = id;
    s.features = std::move(f);
    s.label.values = std::move(y);
    return s;
  };
  CHECK_THROWS_AS(Dataset("x", {}), ValidationError);
  CHECK_THROWS_AS(Dataset("x", {sample(0, {1, 2}, {0}), sample(1, {1}, {0})}), ValidationError);
  CHECK_THROWS_AS(Dataset("x", {sample(0, {1}, {0}), sample(0, {1}, {0})}), ValidationError);
  CHECK_THROWS_AS(Dataset("x", {sample(0, {INFINITY}, {0})}), ValidationError);
  const Dataset d("x", {sample(0, {1}, {0}), sample(1, {2}, {1}), sample(2, {3}, {2})});
  const std::size_t pos[] = {2, 0};
  const Dataset s = d.subset(pos, "s");
  CHECK(s.size() == 2);
  CHECK(s[0].id == 0);
  CHECK(s[0].features[0] == 3.0);
  CHECK(d.subset(pos, "s", false)[0].id == 2);
}

TEST_CASE("dataset jsonl round trip including set labels") {
  LabeledSample a, b;
  a.id = 0;
  a.features = {0.1, 1.0 / 3.0};
  a.label.values = {1e-17, 2};
  b.id = 1;
  b.features = {-5, 7};
  b.label.values = {3, 4};
  const Dataset d("d", {a, b});
  std::stringstream buf;
  write_dataset(buf, d);
  CHECK(read_dataset(buf, "d") == d);

  LabeledSample c;
  c.id = 0;
  c.features = {1};
  c.label.items = {{1, 2}, {3, 4}};
  const Dataset sets("s", {c});
  std::stringstream sbuf;
  write_dataset(sbuf, sets);
  const Dataset back = read_dataset(sbuf, "s");
  CHECK(back.has_set_labels());
  CHECK(back == sets);

  std::stringstream bad("{\"id\":0,\"features\":[1]}\n");
  CHECK_THROWS_AS(read_dataset(bad, "bad"), ValidationError);
  std::stringstream garbage("not json\n");
  CHECK_THROWS_AS(read_dataset(garbage, "bad"), ValidationError);
}
