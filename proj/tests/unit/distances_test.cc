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

#include "doctest.h"
#include "logratio/core.h"
#include "logratio/distances.h"
#include "logratio/rng.h"
#include "oracles.h"

using namespace logratio;

namespace {

Label vec_label(Vector v) {
  Label l;
  l.values = std::move(v);
  return l;
}

Label set_label(std::vector<Vector> items) {
  Label l;
  l.items = std::move(items);
  return l;
}

SegMask two_by_two(std::vector<int> labels) { return SegMask{2, 2, std::move(labels)}; }

}  // namespace

TEST_CASE("joint-sum distance") {
  CHECK(joint_sum_distance(Vector{0, 0, 0, 0}, Vector{3, 4, 0, 1}, 2) == doctest::Approx(6.0));
  CHECK(joint_sum_distance(Vector{1, 2, 3, 4}, Vector{1, 2, 3, 4}, 2) == 0.0);
  CHECK_THROWS_AS(joint_sum_distance(Vector{0, 0, 0}, Vector{0, 0, 0}, 2), ValidationError);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Vector a = oracle::random_vector(10, rng), b = oracle::random_vector(10, rng);
    CHECK(joint_sum_distance(a, b, 5) == joint_sum_distance(b, a, 5));
    double expect = 0;
    for (int j = 0; j < 5; ++j) expect += std::hypot(a[2 * j] - b[2 * j], a[2 * j + 1] - b[2 * j + 1]);
    CHECK(joint_sum_distance(a, b, 5) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("mIoU and layout distance") {
  const SegMask a = two_by_two({1, 1, 2, 2});
  const SegMask b = two_by_two({2, 1, 2, 1});
  CHECK(miou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(layout_distance(a, b) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(miou(a, a) == 1.0);
  CHECK(layout_distance(a, a) == 0.0);
  // Region 3 occupies disjoint cells: its IoU is zero.
  const SegMask c = two_by_two({3, 0, 0, 0});
  const SegMask d = two_by_two({0, 3, 0, 0});
  const int ids[] = {0, 3};
  CHECK(miou(c, d, ids) == doctest::Approx((2.0 / 4.0 + 0.0) / 2.0));
  // A declared id absent from both masks is skipped.
  const int with_absent[] = {1, 2, 9};
  CHECK(miou(a, b, with_absent) == doctest::Approx(1.0 / 3.0));
  const int missing[] = {1};
  CHECK_THROWS_AS(miou(a, b, missing), ValidationError);
  CHECK_THROWS_AS(miou(a, SegMask{1, 4, {1, 1, 2, 2}}), ValidationError);

  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    SegMask x{4, 3, std::vector<int>(12)}, y{4, 3, std::vector<int>(12)};
    for (int& v : x.labels) v = static_cast<int>(rng.below(3));
    for (int& v : y.labels) v = static_cast<int>(rng.below(3));
    const double ld = layout_distance(x, y);
    CHECK(ld >= 0.0);
    CHECK(ld <= 1.0);
    CHECK(ld == layout_distance(y, x));
  }
}

TEST_CASE("set min-sum distance") {
  const std::vector<Vector> xs = {{0.0}, {1.0}};
  const std::vector<Vector> ys = {{10.0}};
  const PairwiseFn table = [](ConstVec x, ConstVec) { return x[0] == 0.0 ? 1.0 : 2.0; };
  CHECK(set_min_sum_distance(xs, ys, table) == doctest::Approx(4.0));
  const PairwiseFn se = [](ConstVec x, ConstVec y) { return squared_euclidean(x, y); };
  CHECK(set_min_sum_distance(xs, xs, se) == 0.0);
  const std::vector<Vector> one = {{1.0, 1.0}}, other = {{2.0, 3.0}};
  CHECK(set_min_sum_distance(one, other, se) == doctest::Approx(2 * 5.0));
  CHECK_THROWS_AS(set_min_sum_distance({}, ys, se), ValidationError);
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<Vector> a(1 + rng.below(4)), b(1 + rng.below(4));
    for (auto& v : a) v = oracle::random_vector(3, rng);
    for (auto& v : b) v = oracle::random_vector(3, rng);
    CHECK(set_min_sum_distance(a, b, se) == doctest::Approx(set_min_sum_distance(b, a, se)));
  }
}

TEST_CASE("label metrics are zero on the diagonal, non-negative and symmetric") {
  Rng rng(13);
  const LabelMetric se = LabelMetric::squared_euclidean();
  const LabelMetric js = LabelMetric::joint_sum(3);
  const LabelMetric sets = LabelMetric::set_min_sum();
  const LabelMetric masks = LabelMetric::mask_miou_complement(3, 2);
  for (int t = 0; t < 30; ++t) {
    const Label a = vec_label(oracle::random_vector(6, rng));
    const Label b = vec_label(oracle::random_vector(6, rng));
    for (const LabelMetric* m : {&se, &js}) {
      CHECK((*m)(a, a) == 0.0);
      CHECK((*m)(a, b) >= 0.0);
      CHECK((*m)(a, b) == (*m)(b, a));
    }
    const Label sa = set_label({oracle::random_vector(2, rng), oracle::random_vector(2, rng)});
    const Label sb = set_label({oracle::random_vector(2, rng)});
    CHECK(sets(sa, sa) == 0.0);
    CHECK(sets(sa, sb) == doctest::Approx(sets(sb, sa)));
    Vector ma(6), mb(6);
    for (double& v : ma) v = static_cast<double>(rng.below(2));
    for (double& v : mb) v = static_cast<double>(rng.below(2));
    CHECK(masks(vec_label(ma), vec_label(ma)) == 0.0);
    CHECK(masks(vec_label(ma), vec_label(mb)) == masks(vec_label(mb), vec_label(ma)));
  }
  CHECK_THROWS_AS(masks.validate(vec_label({0, 1, 0.5, 0, 0, 0})), ValidationError);
  CHECK_THROWS_AS(js.validate(vec_label({1, 2, 3})), ValidationError);
  CHECK(parse_metric_kind(metric_kind_name(MetricKind::kJointSum)) == MetricKind::kJointSum);
  CHECK_THROWS_AS(parse_metric_kind("cosine"), ValidationError);
}

TEST_CASE("pairwise label matrix agrees with per-pair calls") {
  Rng rng(17);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 10; ++i) {
    LabeledSample s;
    s.id = i;
    s.features = {0.0};
    s.label.values = oracle::random_vector(3, rng);
    samples.push_back(s);
  }
  const Dataset d("d", samples);
  const LabelMetric m = LabelMetric::squared_euclidean();
  const Matrix L = pairwise_label_matrix(d, m);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) {
      CHECK(L(i, j) == L(j, i));
      CHECK(L(i, j) == doctest::Approx(oracle::sqdist(d[i].label.values, d[j].label.values)));
    }
  }
  const Dataset one("one", {samples[0]});
  const Matrix L1 = pairwise_label_matrix(one, m);
  CHECK(L1.rows() == 1);
  CHECK(L1(0, 0) == 0.0);
}
