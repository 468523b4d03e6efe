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
#include <set>

#include "doctest.h"
#include "logratio/mining.h"
#include "logratio/synthdata.h"
#include "oracles.h"

using namespace logratio;

namespace {

std::vector<double> ranks(std::vector<double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
  return r;
}

}  // namespace

TEST_CASE("every generator is deterministic and valid") {
  for (GeneratorKind kind : {GeneratorKind::kRamp, GeneratorKind::kManifold, GeneratorKind::kImbalance,
                             GeneratorKind::kToyPose, GeneratorKind::kToyLayout}) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.n = 50;
    if (kind == GeneratorKind::kToyPose) spec.d_lab = 8;
    CAPTURE(generator_kind_name(kind));
    const Dataset a = generate(spec), b = generate(spec);
    CHECK(a == b);
    CHECK(a.size() == 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == static_cast<std::int64_t>(i));
      spec.natural_metric().validate(a[i].label);
    }
    spec.seed = 2;
    CHECK_FALSE(generate(spec) == a);
    CHECK(parse_generator_kind(generator_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_generator_kind("spiral"), ValidationError);
  GeneratorSpec bad;
  bad.kind = GeneratorKind::kToyPose;
  bad.d_lab = 3;
  CHECK_THROWS_AS(generate(bad), ValidationError);
}

TEST_CASE("noiseless ramp: label and feature distances agree in rank") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kRamp;
  spec.n = 30;
  spec.d_lab = 2;
  spec.noise = 0.0;
  const Dataset d = generate(spec);
  std::vector<double> fd, ld;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      fd.push_back(oracle::sqdist(d[i].features, d[j].features));
      ld.push_back(oracle::sqdist(d[i].label.values, d[j].label.values));
    }
  }
  const auto rf = ranks(fd), rl = ranks(ld);
  double dd = 0;
  for (std::size_t k = 0; k < rf.size(); ++k) dd += (rf[k] - rl[k]) * (rf[k] - rl[k]);
  const double m = static_cast<double>(rf.size());
  const double spearman = 1.0 - 6.0 * dd / (m * (m * m - 1.0));
  CHECK(spearman == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("imbalance neighborhoods") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kImbalance;
  spec.n = 2000;
  spec.d_lab = 2;
  const Dataset d = generate(spec);
  const std::size_t cluster = imbalance_cluster_size(spec);
  CHECK(cluster == 1800);
  const Matrix L = pairwise_label_matrix(d, spec.natural_metric());

  // Cluster sample nearest to the cluster center.
  std::size_t center = 0;
  double best = INFINITY;
  for (std::size_t i = 0; i < cluster; ++i) {
    const double r = oracle::sqdist(d[i].label.values, Vector(2, 0.0));
    if (r < best) best = r, center = i;
  }
  for (std::size_t p : nearest_neighbors(L, center, 30)) CHECK(p < cluster);

  std::vector<double> cluster_d;
  for (std::size_t i = 0; i < cluster; i += 7) {
    for (std::size_t j = i + 1; j < cluster; j += 13) cluster_d.push_back(L(i, j));
  }
  std::nth_element(cluster_d.begin(), cluster_d.begin() + cluster_d.size() / 2, cluster_d.end());
  const double median = cluster_d[cluster_d.size() / 2];
  std::size_t outliers_far = 0;
  for (std::size_t o = cluster; o < d.size(); ++o) {
    const auto nn = nearest_neighbors(L, o, 30);
    if (L(o, nn.back()) > 10.0 * median) ++outliers_far;
  }
  CHECK(outliers_far > (d.size() - cluster) / 2);
}

TEST_CASE("toy layout masks") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kToyLayout;
  spec.n = 20;
  const Dataset d = generate(spec);
  CHECK(d[0].label.values.size() == 256);
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::set<double> ids(d[i].label.values.begin(), d[i].label.values.end());
    CHECK(ids.size() <= 2);
    for (double v : ids) CHECK((v == 0.0 || v == 1.0));
  }
}

TEST_CASE("split") {
  GeneratorSpec spec;
  spec.n = 100;
  const Dataset d = generate(spec);
  const Split s = split(d, 0.7, 10, 5);
  CHECK(s.train.size() == 70);
  CHECK(s.queries.size() == 10);
  CHECK(s.gallery.size() == 20);
  const Split again = split(d, 0.7, 10, 5);
  CHECK(again.train == s.train);
  CHECK(again.gallery == s.gallery);
  std::set<double> seen;
  for (const Dataset* part : {&s.train, &s.queries, &s.gallery}) {
    for (const LabeledSample& x : part->samples()) seen.insert(x.features[0]);
  }
  CHECK(seen.size() == 100);
  CHECK_THROWS_AS(split(d, 1.0, 0, 5), ValidationError);
  CHECK_THROWS_AS(split(d, 0.9, 10, 5), ValidationError);
  CHECK_THROWS_AS(split(d, 0.0, 10, 5), ValidationError);
}
