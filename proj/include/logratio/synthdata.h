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

#ifndef LOGRATIO_SYNTHDATA_H_
#define LOGRATIO_SYNTHDATA_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "logratio/core.h"
#include "logratio/distances.h"

namespace logratio {

enum class GeneratorKind { kRamp, kManifold, kImbalance, kToyPose, kToyLayout };

std::string_view generator_kind_name(GeneratorKind kind);
GeneratorKind parse_generator_kind(std::string_view name);

// Parameters for one synthetic dataset. Unused fields are ignored by kinds
// that do not need them.
//
//   ramp        latent z ~ U[-1,1]^r, r = min(d_in, d_lab); features are z
//               under a random isometry into R^d_in, labels are z under a
//               second isometry into R^d_lab plus N(0, noise^2). With zero
//               noise label distance is exactly a scaled feature distance.
//   manifold    t ~ U[0,1]^d_lab; each feature is a random sinusoid of t
//               (a smooth curve for d_lab = 1) plus noise; label = t.
//   imbalance   labels are positions in R^d_lab: cluster_fraction of them
//               from N(0, cluster_spread^2 I), the rest U[-1,1]^d_lab;
//               features are a random linear image of the position + noise.
//   toy_pose    d_lab / 2 joints jittered around a fixed random skeleton
//               under a random rotation/translation; features are a random
//               linear image of the joints + noise.
//   toy_layout  mask_size x mask_size masks split into regions {0, 1} by one
//               wall whose top/bottom columns are random; features are a
//               random linear image of the wall parameters + noise;
//               label = row-major mask. Pair with mask_miou_complement.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kManifold;
  std::size_t n = 2000;
  std::size_t d_in = 10;
  std::size_t d_lab = 1;
  double noise = 0.05;
  std::uint64_t seed = 1;
  double cluster_fraction = 0.9;
  double cluster_spread = 0.05;
  int mask_size = 16;

  void validate() const;
  std::string to_json() const;
  // The label metric a dataset of this kind is meant to be scored with.
  LabelMetric natural_metric() const;
};

Dataset generate(const GeneratorSpec& spec);

// For the imbalance kind: whether sample i belongs to the dense cluster.
// Cluster members come first: positions [0, round(n * cluster_fraction)).
std::size_t imbalance_cluster_size(const GeneratorSpec& spec);

struct Split {
  Dataset train;
  Dataset gallery;
  Dataset queries;
};

// Seeded disjoint split: round(n * train_fraction) training samples, the
// rest held out; the first query_count held-out samples become queries and
// the remainder the gallery. Every part must be non-empty. Ids are
// re-assigned densely within each part.
Split split(const Dataset& dataset, double train_fraction, std::size_t query_count,
            std::uint64_t seed);

}  // namespace logratio

#endif  // LOGRATIO_SYNTHDATA_H_
