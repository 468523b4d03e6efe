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

#ifndef LOGRATIO_EVAL_H_
#define LOGRATIO_EVAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "logratio/core.h"
#include "logratio/distances.h"
#include "logratio/model.h"

namespace logratio {

// Default retrieval depths for reports.
inline const std::vector<std::size_t> kDefaultKs = {1, 2, 4, 8, 16, 32};

// Gallery positions of the K smallest embedding distances to `query`,
// ascending, ties broken by ascending sample id.
std::vector<std::size_t> rank_by_embedding(ConstVec query, const Matrix& gallery_embeddings,
                                           const Dataset& gallery, std::size_t K);

// Embeds the query and ranks the gallery. A gallery entry identical to the
// query sample is excluded. Throws when K exceeds the remaining gallery.
std::vector<std::size_t> retrieve(const EmbeddingModel& model, const LabeledSample& query,
                                  const Dataset& gallery, std::size_t K);

// Gallery positions ordered by true label distance (ties by id): the oracle.
std::vector<std::size_t> rank_by_label(ConstVec label_distances, const Dataset& gallery,
                                       std::size_t K);

// r = -log2(d + 1) for a label distance d >= 0.
double relevance(double label_distance);

// sum_{i=1..K} 2^{r_i} / log2(i + 1) over distances in rank order.
double dcg_at_k(ConstVec ranked_label_distances, std::size_t K);

// Normalizer Z_K: the DCG of the K gallery items nearest in label space.
double ideal_dcg_at_k(ConstVec all_label_distances, std::size_t K);

double ndcg_at_k(ConstVec ranked_label_distances, std::size_t K, double ideal_dcg);

// Convenience form computing every label distance with `metric` and Z_K over
// the whole gallery.
double ndcg_at_k(const Label& query, std::span<const std::size_t> ranked,
                 const Dataset& gallery, const LabelMetric& metric, std::size_t K);

double mean_label_distance_at_k(ConstVec ranked_label_distances, std::size_t K);

struct RetrievalResult {
  std::size_t query = 0;
  std::size_t K = 0;
  std::vector<std::int64_t> ranked_ids;
  Vector label_distances;
  Vector relevances;
  double ndcg = 0.0;
  double mean_label_distance = 0.0;
};

// Aggregate scores for one method, aligned with EvaluationReport::ks.
struct MethodScores {
  std::string name;
  Vector mean_ndcg;
  Vector mean_label_distance;
};

struct EvaluationReport {
  std::vector<std::size_t> ks;
  MethodScores model;
  MethodScores oracle;
  MethodScores baseline;  // empty name when no baseline model was given
  // per_query[q][k] for the evaluated model.
  std::vector<std::vector<RetrievalResult>> per_query;
};

// Scores `model` (and optionally `baseline`) on every query against the
// gallery at every K, plus the oracle ranking by true label distance.
EvaluationReport evaluate(const EmbeddingModel& model, const Dataset& queries,
                          const Dataset& gallery, const LabelMetric& metric,
                          std::span<const std::size_t> ks,
                          const EmbeddingModel* baseline = nullptr,
                          std::string model_name = "model");

// Mean nDCG at one K only, for validation during training.
double mean_ndcg(const EmbeddingModel& model, const Dataset& queries, const Dataset& gallery,
                 const LabelMetric& metric, std::size_t K);

}  // namespace logratio

#endif  // LOGRATIO_EVAL_H_
