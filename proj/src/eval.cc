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

#include "logratio/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace logratio {
namespace {

std::vector<std::size_t> top_k(ConstVec keys, const Dataset& gallery, std::size_t K,
                               const std::vector<bool>* excluded = nullptr) {
  std::vector<std::size_t> order;
  order.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!excluded || !(*excluded)[i]) order.push_back(i);
  }
  if (K > order.size()) {
    throw ValidationError("retrieval depth K = " + std::to_string(K) + " exceeds gallery size " +
                          std::to_string(order.size()));
  }
  auto before = [&](std::size_t x, std::size_t y) {
    if (keys[x] != keys[y]) return keys[x] < keys[y];
    return gallery[x].id < gallery[y].id;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(K), order.end(),
                    before);
  order.resize(K);
  return order;
}

Vector label_distances_to(const Label& query, const Dataset& gallery, const LabelMetric& metric) {
  Vector out(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) out[g] = metric(query, gallery[g].label);
  return out;
}

Vector gather(ConstVec values, std::span<const std::size_t> positions) {
  Vector out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(values[p]);
  return out;
}

void check_ks(std::span<const std::size_t> ks, std::size_t gallery_size) {
  if (ks.empty()) throw ValidationError("evaluate: empty K list");
  for (std::size_t K : ks) {
    if (K == 0) throw ValidationError("evaluate: K must be positive");
    if (K > gallery_size) {
      throw ValidationError("evaluate: K = " + std::to_string(K) + " exceeds gallery size " +
                            std::to_string(gallery_size));
    }
  }
}

}  // namespace

std::vector<std::size_t> rank_by_embedding(ConstVec query, const Matrix& gallery_embeddings,
                                           const Dataset& gallery, std::size_t K) {
  if (gallery_embeddings.rows() != gallery.size()) {
    throw ValidationError("rank_by_embedding: embedding table does not match gallery");
  }
  Vector dist(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    dist[g] = squared_euclidean(query, gallery_embeddings.row(g));
  }
  return top_k(dist, gallery, K);
}

std::vector<std::size_t> retrieve(const EmbeddingModel& model, const LabeledSample& query,
                                  const Dataset& gallery, std::size_t K) {
  const Vector q = model.forward(query.features);
  std::vector<bool> excluded(gallery.size(), false);
  Vector dist(gallery.size());
  for (std::size_t g = 0; g < gallery.size(); ++g) {
    excluded[g] = gallery[g] == query;
    dist[g] = squared_euclidean(q, model.forward(gallery[g].features));
  }
  return top_k(dist, gallery, K, &excluded);
}

std::vector<std::size_t> rank_by_label(ConstVec label_distances, const Dataset& gallery,
                                       std::size_t K) {
  return top_k(label_distances, gallery, K);
}

double relevance(double label_distance) {
  if (!(label_distance >= 0.0)) {
    throw ValidationError("relevance: label distance must be non-negative");
  }
  return -std::log2(label_distance + 1.0);
}

double dcg_at_k(ConstVec ranked_label_distances, std::size_t K) {
  if (K == 0 || ranked_label_distances.size() < K) {
    throw ValidationError("dcg_at_k: need at least K = " + std::to_string(K) +
                          " ranked items, have " + std::to_string(ranked_label_distances.size()));
  }
  double dcg = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    dcg += std::exp2(relevance(ranked_label_distances[i])) / std::log2(static_cast<double>(i + 2));
  }
  return dcg;
}

double ideal_dcg_at_k(ConstVec all_label_distances, std::size_t K) {
  if (all_label_distances.empty()) throw ValidationError("ideal_dcg_at_k: empty gallery");
  Vector sorted(all_label_distances.begin(), all_label_distances.end());
  std::sort(sorted.begin(), sorted.end());
  return dcg_at_k(sorted, K);
}

double ndcg_at_k(ConstVec ranked_label_distances, std::size_t K, double ideal_dcg) {
  if (!(ideal_dcg > 0.0)) throw ValidationError("ndcg_at_k: Z_K must be positive");
  return dcg_at_k(ranked_label_distances, K) / ideal_dcg;
}

double ndcg_at_k(const Label& query, std::span<const std::size_t> ranked, const Dataset& gallery,
                 const LabelMetric& metric, std::size_t K) {
  if (gallery.empty()) throw ValidationError("ndcg_at_k: empty gallery");
  const Vector all = label_distances_to(query, gallery, metric);
  return ndcg_at_k(gather(all, ranked), K, ideal_dcg_at_k(all, K));
}

double mean_label_distance_at_k(ConstVec ranked_label_distances, std::size_t K) {
  if (K == 0) throw ValidationError("mean_label_distance_at_k: K must be positive");
  if (ranked_label_distances.size() < K) {
    throw ValidationError("mean_label_distance_at_k: fewer than K ranked items");
  }
  return pairwise_sum(ranked_label_distances.first(K)) / static_cast<double>(K);
}

EvaluationReport evaluate(const EmbeddingModel& model, const Dataset& queries,
                          const Dataset& gallery, const LabelMetric& metric,
                          std::span<const std::size_t> ks, const EmbeddingModel* baseline,
                          std::string model_name) {
  if (queries.empty()) throw ValidationError("evaluate: empty query set");
  if (gallery.empty()) throw ValidationError("evaluate: empty gallery");
  check_ks(ks, gallery.size());
  const std::size_t max_k = *std::max_element(ks.begin(), ks.end());
  const std::size_t nk = ks.size();

  EvaluationReport report;
  report.ks.assign(ks.begin(), ks.end());
  report.per_query.resize(queries.size());

  const Matrix gallery_model = embed_all(model, gallery);
  const Matrix query_model = embed_all(model, queries);
  Matrix gallery_base, query_base;
  if (baseline) {
    gallery_base = embed_all(*baseline, gallery);
    query_base = embed_all(*baseline, queries);
  }

  // [method][k] -> per-query values
  enum { kModel, kOracle, kBaseline, kMethods };
  std::vector<std::vector<Vector>> ndcg(kMethods, std::vector<Vector>(nk));
  std::vector<std::vector<Vector>> mld(kMethods, std::vector<Vector>(nk));

  for (std::size_t q = 0; q < queries.size(); ++q) {
    const Vector dist = label_distances_to(queries[q].label, gallery, metric);
    Vector sorted = dist;
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::size_t> ranked[kMethods];
    ranked[kModel] = rank_by_embedding(query_model.row(q), gallery_model, gallery, max_k);
    ranked[kOracle] = rank_by_label(dist, gallery, max_k);
    if (baseline) {
      ranked[kBaseline] = rank_by_embedding(query_base.row(q), gallery_base, gallery, max_k);
    }
    for (int m = 0; m < kMethods; ++m) {
      if (m == kBaseline && !baseline) continue;
      const Vector ranked_dist = gather(dist, ranked[m]);
      for (std::size_t ki = 0; ki < nk; ++ki) {
        const std::size_t K = ks[ki];
        const double z = dcg_at_k(sorted, K);
        const double n = ndcg_at_k(ranked_dist, K, z);
        const double d = mean_label_distance_at_k(ranked_dist, K);
        ndcg[m][ki].push_back(n);
        mld[m][ki].push_back(d);
        if (m == kModel) {
          RetrievalResult r;
          r.query = q;
          r.K = K;
          for (std::size_t i = 0; i < K; ++i) {
            r.ranked_ids.push_back(gallery[ranked[m][i]].id);
            r.label_distances.push_back(ranked_dist[i]);
            r.relevances.push_back(relevance(ranked_dist[i]));
          }
          r.ndcg = n;
          r.mean_label_distance = d;
          report.per_query[q].push_back(std::move(r));
        }
      }
    }
  }

  auto summarize = [&](int m, std::string name) {
    MethodScores s;
    s.name = std::move(name);
    for (std::size_t ki = 0; ki < nk; ++ki) {
      const double count = static_cast<double>(queries.size());
      s.mean_ndcg.push_back(pairwise_sum(ndcg[m][ki]) / count);
      s.mean_label_distance.push_back(pairwise_sum(mld[m][ki]) / count);
    }
    return s;
  };
  report.model = summarize(kModel, std::move(model_name));
  report.oracle = summarize(kOracle, "oracle");
  if (baseline) report.baseline = summarize(kBaseline, "untrained");
  return report;
}

double mean_ndcg(const EmbeddingModel& model, const Dataset& queries, const Dataset& gallery,
                 const LabelMetric& metric, std::size_t K) {
  const std::size_t ks[] = {K};
  return evaluate(model, queries, gallery, metric, ks).model.mean_ndcg.front();
}

}  // namespace logratio
