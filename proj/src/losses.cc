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

#include "logratio/losses.h"

#include <cmath>
#include <string>

namespace logratio {
namespace {

void check_dims(ConstVec f_a, ConstVec f_i, ConstVec f_j, const char* op) {
  if (f_a.size() != f_i.size() || f_a.size() != f_j.size()) {
    throw ValidationError(std::string(op) + ": embedding dimensions differ (" +
                          std::to_string(f_a.size()) + ", " + std::to_string(f_i.size()) +
                          ", " + std::to_string(f_j.size()) + ")");
  }
}

TripletLossOutput zero_output(std::size_t dim) {
  TripletLossOutput out;
  out.grad_a.assign(dim, 0.0);
  out.grad_i.assign(dim, 0.0);
  out.grad_j.assign(dim, 0.0);
  return out;
}

TripletLossOutput hinge_loss(ConstVec f_a, ConstVec f_p, ConstVec f_n, double margin,
                             const char* op) {
  check_dims(f_a, f_p, f_n, op);
  if (!(margin >= 0.0)) throw ValidationError(std::string(op) + ": margin must be >= 0");
  TripletLossOutput out = zero_output(f_a.size());
  const double value = squared_euclidean(f_a, f_p) - squared_euclidean(f_a, f_n) + margin;
  if (value <= 0.0) return out;
  out.value = value;
  out.active = true;
  for (std::size_t k = 0; k < f_a.size(); ++k) {
    out.grad_i[k] = 2.0 * (f_p[k] - f_a[k]);
    out.grad_j[k] = 2.0 * (f_a[k] - f_n[k]);
    out.grad_a[k] = -out.grad_i[k] - out.grad_j[k];
  }
  return out;
}

}  // namespace

TripletLossOutput triplet_loss(ConstVec f_a, ConstVec f_p, ConstVec f_n, double margin) {
  return hinge_loss(f_a, f_p, f_n, margin, "triplet_loss");
}

TripletLossOutput dense_triplet_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j, double margin) {
  return hinge_loss(f_a, f_i, f_j, margin, "dense_triplet_loss");
}

TripletLossOutput log_ratio_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j,
                                 double label_dist_ai, double label_dist_aj, double floor) {
  check_dims(f_a, f_i, f_j, "log_ratio_loss");
  if (!(floor > 0.0)) throw ValidationError("log_ratio_loss: distance floor must be > 0");
  const double emb_ai = squared_euclidean(f_a, f_i);
  const double emb_aj = squared_euclidean(f_a, f_j);
  auto require = [floor](double d, const char* pair) {
    if (!(d >= floor) || !std::isfinite(d)) {
      throw ValidationError(std::string("log_ratio_loss: degenerate distance ") + pair + " = " +
                            std::to_string(d) + " (below floor or non-finite)");
    }
  };
  require(emb_ai, "D(f_a, f_i)");
  require(emb_aj, "D(f_a, f_j)");
  require(label_dist_ai, "D(y_a, y_i)");
  require(label_dist_aj, "D(y_a, y_j)");

  const double discrepancy =
      std::log(emb_ai / emb_aj) - std::log(label_dist_ai / label_dist_aj);
  const double scale = 4.0 * discrepancy;

  TripletLossOutput out = zero_output(f_a.size());
  out.value = discrepancy * discrepancy;
  out.active = scale != 0.0;
  if (!out.active) return out;
  for (std::size_t k = 0; k < f_a.size(); ++k) {
    out.grad_i[k] = (f_i[k] - f_a[k]) / emb_ai * scale;
    out.grad_j[k] = (f_a[k] - f_j[k]) / emb_aj * scale;
    out.grad_a[k] = -out.grad_i[k] - out.grad_j[k];
  }
  return out;
}

TripletLossOutput log_ratio_loss(ConstVec f_a, ConstVec f_i, ConstVec f_j, const Label& y_a,
                                 const Label& y_i, const Label& y_j, const LabelMetric& metric,
                                 double floor) {
  return log_ratio_loss(f_a, f_i, f_j, metric(y_a, y_i), metric(y_a, y_j), floor);
}

std::string_view loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::kTriplet: return "triplet";
    case LossKind::kLogRatio: return "log_ratio";
    case LossKind::kDenseTriplet: return "dense_triplet";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  for (LossKind k : {LossKind::kTriplet, LossKind::kLogRatio, LossKind::kDenseTriplet}) {
    if (loss_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown loss '" + std::string(name) + "'");
}

double LossConfig::effective_margin() const {
  switch (kind) {
    case LossKind::kTriplet: return margin.value_or(kTripletMargin);
    case LossKind::kDenseTriplet: return margin.value_or(kDenseTripletMargin);
    case LossKind::kLogRatio: return 0.0;
  }
  return 0.0;
}

void LossConfig::validate() const {
  if (margin && !(*margin >= 0.0)) throw ValidationError("loss margin must be >= 0");
  if (!(distance_floor > 0.0)) throw ValidationError("distance floor must be > 0");
}

BatchLoss batch_loss(std::span<const Triplet> triplets, const Matrix& embeddings,
                     const Matrix& label_distances, const LossConfig& config) {
  if (triplets.empty()) throw ValidationError("batch_loss: no triplets to supervise");
  config.validate();
  const std::size_t rows = embeddings.rows();
  const bool needs_labels = config.kind == LossKind::kLogRatio;
  if (needs_labels && (label_distances.rows() < rows || label_distances.cols() < rows)) {
    throw ValidationError("batch_loss: label distance matrix smaller than embedding table");
  }
  const double margin = config.effective_margin();

  BatchLoss result;
  result.gradients = Matrix(rows, embeddings.cols());
  Vector values;
  values.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (t.a >= rows || t.i >= rows || t.j >= rows) {
      throw ValidationError("batch_loss: triplet index out of range");
    }
    TripletLossOutput out;
    switch (config.kind) {
      case LossKind::kTriplet:
        out = triplet_loss(embeddings.row(t.a), embeddings.row(t.i), embeddings.row(t.j), margin);
        break;
      case LossKind::kDenseTriplet:
        out = dense_triplet_loss(embeddings.row(t.a), embeddings.row(t.i), embeddings.row(t.j),
                                 margin);
        break;
      case LossKind::kLogRatio:
        out = log_ratio_loss(embeddings.row(t.a), embeddings.row(t.i), embeddings.row(t.j),
                             label_distances(t.a, t.i), label_distances(t.a, t.j),
                             config.distance_floor);
        break;
    }
    values.push_back(out.value);
    if (!out.active) continue;
    ++result.active_triplets;
    MutVec ga = result.gradients.row(t.a);
    MutVec gi = result.gradients.row(t.i);
    MutVec gj = result.gradients.row(t.j);
    for (std::size_t k = 0; k < ga.size(); ++k) {
      ga[k] += out.grad_a[k];
      gi[k] += out.grad_i[k];
      gj[k] += out.grad_j[k];
    }
  }
  const double count = static_cast<double>(triplets.size());
  result.mean_value = pairwise_sum(values) / count;
  for (double& g : result.gradients.data()) g /= count;
  return result;
}

}  // namespace logratio
