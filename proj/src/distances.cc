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

#include "logratio/distances.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "json.hpp"

namespace logratio {

void validate_mask(const SegMask& mask) {
  if (mask.width <= 0 || mask.height <= 0) {
    throw ValidationError("mask: width and height must be positive");
  }
  if (mask.labels.size() != static_cast<std::size_t>(mask.width) * mask.height) {
    throw ValidationError("mask: expected " + std::to_string(mask.width * mask.height) +
                          " cells, got " + std::to_string(mask.labels.size()));
  }
}

SegMask parse_mask_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("mask: invalid JSON (") + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("width") || !j.contains("height") ||
      !j.contains("labels")) {
    throw ValidationError("mask: expected object with width, height, labels");
  }
  SegMask mask;
  mask.width = j["width"].get<int>();
  mask.height = j["height"].get<int>();
  mask.labels = j["labels"].get<std::vector<int>>();
  validate_mask(mask);
  return mask;
}

double joint_sum_distance(ConstVec pose_a, ConstVec pose_b, std::size_t joint_count) {
  if (joint_count == 0 || pose_a.size() != 2 * joint_count ||
      pose_b.size() != 2 * joint_count) {
    throw ValidationError("joint_sum_distance: labels of length " +
                          std::to_string(pose_a.size()) + " and " +
                          std::to_string(pose_b.size()) + " do not hold " +
                          std::to_string(joint_count) + " (x, y) joints");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < joint_count; ++j) {
    total += std::hypot(pose_a[2 * j] - pose_b[2 * j], pose_a[2 * j + 1] - pose_b[2 * j + 1]);
  }
  return total;
}

double miou(const SegMask& a, const SegMask& b, std::span<const int> region_ids) {
  validate_mask(a);
  validate_mask(b);
  if (a.width != b.width || a.height != b.height) {
    throw ValidationError("miou: mask dimensions differ (" + std::to_string(a.width) + "x" +
                          std::to_string(a.height) + " vs " + std::to_string(b.width) +
                          "x" + std::to_string(b.height) + ")");
  }
  // region id -> (intersection, union)
  std::map<int, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t c = 0; c < a.labels.size(); ++c) {
    const int la = a.labels[c];
    const int lb = b.labels[c];
    if (la == lb) {
      auto& [inter, uni] = counts[la];
      ++inter;
      ++uni;
    } else {
      ++counts[la].second;
      ++counts[lb].second;
    }
  }
  std::set<int> ids;
  if (region_ids.empty()) {
    for (const auto& [id, _] : counts) ids.insert(id);
  } else {
    ids.insert(region_ids.begin(), region_ids.end());
    for (const auto& [id, _] : counts) {
      if (!ids.contains(id)) {
        throw ValidationError("miou: region id " + std::to_string(id) +
                              " is not in the declared set");
      }
    }
  }
  double sum = 0.0;
  std::size_t present = 0;
  for (int id : ids) {
    auto it = counts.find(id);
    if (it == counts.end() || it->second.second == 0) continue;
    sum += static_cast<double>(it->second.first) / static_cast<double>(it->second.second);
    ++present;
  }
  return present == 0 ? 1.0 : sum / static_cast<double>(present);
}

double layout_distance(const SegMask& a, const SegMask& b, std::span<const int> region_ids) {
  return 1.0 - miou(a, b, region_ids);
}

double set_min_sum_distance(std::span<const Vector> xs, std::span<const Vector> ys,
                            const PairwiseFn& pairwise) {
  if (xs.empty() || ys.empty()) {
    throw ValidationError("set_min_sum_distance: both sets must be non-empty");
  }
  // w(x, y) for every pair, evaluated once.
  Matrix w(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) w(i, j) = pairwise(xs[i], ys[j]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ys.size(); ++j) best = std::min(best, w(i, j));
    total += best;
  }
  for (std::size_t j = 0; j < ys.size(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) best = std::min(best, w(i, j));
    total += best;
  }
  return total;
}

std::string_view metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::kSquaredEuclidean: return "squared_euclidean";
    case MetricKind::kJointSum: return "joint_sum";
    case MetricKind::kMaskMiouComplement: return "mask_miou_complement";
    case MetricKind::kSetMinSum: return "set_min_sum";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  for (MetricKind k : {MetricKind::kSquaredEuclidean, MetricKind::kJointSum,
                       MetricKind::kMaskMiouComplement, MetricKind::kSetMinSum}) {
    if (metric_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown label metric '" + std::string(name) + "'");
}

LabelMetric LabelMetric::squared_euclidean() {
  return LabelMetric(MetricKind::kSquaredEuclidean);
}

LabelMetric LabelMetric::joint_sum(std::size_t joint_count) {
  if (joint_count == 0) throw ValidationError("joint_sum metric: joint count must be positive");
  LabelMetric m(MetricKind::kJointSum);
  m.joint_count_ = joint_count;
  return m;
}

LabelMetric LabelMetric::mask_miou_complement(int width, int height,
                                              std::vector<int> region_ids) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("mask metric: width and height must be positive");
  }
  LabelMetric m(MetricKind::kMaskMiouComplement);
  m.mask_width_ = width;
  m.mask_height_ = height;
  std::sort(region_ids.begin(), region_ids.end());
  region_ids.erase(std::unique(region_ids.begin(), region_ids.end()), region_ids.end());
  m.region_ids_ = std::move(region_ids);
  return m;
}

LabelMetric LabelMetric::set_min_sum(PairwiseFn pairwise) {
  LabelMetric m(MetricKind::kSetMinSum);
  if (pairwise) {
    m.pairwise_ = std::move(pairwise);
  } else {
    m.pairwise_ = [](ConstVec x, ConstVec y) { return logratio::squared_euclidean(x, y); };
  }
  return m;
}

SegMask LabelMetric::to_mask(const Label& label) const {
  SegMask mask;
  mask.width = mask_width_;
  mask.height = mask_height_;
  mask.labels.reserve(label.values.size());
  for (double v : label.values) {
    if (v != std::floor(v)) throw ValidationError("mask label: region ids must be integers");
    mask.labels.push_back(static_cast<int>(v));
  }
  validate_mask(mask);
  return mask;
}

void LabelMetric::validate(const Label& label) const {
  switch (kind_) {
    case MetricKind::kSquaredEuclidean:
      if (label.is_set()) throw ValidationError("squared_euclidean metric: got a set label");
      return;
    case MetricKind::kJointSum:
      if (label.values.size() != 2 * joint_count_) {
        throw ValidationError("joint_sum metric: label length " +
                              std::to_string(label.values.size()) + ", expected " +
                              std::to_string(2 * joint_count_));
      }
      return;
    case MetricKind::kMaskMiouComplement: {
      const SegMask mask = to_mask(label);
      if (!region_ids_.empty()) {
        for (int id : mask.labels) {
          if (!std::binary_search(region_ids_.begin(), region_ids_.end(), id)) {
            throw ValidationError("mask label: undeclared region id " + std::to_string(id));
          }
        }
      }
      return;
    }
    case MetricKind::kSetMinSum:
      if (!label.is_set()) throw ValidationError("set_min_sum metric: label has no items");
      return;
  }
}

double LabelMetric::operator()(const Label& a, const Label& b) const {
  switch (kind_) {
    case MetricKind::kSquaredEuclidean:
      return logratio::squared_euclidean(a.values, b.values);
    case MetricKind::kJointSum:
      return joint_sum_distance(a.values, b.values, joint_count_);
    case MetricKind::kMaskMiouComplement:
      return layout_distance(to_mask(a), to_mask(b), region_ids_);
    case MetricKind::kSetMinSum:
      validate(a);
      validate(b);
      return set_min_sum_distance(a.items, b.items, pairwise_);
  }
  return 0.0;
}

Matrix pairwise_label_matrix(const Dataset& dataset, const LabelMetric& metric) {
  const std::size_t n = dataset.size();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d;
      try {
        d = metric(dataset[i].label, dataset[j].label);
      } catch (const std::exception& e) {
        throw ValidationError("label metric failed on samples " + std::to_string(i) + " and " +
                              std::to_string(j) + ": " + e.what());
      }
      if (!std::isfinite(d) || d < 0.0) {
        throw ValidationError("label metric returned invalid value on samples " +
                              std::to_string(i) + " and " + std::to_string(j));
      }
      out(i, j) = d;
      out(j, i) = d;
    }
  }
  return out;
}

}  // namespace logratio
