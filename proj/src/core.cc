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

#include "logratio/core.h"

#include <cmath>
#include <unordered_set>

namespace logratio {

double squared_euclidean(ConstVec u, ConstVec v) {
  if (u.size() != v.size()) {
    throw ValidationError("squared_euclidean: dimension mismatch (" +
                          std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double diff = u[k] - v[k];
    sum += diff * diff;
  }
  return sum;
}

double l2_norm(ConstVec v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

Vector l2_normalize(ConstVec v) {
  const double norm = l2_norm(v);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("l2_normalize: vector has zero or non-finite norm");
  }
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

bool all_finite(ConstVec v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double pairwise_sum(ConstVec values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (double x : values) sum += x;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Dataset::Dataset(std::string name, std::vector<LabeledSample> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw ValidationError("dataset '" + name_ + "' is empty");
  }
  const LabeledSample& first = samples_.front();
  feature_dim_ = first.features.size();
  set_labels_ = first.label.is_set();
  label_dim_ = set_labels_ ? first.label.items.front().size()
                           : first.label.values.size();
  if (feature_dim_ == 0) throw ValidationError("dataset: zero feature dimension");
  if (label_dim_ == 0) throw ValidationError("dataset: zero label dimension");

  std::unordered_set<std::int64_t> seen;
  for (const LabeledSample& s : samples_) {
    const std::string where = "dataset '" + name_ + "' sample id " + std::to_string(s.id);
    if (!seen.insert(s.id).second) throw ValidationError(where + ": duplicate id");
    if (s.features.size() != feature_dim_) {
      throw ValidationError(where + ": feature dimension " +
                            std::to_string(s.features.size()) + ", expected " +
                            std::to_string(feature_dim_));
    }
    if (!all_finite(s.features)) throw ValidationError(where + ": non-finite feature");
    if (s.label.is_set() != set_labels_) {
      throw ValidationError(where + ": mixes set and vector labels");
    }
    if (set_labels_) {
      if (!s.label.values.empty()) {
        throw ValidationError(where + ": set label carries vector values");
      }
      for (const Vector& item : s.label.items) {
        if (item.size() != label_dim_) {
          throw ValidationError(where + ": label item dimension " +
                                std::to_string(item.size()) + ", expected " +
                                std::to_string(label_dim_));
        }
        if (!all_finite(item)) throw ValidationError(where + ": non-finite label");
      }
    } else {
      if (s.label.values.size() != label_dim_) {
        throw ValidationError(where + ": label dimension " +
                              std::to_string(s.label.values.size()) + ", expected " +
                              std::to_string(label_dim_));
      }
      if (!all_finite(s.label.values)) throw ValidationError(where + ": non-finite label");
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> positions, std::string name,
                        bool reindex) const {
  std::vector<LabeledSample> picked;
  picked.reserve(positions.size());
  for (std::size_t p : positions) {
    if (p >= samples_.size()) {
      throw ValidationError("dataset subset: position " + std::to_string(p) +
                            " out of range");
    }
    picked.push_back(samples_[p]);
    if (reindex) picked.back().id = static_cast<std::int64_t>(picked.size() - 1);
  }
  return Dataset(std::move(name), std::move(picked));
}

}  // namespace logratio
