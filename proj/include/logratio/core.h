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

#ifndef LOGRATIO_CORE_H_
#define LOGRATIO_CORE_H_

#include <cstddef>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace logratio {

using Vector = std::vector<double>;
using ConstVec = std::span<const double>;
using MutVec = std::span<double>;

// Raised on bad inputs or violated preconditions. The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when training produces non-finite values. The CLI maps it to exit code 2.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  MutVec row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  ConstVec row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Sum_k (u_k - v_k)^2. Throws ValidationError on dimension mismatch.
double squared_euclidean(ConstVec u, ConstVec v);

// Returns v / ||v||_2. Throws ValidationError for a zero (or non-finite) vector.
Vector l2_normalize(ConstVec v);

double l2_norm(ConstVec v);

bool all_finite(ConstVec v);

// Sums values with a fixed pairwise tree so the result does not depend on
// how the caller produced them.
double pairwise_sum(ConstVec values);

// Index triple (anchor, i, j) into some sample table. Dense-mined triplets
// satisfy D(y_a, y_i) < D(y_a, y_j); binary-mined ones use (a, positive,
// negative) in the i/j slots.
struct Triplet {
  std::size_t a = 0;
  std::size_t i = 0;
  std::size_t j = 0;

  bool operator==(const Triplet&) const = default;
  auto operator<=>(const Triplet&) const = default;
};

// Continuous label. Plain vector labels live in `values`; set-valued labels
// (collections of equal-length item vectors) live in `items` and leave
// `values` empty.
struct Label {
  Vector values;
  std::vector<Vector> items;

  bool is_set() const { return !items.empty(); }
  bool operator==(const Label&) const = default;
};

struct LabeledSample {
  std::int64_t id = 0;
  Vector features;
  Label label;

  bool operator==(const LabeledSample&) const = default;
};

// Immutable, index-addressable collection of samples sharing dimensions.
// Sample ids are dense 0-based positions unless loaded from a file with
// other ids; `index_of` maps back.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::string name, std::vector<LabeledSample> samples);

  const std::string& name() const { return name_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  std::size_t feature_dim() const { return feature_dim_; }
  // Label vector length, or item length for set-valued labels.
  std::size_t label_dim() const { return label_dim_; }
  bool has_set_labels() const { return set_labels_; }

  const LabeledSample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<LabeledSample>& samples() const { return samples_; }

  // Subset by positions, re-assigning dense ids when `reindex` is set.
  Dataset subset(std::span<const std::size_t> positions, std::string name,
                 bool reindex = true) const;

  bool operator==(const Dataset& other) const {
    return name_ == other.name_ && samples_ == other.samples_;
  }

 private:
  std::string name_;
  std::vector<LabeledSample> samples_;
  std::size_t feature_dim_ = 0;
  std::size_t label_dim_ = 0;
  bool set_labels_ = false;
};

}  // namespace logratio

#endif  // LOGRATIO_CORE_H_
