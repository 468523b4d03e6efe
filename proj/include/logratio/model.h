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

#ifndef LOGRATIO_MODEL_H_
#define LOGRATIO_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "logratio/core.h"
#include "logratio/rng.h"

namespace logratio {

enum class Activation { kIdentity, kRelu };

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

struct LayerShape {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation activation = Activation::kIdentity;

  bool operator==(const LayerShape&) const = default;
};

class EmbeddingModel;

// Activations recorded by forward() for a later backward() on the same model.
struct ForwardCache {
  const EmbeddingModel* model = nullptr;
  std::uint64_t version = 0;
  // inputs[l] is the input to layer l; pre_activations[l] its affine output.
  std::vector<Vector> inputs;
  std::vector<Vector> pre_activations;
  // Last layer output before optional unit normalization.
  Vector raw_output;
  Vector output;
};

// Feed-forward embedding network: affine layers with rectifier or identity
// activations, optionally followed by L2 normalization of the output.
//
// All parameters live in one flat vector. Layer l owns a row-major
// out x in weight block followed by its out-length bias.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  // Zero-initialized parameters.
  EmbeddingModel(std::vector<LayerShape> layers, bool unit_norm_output);

  // dims = {d_in, hidden..., d_emb}. Hidden layers use the rectifier, the
  // output layer is linear. Weights are uniform in +-sqrt(6 / (fan_in +
  // fan_out)), biases zero.
  static EmbeddingModel initialize(std::span<const std::size_t> dims, bool unit_norm_output,
                                   Rng& rng);

  std::size_t input_dim() const { return layers_.front().in; }
  std::size_t output_dim() const { return layers_.back().out; }
  bool unit_norm_output() const { return unit_norm_; }
  const std::vector<LayerShape>& layers() const { return layers_; }

  std::size_t parameter_count() const { return params_.size(); }
  ConstVec parameters() const { return params_; }
  // Any mutable access invalidates outstanding forward caches.
  MutVec mutable_parameters() {
    ++version_;
    return params_;
  }
  std::uint64_t version() const { return version_; }

  ConstVec weights(std::size_t layer) const;
  ConstVec biases(std::size_t layer) const;
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + layers_[layer].in * layers_[layer].out;
  }

  Vector forward(ConstVec features, ForwardCache* cache = nullptr) const;

  // Adds d(probe)/d(parameters) into `param_grads`, given the gradient of a
  // scalar probe with respect to the output embedding. Throws if `cache` did
  // not come from forward() on this model at its current parameters.
  void backward(const ForwardCache& cache, ConstVec grad_output, MutVec param_grads) const;

  bool operator==(const EmbeddingModel& other) const {
    return layers_ == other.layers_ && unit_norm_ == other.unit_norm_ &&
           params_ == other.params_;
  }

 private:
  std::vector<LayerShape> layers_;
  std::vector<std::size_t> offsets_;
  bool unit_norm_ = false;
  Vector params_;
  std::uint64_t version_ = 0;
};

// Embeds every sample of `dataset`, one row each.
Matrix embed_all(const EmbeddingModel& model, const Dataset& dataset);

}  // namespace logratio

#endif  // LOGRATIO_MODEL_H_
