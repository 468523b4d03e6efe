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

#include "logratio/model.h"

#include <cmath>
#include <string>

namespace logratio {

std::string_view activation_name(Activation a) {
  return a == Activation::kRelu ? "relu" : "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw ValidationError("unknown activation '" + std::string(name) + "'");
}

EmbeddingModel::EmbeddingModel(std::vector<LayerShape> layers, bool unit_norm_output)
    : layers_(std::move(layers)), unit_norm_(unit_norm_output) {
  if (layers_.empty()) throw ValidationError("model: needs at least one layer");
  std::size_t total = 0;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerShape& s = layers_[l];
    if (s.in == 0 || s.out == 0) throw ValidationError("model: layer dimensions must be positive");
    if (l > 0 && layers_[l - 1].out != s.in) {
      throw ValidationError("model: layer " + std::to_string(l) + " expects input " +
                            std::to_string(s.in) + " but previous layer emits " +
                            std::to_string(layers_[l - 1].out));
    }
    offsets_.push_back(total);
    total += s.in * s.out + s.out;
  }
  params_.assign(total, 0.0);
}

EmbeddingModel EmbeddingModel::initialize(std::span<const std::size_t> dims,
                                          bool unit_norm_output, Rng& rng) {
  if (dims.size() < 2) throw ValidationError("model: need at least input and output dims");
  std::vector<LayerShape> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const bool last = l + 2 == dims.size();
    layers.push_back({dims[l], dims[l + 1], last ? Activation::kIdentity : Activation::kRelu});
  }
  EmbeddingModel model(std::move(layers), unit_norm_output);
  MutVec params = model.mutable_parameters();
  for (std::size_t l = 0; l < model.layers_.size(); ++l) {
    const LayerShape& s = model.layers_[l];
    const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
    const std::size_t begin = model.weight_offset(l);
    for (std::size_t p = 0; p < s.in * s.out; ++p) params[begin + p] = rng.uniform(-limit, limit);
  }
  return model;
}

ConstVec EmbeddingModel::weights(std::size_t layer) const {
  return ConstVec(params_).subspan(weight_offset(layer), layers_[layer].in * layers_[layer].out);
}

ConstVec EmbeddingModel::biases(std::size_t layer) const {
  return ConstVec(params_).subspan(bias_offset(layer), layers_[layer].out);
}

Vector EmbeddingModel::forward(ConstVec features, ForwardCache* cache) const {
  if (features.size() != input_dim()) {
    throw ValidationError("forward: feature dimension " + std::to_string(features.size()) +
                          ", model expects " + std::to_string(input_dim()));
  }
  if (cache) {
    cache->model = this;
    cache->version = version_;
    cache->inputs.clear();
    cache->pre_activations.clear();
  }
  Vector x(features.begin(), features.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerShape& s = layers_[l];
    const ConstVec w = weights(l);
    const ConstVec b = biases(l);
    Vector z(s.out);
    for (std::size_t r = 0; r < s.out; ++r) {
      double acc = b[r];
      const double* row = w.data() + r * s.in;
      for (std::size_t c = 0; c < s.in; ++c) acc += row[c] * x[c];
      z[r] = acc;
    }
    if (cache) {
      cache->inputs.push_back(std::move(x));
      cache->pre_activations.push_back(z);
    }
    if (s.activation == Activation::kRelu) {
      for (double& v : z) v = v > 0.0 ? v : 0.0;
    }
    x = std::move(z);
  }
  Vector out = unit_norm_ ? l2_normalize(x) : x;
  if (cache) {
    cache->raw_output = std::move(x);
    cache->output = out;
  }
  return out;
}

void EmbeddingModel::backward(const ForwardCache& cache, ConstVec grad_output,
                              MutVec param_grads) const {
  if (cache.model != this || cache.version != version_ ||
      cache.inputs.size() != layers_.size()) {
    throw ValidationError("backward: forward cache is missing or stale");
  }
  if (grad_output.size() != output_dim()) {
    throw ValidationError("backward: gradient dimension " + std::to_string(grad_output.size()) +
                          ", model output is " + std::to_string(output_dim()));
  }
  if (param_grads.size() != params_.size()) {
    throw ValidationError("backward: parameter gradient buffer has wrong size");
  }
  Vector g(grad_output.begin(), grad_output.end());
  if (unit_norm_) {
    // d(v / |v|)/dv = (I - f f^T) / |v|
    const double norm = l2_norm(cache.raw_output);
    double along = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) along += cache.output[k] * g[k];
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = (g[k] - cache.output[k] * along) / norm;
  }
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const LayerShape& s = layers_[l];
    if (s.activation == Activation::kRelu) {
      const Vector& z = cache.pre_activations[l];
      for (std::size_t r = 0; r < s.out; ++r) {
        if (!(z[r] > 0.0)) g[r] = 0.0;
      }
    }
    const Vector& x = cache.inputs[l];
    double* gw = param_grads.data() + weight_offset(l);
    double* gb = param_grads.data() + bias_offset(l);
    for (std::size_t r = 0; r < s.out; ++r) {
      if (g[r] == 0.0) continue;
      gb[r] += g[r];
      double* row = gw + r * s.in;
      for (std::size_t c = 0; c < s.in; ++c) row[c] += g[r] * x[c];
    }
    if (l == 0) break;
    const ConstVec w = weights(l);
    Vector prev(s.in, 0.0);
    for (std::size_t r = 0; r < s.out; ++r) {
      if (g[r] == 0.0) continue;
      const double* row = w.data() + r * s.in;
      for (std::size_t c = 0; c < s.in; ++c) prev[c] += row[c] * g[r];
    }
    g = std::move(prev);
  }
}

Matrix embed_all(const EmbeddingModel& model, const Dataset& dataset) {
  Matrix out(dataset.size(), model.output_dim());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Vector e = model.forward(dataset[i].features);
    std::copy(e.begin(), e.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace logratio
