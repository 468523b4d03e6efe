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

#include "logratio/optimizer.h"

#include <cmath>
#include <string>

namespace logratio {

std::string_view optimizer_kind_name(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgdExpDecay;
  if (name == "adam") return OptimizerKind::kAdam;
  throw ValidationError("unknown optimizer '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning rate must be positive");
  }
  if (!(decay > 0.0) || decay > 1.0) throw ValidationError("lr decay must be in (0, 1]");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("adam betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ValidationError("adam epsilon must be positive");
}

Optimizer::Optimizer(OptimizerConfig config, std::size_t parameter_count)
    : config_(config), lr_(config.learning_rate) {
  config_.validate();
  if (config_.kind == OptimizerKind::kAdam) {
    first_moment_.assign(parameter_count, 0.0);
    second_moment_.assign(parameter_count, 0.0);
  }
}

void Optimizer::set_epoch(std::size_t epoch) {
  lr_ = config_.learning_rate * std::pow(config_.decay, static_cast<double>(epoch));
}

void Optimizer::step(MutVec params, ConstVec grads) {
  if (params.size() != grads.size()) {
    throw ValidationError("optimizer: parameter and gradient sizes differ");
  }
  ++steps_;
  if (config_.kind == OptimizerKind::kSgdExpDecay) {
    for (std::size_t p = 0; p < params.size(); ++p) params[p] -= lr_ * grads[p];
    return;
  }
  if (first_moment_.size() != params.size()) {
    throw ValidationError("optimizer: moment buffers do not match parameter count");
  }
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    first_moment_[p] = config_.beta1 * first_moment_[p] + (1.0 - config_.beta1) * grads[p];
    second_moment_[p] =
        config_.beta2 * second_moment_[p] + (1.0 - config_.beta2) * grads[p] * grads[p];
    const double m_hat = first_moment_[p] / correction1;
    const double v_hat = second_moment_[p] / correction2;
    params[p] -= lr_ * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

}  // namespace logratio
