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

#ifndef LOGRATIO_OPTIMIZER_H_
#define LOGRATIO_OPTIMIZER_H_

#include <cstddef>
#include <string_view>

#include "logratio/core.h"

namespace logratio {

enum class OptimizerKind { kSgdExpDecay, kAdam };

std::string_view optimizer_kind_name(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgdExpDecay;
  double learning_rate = 1e-2;
  // Per-epoch multiplier: lr(epoch) = learning_rate * decay^epoch.
  double decay = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Plain SGD or Adam (Kingma & Ba), both with exponential per-epoch
// learning-rate decay.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, std::size_t parameter_count);

  void set_epoch(std::size_t epoch);
  double learning_rate() const { return lr_; }
  std::size_t steps() const { return steps_; }

  void step(MutVec params, ConstVec grads);

 private:
  OptimizerConfig config_;
  double lr_;
  std::size_t steps_ = 0;
  Vector first_moment_;
  Vector second_moment_;
};

}  // namespace logratio

#endif  // LOGRATIO_OPTIMIZER_H_
