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

#ifndef LOGRATIO_COMMANDS_H_
#define LOGRATIO_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "logratio/config.h"
#include "logratio/eval.h"
#include "logratio/synthdata.h"
#include "logratio/trainer.h"

namespace logratio {

// Dataset (loaded or generated), its split and the label metric.
struct ExperimentData {
  Dataset full;
  Split parts;
  LabelMetric metric = LabelMetric::squared_euclidean();
};

ExperimentData prepare_data(const RunConfig& config);

// The loss/mining combinations compared by `compare`.
enum class Method { kLogRatioDense, kTripletDense, kTripletBinary };

std::string_view method_name(Method method);
inline constexpr Method kAllMethods[] = {Method::kLogRatioDense, Method::kTripletDense,
                                         Method::kTripletBinary};

// `config` with loss, mining and margin set for `method`; unit_norm and
// margin revert to their per-loss defaults.
TrainConfig method_train_config(const RunConfig& config, Method method);

struct MethodRun {
  Method method;
  TrainResult training;
  EvaluationReport report;
};

MethodRun run_method(const ExperimentData& data, const RunConfig& config, Method method);

struct GradcheckEntry {
  std::string name;
  std::size_t trials = 0;
  double max_relative_error = 0.0;
  double max_sum_residual = 0.0;  // max |grad_a + grad_i + grad_j|, loss entries only
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double tolerance = 0.0;
  bool passed = false;
};

GradcheckReport run_gradcheck(const RunConfig& config);

struct CompareRow {
  std::string method;
  std::vector<double> mean_ndcg;            // aligned with ks, averaged over seeds
  std::vector<double> mean_label_distance;
  std::vector<std::vector<double>> ndcg_per_seed;  // [seed][k]
  std::vector<std::vector<double>> distance_per_seed;
};

struct CompareReport {
  std::vector<std::size_t> ks;
  std::vector<std::uint64_t> seeds;
  std::vector<CompareRow> rows;  // three methods, oracle, untrained
};

CompareReport run_compare(const RunConfig& config);

std::string report_json(const EvaluationReport& report, std::string_view metric);
std::string report_csv(const EvaluationReport& report);
std::string compare_json(const CompareReport& report);
std::string compare_csv(const CompareReport& report);

// Subcommands. Each writes only inside config "out" (created if needed),
// echoes the effective configuration there as effective_config.txt, and
// prints a short summary to `log`. Errors surface as ValidationError or
// DivergenceError. cmd_gradcheck returns whether every check passed.
void cmd_generate(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_mine(const RunConfig& config, std::ostream& log);
bool cmd_gradcheck(const RunConfig& config, std::ostream& log);
void cmd_evaluate(const RunConfig& config, std::ostream& log);
void cmd_compare(const RunConfig& config, std::ostream& log);

}  // namespace logratio

#endif  // LOGRATIO_COMMANDS_H_
