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

#ifndef LOGRATIO_CONFIG_H_
#define LOGRATIO_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "logratio/distances.h"
#include "logratio/synthdata.h"
#include "logratio/trainer.h"

namespace logratio {

struct ConfigKey {
  std::string_view name;
  // "size", "u64", "double", "bool", "sizes" (comma list), "text", or
  // "enum:a,b,c". A trailing "|auto" also admits the literal "auto".
  std::string_view type;
  std::string_view default_value;
  std::string_view help;
};

// Every accepted key with its default, in documentation order.
const std::vector<ConfigKey>& config_schema();

// Plain-text run configuration: one `key = value` per line, `#` starts a
// comment, blank lines are ignored. Keys outside config_schema() are errors,
// and so are values that do not parse for their key. Missing keys take their
// documented defaults.
class RunConfig {
 public:
  RunConfig();

  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::filesystem::path& path);

  // Validates and stores one value.
  void set(std::string_view key, std::string_view value);
  const std::string& get(std::string_view key) const;

  std::string get_string(std::string_view key) const { return get(key); }
  std::size_t get_size(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<std::size_t> get_size_list(std::string_view key) const;
  bool is_auto(std::string_view key) const { return get(key) == "auto"; }

  // Effective configuration (defaults applied), re-parseable by parse().
  std::string to_text() const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

GeneratorSpec generator_spec(const RunConfig& config);
TrainConfig train_config(const RunConfig& config);

// The metric named by `metric`; "auto" picks the generator's natural metric,
// or squared Euclidean when the data comes from a file.
LabelMetric label_metric(const RunConfig& config, const Dataset& dataset);

}  // namespace logratio

#endif  // LOGRATIO_CONFIG_H_
