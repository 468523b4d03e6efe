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

#include "logratio/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace logratio {
namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

const ConfigKey* find_key(std::string_view name) {
  for (const ConfigKey& k : config_schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

bool parse_double(std::string_view text, double& out) {
  // from_chars for double is missing on older standard libraries.
  std::string copy(text);
  std::istringstream in(copy);
  in.imbue(std::locale::classic());
  in >> out;
  return !text.empty() && in && in.peek() == std::char_traits<char>::eof() && std::isfinite(out);
}

std::vector<std::string_view> split_list(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto next = text.find(sep, start);
    const auto stop = next == std::string_view::npos ? text.size() : next;
    parts.push_back(trim(text.substr(start, stop - start)));
    if (next == std::string_view::npos) break;
    start = next + 1;
  }
  return parts;
}

void check_value(const ConfigKey& key, std::string_view value) {
  std::string_view type = key.type;
  const bool allows_auto = type.ends_with("|auto");
  if (allows_auto) type.remove_suffix(5);
  if (allows_auto && value == "auto") return;

  auto fail = [&](std::string_view expected) {
    throw ValidationError("config key '" + std::string(key.name) + "': invalid value '" +
                          std::string(value) + "' (expected " + std::string(expected) + ")");
  };
  std::uint64_t u;
  double d;
  if (type == "size" || type == "u64") {
    if (!parse_u64(value, u)) fail("a non-negative integer");
  } else if (type == "double") {
    if (!parse_double(value, d)) fail("a finite number");
  } else if (type == "bool") {
    if (value != "true" && value != "false") fail("true or false");
  } else if (type == "sizes") {
    if (value.empty()) return;
    for (std::string_view part : split_list(value, ',')) {
      if (!parse_u64(part, u)) fail("a comma-separated list of integers");
    }
  } else if (type.starts_with("enum:")) {
    for (std::string_view choice : split_list(type.substr(5), ',')) {
      if (choice == value) return;
    }
    fail(type.substr(5));
  }
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      // data
      {"dataset", "text", "", "JSON-lines dataset path; empty means use the generator"},
      {"generator", "enum:ramp,manifold,imbalance,toy_pose,toy_layout", "manifold",
       "synthetic generator kind"},
      {"n", "size", "2000", "generated sample count"},
      {"d_in", "size", "10", "feature dimension"},
      {"d_lab", "size", "1", "label dimension (toy_pose: 2 x joints)"},
      {"noise", "double", "0.05", "generator noise level"},
      {"cluster_fraction", "double", "0.9", "imbalance: share of samples in the dense cluster"},
      {"cluster_spread", "double", "0.05", "imbalance: cluster standard deviation"},
      {"mask_size", "size", "16", "toy_layout: mask side length"},
      {"train_fraction", "double", "0.8", "share of samples used for training"},
      {"query_count", "size", "100", "held-out samples used as queries"},
      {"metric", "enum:squared_euclidean,joint_sum,mask_miou_complement,set_min_sum|auto", "auto",
       "label metric"},
      {"joint_count", "size|auto", "auto", "joint_sum: joints per label (auto: label dim / 2)"},
      {"mask_width", "size|auto", "auto", "mask metric: width (auto: mask_size)"},
      {"mask_height", "size|auto", "auto", "mask metric: height (auto: mask_size)"},
      // model
      {"hidden", "sizes", "64", "hidden layer widths, comma separated (empty: linear model)"},
      {"embedding_dim", "size", "16", "embedding dimension"},
      {"unit_norm", "bool|auto", "auto", "L2-normalize embeddings (auto: on for hinge losses)"},
      // loss and mining
      {"loss", "enum:log_ratio,triplet,dense_triplet", "log_ratio", "loss function"},
      {"mining", "enum:dense,binary", "dense", "triplet mining strategy"},
      {"margin", "double|auto", "auto", "hinge margin (auto: 0.2 triplet, 0.03 dense_triplet)"},
      {"distance_floor", "double", "1e-12", "smallest distance the log-ratio loss accepts"},
      {"k", "size", "5", "nearest neighbors placed in every minibatch"},
      {"positive_count", "size", "30", "binary mining: nearest neighbors treated as positive"},
      {"binary_triplets", "size|auto", "auto", "binary mining: triplets per step (auto: batch_size - 1)"},
      // optimization
      {"epochs", "size", "30", "training epochs"},
      {"batch_size", "size", "32", "minibatch size including the anchor"},
      {"optimizer", "enum:sgd,adam", "sgd", "optimizer"},
      {"learning_rate", "double", "0.01", "initial learning rate"},
      {"lr_decay", "double", "0.9", "per-epoch learning-rate multiplier"},
      {"adam_beta1", "double", "0.9", "adam first-moment decay"},
      {"adam_beta2", "double", "0.999", "adam second-moment decay"},
      {"adam_epsilon", "double", "1e-8", "adam denominator offset"},
      {"eval_every", "size", "0", "validation nDCG every n epochs (0: never)"},
      {"eval_k", "size", "8", "K for validation nDCG"},
      // evaluation
      {"k_list", "sizes", "1,2,4,8,16,32", "retrieval depths reported by evaluate/compare"},
      {"checkpoint", "text", "", "evaluate: checkpoint path (empty: <out>/model.ckpt.json)"},
      {"write_csv", "bool", "true", "evaluate/compare: also write plot-ready CSV"},
      {"compare_seeds", "size", "3", "compare: number of consecutive seeds"},
      // mine
      {"anchor", "size", "0", "mine: anchor index"},
      // gradcheck
      {"gradcheck_trials", "size", "200", "gradcheck: random triplets per loss"},
      {"gradcheck_dim", "size", "8", "gradcheck: embedding dimension"},
      {"gradcheck_step", "double", "1e-6", "gradcheck: central difference step"},
      {"gradcheck_tolerance", "double", "1e-4", "gradcheck: max relative error"},
      {"gradcheck_corrupt", "bool", "false", "gradcheck: perturb analytic gradients (test hook)"},
      // run
      {"seed", "u64", "1", "master seed"},
      {"out", "text", "out", "output directory"},
  };
  return schema;
}

RunConfig::RunConfig() {
  for (const ConfigKey& k : config_schema()) values_[std::string(k.name)] = std::string(k.default_value);
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  for (std::string_view raw : split_list(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    try {
      config.set(key, trim(line.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const ConfigKey* spec = find_key(key);
  if (!spec) throw ValidationError("unknown config key '" + std::string(key) + "'");
  check_value(*spec, value);
  values_[std::string(key)] = std::string(value);
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

std::size_t RunConfig::get_size(std::string_view key) const {
  return static_cast<std::size_t>(get_u64(key));
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
  std::uint64_t v = 0;
  if (!parse_u64(get(key), v)) {
    throw ValidationError("config key '" + std::string(key) + "' is not an integer");
  }
  return v;
}

double RunConfig::get_double(std::string_view key) const {
  double v = 0.0;
  if (!parse_double(get(key), v)) {
    throw ValidationError("config key '" + std::string(key) + "' is not a number");
  }
  return v;
}

bool RunConfig::get_bool(std::string_view key) const { return get(key) == "true"; }

std::vector<std::size_t> RunConfig::get_size_list(std::string_view key) const {
  std::vector<std::size_t> out;
  if (get(key).empty()) return out;
  for (std::string_view part : split_list(get(key), ',')) {
    std::uint64_t v = 0;
    parse_u64(part, v);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const ConfigKey& k : config_schema()) {
    out += "# " + std::string(k.help) + "\n";
    out += std::string(k.name) + " = " + get(k.name) + "\n";
  }
  return out;
}

GeneratorSpec generator_spec(const RunConfig& config) {
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(config.get("generator"));
  spec.n = config.get_size("n");
  spec.d_in = config.get_size("d_in");
  spec.d_lab = config.get_size("d_lab");
  spec.noise = config.get_double("noise");
  spec.seed = config.get_u64("seed");
  spec.cluster_fraction = config.get_double("cluster_fraction");
  spec.cluster_spread = config.get_double("cluster_spread");
  spec.mask_size = static_cast<int>(config.get_size("mask_size"));
  spec.validate();
  return spec;
}

TrainConfig train_config(const RunConfig& config) {
  TrainConfig tc;
  tc.epochs = config.get_size("epochs");
  tc.batch_size = config.get_size("batch_size");
  tc.k = config.get_size("k");
  tc.loss.kind = parse_loss_kind(config.get("loss"));
  if (!config.is_auto("margin")) tc.loss.margin = config.get_double("margin");
  tc.loss.distance_floor = config.get_double("distance_floor");
  tc.mining = parse_mining_kind(config.get("mining"));
  tc.positive_count = config.get_size("positive_count");
  if (!config.is_auto("binary_triplets")) tc.binary_triplets = config.get_size("binary_triplets");
  tc.optimizer.kind = parse_optimizer_kind(config.get("optimizer"));
  tc.optimizer.learning_rate = config.get_double("learning_rate");
  tc.optimizer.decay = config.get_double("lr_decay");
  tc.optimizer.beta1 = config.get_double("adam_beta1");
  tc.optimizer.beta2 = config.get_double("adam_beta2");
  tc.optimizer.epsilon = config.get_double("adam_epsilon");
  tc.hidden = config.get_size_list("hidden");
  tc.embedding_dim = config.get_size("embedding_dim");
  if (!config.is_auto("unit_norm")) tc.unit_norm = config.get_bool("unit_norm");
  tc.seed = config.get_u64("seed");
  tc.eval_every = config.get_size("eval_every");
  tc.eval_k = config.get_size("eval_k");
  tc.validate();
  return tc;
}

LabelMetric label_metric(const RunConfig& config, const Dataset& dataset) {
  const bool from_file = !config.get("dataset").empty();
  MetricKind kind;
  if (config.is_auto("metric")) {
    if (from_file) {
      kind = dataset.has_set_labels() ? MetricKind::kSetMinSum : MetricKind::kSquaredEuclidean;
    } else {
      return generator_spec(config).natural_metric();
    }
  } else {
    kind = parse_metric_kind(config.get("metric"));
  }
  switch (kind) {
    case MetricKind::kSquaredEuclidean: return LabelMetric::squared_euclidean();
    case MetricKind::kJointSum:
      return LabelMetric::joint_sum(config.is_auto("joint_count") ? dataset.label_dim() / 2
                                                                   : config.get_size("joint_count"));
    case MetricKind::kMaskMiouComplement: {
      const auto side = static_cast<int>(config.get_size("mask_size"));
      const int w = config.is_auto("mask_width") ? side : static_cast<int>(config.get_size("mask_width"));
      const int h = config.is_auto("mask_height") ? side : static_cast<int>(config.get_size("mask_height"));
      return LabelMetric::mask_miou_complement(w, h);
    }
    case MetricKind::kSetMinSum: return LabelMetric::set_min_sum();
  }
  return LabelMetric::squared_euclidean();
}

}  // namespace logratio
