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

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "logratio/commands.h"
#include "logratio/config.h"
#include "logratio/core.h"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

logratio::RunConfig effective_config(const Options& opts) {
  logratio::RunConfig cfg =
      opts.config_path.empty() ? logratio::RunConfig() : logratio::RunConfig::load(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw logratio::ValidationError("--set expects key=value, got " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
  if (!opts.out.empty()) cfg.set("out", opts.out);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dense triplet mining and log-ratio loss for continuous-label metric learning"};
  app.require_subcommand(1);
  Options opts;
  const char* names[][2] = {
      {"generate", "write a synthetic dataset"},
      {"train", "train an embedding model and save a checkpoint"},
      {"mine", "dump the mined triplets for one anchor"},
      {"gradcheck", "compare analytic gradients with finite differences"},
      {"evaluate", "score a checkpoint on the query/gallery split"},
      {"compare", "train and score every loss/mining combination over several seeds"},
  };
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "key = value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "override the config seed");
    sub->add_option("--out", opts.out, "override the output directory");
    sub->add_option("--set", opts.overrides, "override one config key (key=value)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const logratio::RunConfig cfg = effective_config(opts);
    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "generate") logratio::cmd_generate(cfg, std::cout);
    else if (command == "train") logratio::cmd_train(cfg, std::cout);
    else if (command == "mine") logratio::cmd_mine(cfg, std::cout);
    else if (command == "evaluate") logratio::cmd_evaluate(cfg, std::cout);
    else if (command == "compare") logratio::cmd_compare(cfg, std::cout);
    else if (command == "gradcheck") return logratio::cmd_gradcheck(cfg, std::cout) ? 0 : 3;
  } catch (const logratio::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const logratio::DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
