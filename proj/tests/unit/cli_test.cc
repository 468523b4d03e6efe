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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::path(LOGRATIO_TEST_SCRATCH) / "cli";

int run(const std::string& args, const std::string& tag) {
  const std::string cmd = std::string(LOGRATIO_CLI) + " " + args + " > " +
                          (kScratch / (tag + ".log")).string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Scratch {
  Scratch() {
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
  }
};

const std::string kSmall = "--set n=300 --set query_count=20 --set epochs=2 --set hidden=16 ";

}  // namespace

TEST_CASE_FIXTURE(Scratch, "train twice gives the same checkpoint, then evaluate") {
  const fs::path a = kScratch / "a", b = kScratch / "b";
  REQUIRE(run("train " + kSmall + "--out " + a.string(), "train_a") == 0);
  REQUIRE(run("train " + kSmall + "--out " + b.string(), "train_b") == 0);
  const auto ca = nlohmann::json::parse(slurp(a / "model.ckpt.json"));
  const auto cb = nlohmann::json::parse(slurp(b / "model.ckpt.json"));
  CHECK(ca["checksum"] == cb["checksum"]);
  CHECK(slurp(a / "train_log.jsonl") == slurp(b / "train_log.jsonl"));

  // Re-running from the echoed configuration reproduces the checkpoint.
  const fs::path c = kScratch / "c";
  REQUIRE(run("train --config " + (a / "effective_config.txt").string() + " --out " + c.string(), "train_c") == 0);
  CHECK(nlohmann::json::parse(slurp(c / "model.ckpt.json"))["checksum"] == ca["checksum"]);

  REQUIRE(run("evaluate " + kSmall + "--out " + a.string(), "eval") == 0);
  const auto report = nlohmann::json::parse(slurp(a / "eval_report.json"));
  CHECK(report["metric"] == "squared_euclidean");
  CHECK(report["oracle"]["per_K"]["8"]["mean_ndcg"] == 1.0);
  CHECK(report["baseline"]["per_K"].contains("32"));
  CHECK(slurp(a / "eval_curves.csv").starts_with("K,model,mean_ndcg,mean_label_distance\n"));
}

TEST_CASE_FIXTURE(Scratch, "log-ratio training on a ramp lowers the logged loss") {
  const fs::path out = kScratch / "ramp";
  REQUIRE(run("train --set generator=ramp --set noise=0 --set d_lab=2 --set n=200 --set query_count=10 "
              "--set epochs=5 --out " + out.string(), "ramp") == 0);
  std::istringstream log(slurp(out / "train_log.jsonl"));
  std::string line, first, last;
  std::getline(log, first);
  last = first;
  while (std::getline(log, line)) last = line;
  CHECK(nlohmann::json::parse(last)["mean_loss"].get<double>() <
        nlohmann::json::parse(first)["mean_loss"].get<double>());
}

TEST_CASE_FIXTURE(Scratch, "errors map to exit codes") {
  CHECK(run("train --set dataset=/nonexistent/data.jsonl --out " + (kScratch / "x").string(), "missing") == 1);
  CHECK(slurp(kScratch / "missing.log").find("/nonexistent/data.jsonl") != std::string::npos);
  std::ofstream(kScratch / "bad.cfg") << "epochz = 3\n";
  CHECK(run("train --config " + (kScratch / "bad.cfg").string(), "badkey") == 1);
  CHECK(slurp(kScratch / "badkey.log").find("epochz") != std::string::npos);
  CHECK(run("train " + kSmall + "--set loss=triplet --set unit_norm=false --set learning_rate=1e200 --out " +
                (kScratch / "div").string(), "diverge") == 2);
  CHECK(run("frobnicate", "unknown") != 0);
}

TEST_CASE_FIXTURE(Scratch, "gradcheck passes and its negative control fails") {
  const fs::path a = kScratch / "g1", b = kScratch / "g2";
  CHECK(run("gradcheck --set gradcheck_trials=100 --out " + a.string(), "gc") == 0);
  CHECK(run("gradcheck --set gradcheck_trials=100 --out " + b.string(), "gc2") == 0);
  CHECK(slurp(a / "gradcheck.json") == slurp(b / "gradcheck.json"));
  CHECK(nlohmann::json::parse(slurp(a / "gradcheck.json"))["passed"] == true);
  CHECK(run("gradcheck --set gradcheck_trials=20 --set gradcheck_corrupt=true --out " +
                (kScratch / "g3").string(), "gc3") != 0);
}

TEST_CASE_FIXTURE(Scratch, "generate and mine") {
  const fs::path out = kScratch / "gen";
  REQUIRE(run("generate --set generator=toy_layout --set n=50 --out " + out.string(), "gen") == 0);
  CHECK(fs::exists(out / "dataset.jsonl"));
  CHECK(nlohmann::json::parse(slurp(out / "dataset.spec.json"))["kind"] == "toy_layout");
  CHECK(fs::exists(out / "effective_config.txt"));

  REQUIRE(run("mine --set n=200 --set query_count=10 --set anchor=3 --set batch_size=10 --out " + out.string(), "mine") == 0);
  std::istringstream lines(slurp(out / "triplets.jsonl"));
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto t = nlohmann::json::parse(line);
    CHECK(t["a"] == 3);
    CHECK(t["d_ai"].get<double>() < t["d_aj"].get<double>());
    ++count;
  }
  CHECK(count == 36);
  CHECK(run("mine --set n=200 --set query_count=10 --set anchor=200 --out " + out.string(), "mine_bad") == 1);
}
