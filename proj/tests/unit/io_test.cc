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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "logratio/checkpoint.h"
#include "logratio/config.h"
#include "logratio/rng.h"

using namespace logratio;

TEST_CASE("base64 and fnv") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
  CHECK(base64_decode("Zm9vYg==") == "foob");
  CHECK_THROWS_AS(base64_decode("Zm9"), ValidationError);
  CHECK_THROWS_AS(base64_decode("Zm9*"), ValidationError);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("checkpoint round trip is bit exact") {
  Rng rng(71);
  const std::size_t dims[] = {5, 9, 3};
  EmbeddingModel m = EmbeddingModel::initialize(dims, true, rng);
  m.mutable_parameters()[3] = 1.0 / 3.0;
  m.mutable_parameters()[4] = -0.0;
  const std::string text = checkpoint_to_json(m);
  const EmbeddingModel back = checkpoint_from_json(text);
  CHECK(back == m);
  CHECK(checkpoint_checksum(back) == checkpoint_checksum(m));
  CHECK(std::signbit(back.parameters()[4]));

  auto j = nlohmann::json::parse(text);
  j["checksum"] = "0000000000000000";
  CHECK_THROWS_AS(checkpoint_from_json(j.dump()), ValidationError);
  j = nlohmann::json::parse(text);
  j["layers"][0]["out"] = 8;
  CHECK_THROWS_AS(checkpoint_from_json(j.dump()), ValidationError);
  CHECK_THROWS_AS(checkpoint_from_json("{"), ValidationError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/model.json"), ValidationError);
}

TEST_CASE("training log lines") {
  std::vector<EpochRecord> log = {{0, 1.5, 0.01, 0, {}}, {1, 0.5, 0.01, 10, 0.75}};
  const std::string text = training_log_jsonl(log);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  auto first = nlohmann::json::parse(line);
  CHECK(first["mean_loss"] == 1.5);
  CHECK_FALSE(first.contains("ndcg_val"));
  std::getline(in, line);
  CHECK(nlohmann::json::parse(line)["ndcg_val"] == 0.75);
}

TEST_CASE("config parsing") {
  const RunConfig defaults;
  CHECK(defaults.get_size("k") == 5);
  CHECK(defaults.get_double("learning_rate") == 1e-2);
  CHECK(defaults.get_size("positive_count") == 30);
  CHECK(defaults.get_size_list("k_list") == std::vector<std::size_t>{1, 2, 4, 8, 16, 32});
  CHECK(defaults.is_auto("margin"));

  const RunConfig c = RunConfig::parse("# comment\nloss = triplet  # inline\n\nmargin = 0.5\nhidden = 8,4\n");
  CHECK(c.get("loss") == "triplet");
  CHECK(c.get_double("margin") == 0.5);
  CHECK(c.get_size_list("hidden") == std::vector<std::size_t>{8, 4});
  CHECK(RunConfig::parse(c.to_text()) == c);

  CHECK_THROWS_AS(RunConfig::parse("learning_rat = 0.1\n"), ValidationError);
  CHECK_THROWS_AS(RunConfig::parse("k = -1\n"), ValidationError);
  CHECK_THROWS_AS(RunConfig::parse("loss = contrastive\n"), ValidationError);
  CHECK_THROWS_AS(RunConfig::parse("just words\n"), ValidationError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/run.cfg"), ValidationError);

  const TrainConfig tc = train_config(c);
  CHECK(tc.loss.kind == LossKind::kTriplet);
  CHECK(tc.loss.effective_margin() == 0.5);
  CHECK(tc.hidden == std::vector<std::size_t>{8, 4});
  const TrainConfig dflt = train_config(defaults);
  CHECK(dflt.loss.kind == LossKind::kLogRatio);
  CHECK(dflt.mining == MiningKind::kDense);
  CHECK_FALSE(dflt.loss.margin.has_value());

  RunConfig empty_hidden;
  empty_hidden.set("hidden", "");
  CHECK(train_config(empty_hidden).hidden.empty());
}
