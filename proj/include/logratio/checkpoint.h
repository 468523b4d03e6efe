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

#ifndef LOGRATIO_CHECKPOINT_H_
#define LOGRATIO_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logratio/model.h"
#include "logratio/trainer.h"

namespace logratio {

// Model checkpoint: a JSON document
//   {"format": "logratio-checkpoint", "version": 1,
//    "layers": [{"in": 10, "out": 64, "activation": "relu"}, ...],
//    "unit_norm": false, "parameter_count": N,
//    "encoding": "base64-f64le", "parameters": "<base64>",
//    "checksum": "<16 hex digits>"}
// where the blob is the flat parameter vector as little-endian IEEE-754
// doubles and the checksum is 64-bit FNV-1a over the raw blob bytes.
std::string checkpoint_to_json(const EmbeddingModel& model);
EmbeddingModel checkpoint_from_json(std::string_view text);

void save_checkpoint(const std::filesystem::path& path, const EmbeddingModel& model);
EmbeddingModel load_checkpoint(const std::filesystem::path& path);

// Checksum written into the checkpoint for `model`.
std::string checkpoint_checksum(const EmbeddingModel& model);

std::uint64_t fnv1a64(std::string_view bytes);
std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);

// One JSON object per line:
//   {"epoch": 3, "mean_loss": 0.12, "lr": 0.0081, "steps": 1600, "ndcg_val": 0.93}
// ndcg_val is present only for epochs where validation ran.
std::string training_log_jsonl(const std::vector<EpochRecord>& log);

}  // namespace logratio

#endif  // LOGRATIO_CHECKPOINT_H_
