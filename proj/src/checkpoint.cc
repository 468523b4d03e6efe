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

#include "logratio/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace logratio {
namespace {

constexpr std::string_view kFormat = "logratio-checkpoint";
constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string parameter_blob(ConstVec params) {
  std::string blob(params.size() * 8, '\0');
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto bits = std::bit_cast<std::uint64_t>(params[p]);
    for (int b = 0; b < 8; ++b) {
      blob[p * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
  }
  return blob;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                            (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                            static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(bytes[i + 1]) << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += rest == 2 ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::string base64_decode(std::string_view text) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t k = 0; k < kAlphabet.size(); ++k) {
    lookup[static_cast<unsigned char>(kAlphabet[k])] = static_cast<int>(k);
  }
  if (text.size() % 4 != 0) throw ValidationError("base64: length is not a multiple of 4");
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        vals[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw ValidationError("base64: data after padding");
      vals[k] = lookup[static_cast<unsigned char>(c)];
      if (vals[k] < 0) throw ValidationError("base64: invalid character");
    }
    const std::uint32_t v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
    out += static_cast<char>((v >> 16) & 0xff);
    if (pad < 2) out += static_cast<char>((v >> 8) & 0xff);
    if (pad < 1) out += static_cast<char>(v & 0xff);
  }
  return out;
}

std::string checkpoint_checksum(const EmbeddingModel& model) {
  return hex64(fnv1a64(parameter_blob(model.parameters())));
}

std::string checkpoint_to_json(const EmbeddingModel& model) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = 1;
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerShape& s : model.layers()) {
    layers.push_back({{"in", s.in}, {"out", s.out}, {"activation", activation_name(s.activation)}});
  }
  j["layers"] = layers;
  j["unit_norm"] = model.unit_norm_output();
  j["parameter_count"] = model.parameter_count();
  const std::string blob = parameter_blob(model.parameters());
  j["encoding"] = "base64-f64le";
  j["parameters"] = base64_encode(blob);
  j["checksum"] = hex64(fnv1a64(blob));
  return j.dump(2) + "\n";
}

EmbeddingModel checkpoint_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("checkpoint: invalid JSON (") + e.what() + ")");
  }
  try {
    if (j.at("format").get<std::string>() != kFormat || j.at("version").get<int>() != 1) {
      throw ValidationError("checkpoint: unsupported format or version");
    }
    if (j.at("encoding").get<std::string>() != "base64-f64le") {
      throw ValidationError("checkpoint: unsupported parameter encoding");
    }
    std::vector<LayerShape> layers;
    for (const auto& l : j.at("layers")) {
      layers.push_back({l.at("in").get<std::size_t>(), l.at("out").get<std::size_t>(),
                        parse_activation(l.at("activation").get<std::string>())});
    }
    EmbeddingModel model(std::move(layers), j.at("unit_norm").get<bool>());
    const std::string blob = base64_decode(j.at("parameters").get<std::string>());
    if (hex64(fnv1a64(blob)) != j.at("checksum").get<std::string>()) {
      throw ValidationError("checkpoint: checksum mismatch");
    }
    if (blob.size() != model.parameter_count() * 8 ||
        j.at("parameter_count").get<std::size_t>() != model.parameter_count()) {
      throw ValidationError("checkpoint: parameter count does not match layer shapes");
    }
    MutVec params = model.mutable_parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[p * 8 + b])) << (8 * b);
      }
      params[p] = std::bit_cast<double>(bits);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("checkpoint: malformed (") + e.what() + ")");
  }
}

void save_checkpoint(const std::filesystem::path& path, const EmbeddingModel& model) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write checkpoint: " + path.string());
  out << checkpoint_to_json(model);
}

EmbeddingModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

std::string training_log_jsonl(const std::vector<EpochRecord>& log) {
  std::string out;
  for (const EpochRecord& r : log) {
    nlohmann::json j;
    j["epoch"] = r.epoch;
    j["mean_loss"] = r.mean_loss;
    j["lr"] = r.learning_rate;
    j["steps"] = r.steps;
    if (r.ndcg_val) j["ndcg_val"] = *r.ndcg_val;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace logratio
