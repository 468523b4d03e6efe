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

#include "logratio/dataset_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace logratio {
namespace {

using nlohmann::json;

Vector to_vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": expected an array of numbers");
  Vector out;
  out.reserve(j.size());
  for (const json& x : j) {
    if (!x.is_number()) throw ValidationError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

LabeledSample parse_sample(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(where + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("features") ||
      !j.contains("label")) {
    throw ValidationError(where + ": expected object with id, features, label");
  }
  if (!j["id"].is_number_integer()) throw ValidationError(where + ": id must be an integer");

  LabeledSample s;
  s.id = j["id"].get<std::int64_t>();
  s.features = to_vector(j["features"], where + " features");
  const json& label = j["label"];
  if (label.is_object()) {
    if (!label.contains("items") || !label["items"].is_array() || label["items"].empty()) {
      throw ValidationError(where + ": set label needs a non-empty \"items\" array");
    }
    for (const json& item : label["items"]) {
      s.label.items.push_back(to_vector(item, where + " label item"));
    }
  } else {
    s.label.values = to_vector(label, where + " label");
  }
  return s;
}

}  // namespace

Dataset read_dataset(std::istream& in, std::string name) {
  std::vector<LabeledSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    samples.push_back(parse_sample(line, line_no));
  }
  return Dataset(std::move(name), std::move(samples));
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file: " + path.string());
  return read_dataset(in, path.stem().string());
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  for (const LabeledSample& s : dataset.samples()) {
    json j;
    j["id"] = s.id;
    j["features"] = s.features;
    if (s.label.is_set()) {
      j["label"] = json{{"items", s.label.items}};
    } else {
      j["label"] = s.label.values;
    }
    out << j.dump() << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dataset file: " + path.string());
  write_dataset(out, dataset);
}

}  // namespace logratio
