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

#ifndef LOGRATIO_DATASET_IO_H_
#define LOGRATIO_DATASET_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "logratio/core.h"

namespace logratio {

// JSON-lines dataset format, one sample per line:
//   {"id": 3, "features": [0.1, 0.2], "label": [1.0, 2.0]}
// Set-valued labels use {"items": [[...], [...]]} in place of the array.
// Blank lines are ignored. Loading validates dimensions and id uniqueness.
Dataset read_dataset(std::istream& in, std::string name);
Dataset load_dataset(const std::filesystem::path& path);

void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace logratio

#endif  // LOGRATIO_DATASET_IO_H_
