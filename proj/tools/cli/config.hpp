// Copyright 2026 The oralread Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "oralread/align.hpp"
#include "oralread/corpusio.hpp"
#include "oralread/miscue.hpp"
#include "oralread/normalize.hpp"

namespace oralread::cli {

// Exit code contract: 0 success, 1 usage error, 2 data error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MissingEmbeddings { kError, kDegrade };

struct RunConfig {
  std::filesystem::path corpus;
  std::vector<std::string> models;  // empty: every model found in the corpus
  std::string source = "inline";
  std::filesystem::path out = "oralread_out";
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> phoneme_map;

  ClassifierConfig classifier;
  CostConfig cost;
  CostConfig phoneme_cost;
  NormalizationConfig normalization;
  MissingEmbeddings missing_embeddings = MissingEmbeddings::kError;

  std::set<std::string> report_formats = {"json", "tsv", "txt"};
  std::set<std::string> analyses;  // empty: everything the corpus supports
  std::string level = "word";      // confusions: word | phoneme
  std::size_t top_k = 10;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  int remote_retries = 2;
  int remote_timeout_ms = 30000;
  PhonemeAlphabet remote_alphabet = PhonemeAlphabet::kIpa;

  InjectionSpec injection;  // counts for the inject harness (seed from `seed`)

  // Throws UsageError on out-of-range values.
  void Validate() const;
};

// Names accepted in RunConfig::analyses.
const std::set<std::string>& KnownAnalyses();

// Reads a JSON config file on top of `base`. Throws UsageError for unknown
// or ill-typed keys and DataError when the file cannot be read.
RunConfig LoadRunConfig(const std::filesystem::path& path, RunConfig base = {});

// Parses "SS=2,OS=1,restart=3" into injection counts.
InjectionSpec ParseInjectionCounts(const std::string& text);

}  // namespace oralread::cli
