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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "oralread/analysis.hpp"
#include "oralread/miscue.hpp"
#include "oralread/normalize.hpp"

namespace oralread {

inline constexpr int kCorpusSchemaVersion = 1;

struct Transcript {
  WordSeq words;
  std::optional<PhonemeSeq> phonemes;  // always CGN once loaded
  std::optional<std::vector<AttemptLabel>> attempt_labels;
  // Per word: index of the prompt word the attempt targets, if any.
  std::optional<std::vector<std::optional<std::size_t>>> prompt_links;
};

struct CorpusRecord {
  std::string id;
  WordSeq prompt;
  Transcript reference;
  std::map<std::string, Transcript> hypotheses;  // model key -> transcript
  std::map<std::string, std::string> metadata;
};

// --- errors ---------------------------------------------------------------

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document or a field that violates the schema. `where` is either
// "line L, column C" or a field path such as "records[2].reference.attempts".
class ParseError : public CorpusError {
 public:
  ParseError(std::string where, const std::string& message);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class DuplicateIdError : public CorpusError {
 public:
  explicit DuplicateIdError(const std::string& id);
};

class SchemaVersionMismatchError : public CorpusError {
 public:
  SchemaVersionMismatchError(long found, long expected);
};

// --- corpus file -----------------------------------------------------------

struct CorpusLoadOptions {
  NormalizationConfig normalization;
  // Used for hypotheses whose phonemes are declared as IPA. Defaults to the
  // bundled table when null.
  const PhonemeMapping* ipa_to_cgn = nullptr;
};

std::vector<CorpusRecord> ParseCorpus(std::string_view text,
                                      const CorpusLoadOptions& options = {});
// Throws CorpusError when the file cannot be read.
std::vector<CorpusRecord> LoadCorpus(const std::filesystem::path& path,
                                     const CorpusLoadOptions& options = {});

// Emits the corpus document (version 1) with normalized text fields.
std::string SerializeCorpus(std::span<const CorpusRecord> records);

// --- embeddings --------------------------------------------------------------

class EmbeddingFormatError : public std::runtime_error {
 public:
  EmbeddingFormatError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatchError : public EmbeddingFormatError {
 public:
  using EmbeddingFormatError::EmbeddingFormatError;
};

class MalformedLineError : public EmbeddingFormatError {
 public:
  using EmbeddingFormatError::EmbeddingFormatError;
};

// word2vec text format: "<count> <dim>" header, then "<word> v1 ... v_dim".
EmbeddingProvider ParseEmbeddings(std::istream& in);
EmbeddingProvider LoadEmbeddings(const std::filesystem::path& path);

// Writes the word2vec text format with round-trip precision.
void WriteEmbeddings(std::ostream& out, const EmbeddingProvider& emb);

// --- hypothesis sources ----------------------------------------------------------

class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& record_id);
  const std::string& record_id() const { return record_id_; }

 private:
  std::string record_id_;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RemoteError : public std::runtime_error {
 public:
  RemoteError(int status, const std::string& message);
  int status() const { return status_; }

 private:
  int status_;
};

struct HypothesisSource {
  enum class Kind { kInline, kDirectory, kRemote };

  Kind kind = Kind::kInline;
  std::string model;
  std::filesystem::path directory;  // kDirectory: files named <id>.<model>.txt
  std::string endpoint;             // kRemote: http://host[:port]/path
  int retries = 2;                  // extra attempts after a 5xx / transport failure
  int timeout_ms = 30000;
  PhonemeAlphabet phoneme_alphabet = PhonemeAlphabet::kIpa;  // dir/remote phonemes

  // "inline", "dir:<path>" or an http:// URL.
  static HypothesisSource Parse(std::string_view spec, std::string model);
};

struct FetchContext {
  NormalizationConfig normalization;
  const PhonemeMapping* ipa_to_cgn = nullptr;  // bundled table when null
};

// Returns the record's transcript for source.model. Never returns a partial
// transcript: any failure throws NotFoundError, TransportError or
// RemoteError.
Transcript FetchHypothesis(const HypothesisSource& source, const CorpusRecord& record,
                           const FetchContext& ctx = {});

// Fetches all records with at most `jobs` concurrent requests. All-or-nothing:
// the first failure (in record order) is rethrown after outstanding work ends.
std::map<std::string, Transcript> FetchHypotheses(const HypothesisSource& source,
                                                  std::span<const CorpusRecord> records,
                                                  std::size_t jobs,
                                                  const FetchContext& ctx = {});

// --- synthetic miscue injection ---------------------------------------------------

struct InjectionSpec {
  std::map<MiscueLabel, std::size_t> counts;  // SS, OS, O, I_m, D
  std::size_t restarts = 0;
  std::uint64_t seed = 0;

  std::size_t Total() const;
};

class InsufficientPromptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoCandidateWordError : public std::runtime_error {
 public:
  explicit NoCandidateWordError(MiscueLabel category);
  MiscueLabel category() const { return category_; }

 private:
  MiscueLabel category_;
};

struct InjectionResult {
  Transcript transcript;
  // Ground truth in prompt order, labelled as the classifier must label it
  // (restarts included with kRestart).
  std::vector<LabeledError> truth;
};

// Builds a read-aloud transcript from `prompt` with the requested miscues.
// Replacement and inserted words are drawn from the lexicon vocabulary and
// never occur in the prompt; sites are separated by at least one untouched
// prompt word so the prompt alignment recovers each site exactly.
// Deterministic for a given (prompt, spec, lexicon, cfg).
InjectionResult InjectMiscues(const WordSeq& prompt, const InjectionSpec& spec,
                              const EmbeddingProvider& lexicon,
                              const ClassifierConfig& cfg = {});

}  // namespace oralread
