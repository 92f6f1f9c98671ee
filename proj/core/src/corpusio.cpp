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

#include "oralread/corpusio.hpp"

#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "remote_client.hpp"

namespace oralread {

using nlohmann::json;

ParseError::ParseError(std::string where, const std::string& message)
    : CorpusError(where + ": " + message), where_(std::move(where)) {}

DuplicateIdError::DuplicateIdError(const std::string& id)
    : CorpusError("duplicate record id '" + id + "'") {}

SchemaVersionMismatchError::SchemaVersionMismatchError(long found, long expected)
    : CorpusError("corpus schema version " + std::to_string(found) +
                  " is not supported (expected " + std::to_string(expected) + ")") {}

EmbeddingFormatError::EmbeddingFormatError(std::size_t line, const std::string& message)
    : std::runtime_error("embeddings line " + std::to_string(line) + ": " + message),
      line_(line) {}

NotFoundError::NotFoundError(const std::string& record_id)
    : std::runtime_error("no hypothesis found for record '" + record_id + "'"),
      record_id_(record_id) {}

RemoteError::RemoteError(int status, const std::string& message)
    : std::runtime_error("transcription service returned " + std::to_string(status) +
                         ": " + message),
      status_(status) {}

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string LineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& Require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing required field");
  return *it;
}

std::string RequireString(const json& obj, const char* key, const std::string& path) {
  const json& v = Require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> OptionalString(const json& obj, const char* key,
                                          const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ParseError(path + "." + key, "expected a string");
  return it->get<std::string>();
}

const PhonemeMapping& IpaMapping(const PhonemeMapping* m) {
  return m != nullptr ? *m : PhonemeMapping::BundledIpaToCgn();
}

PhonemeSeq PhonemesToCgn(std::string_view text, PhonemeAlphabet alphabet,
                         const NormalizationConfig& norm, const PhonemeMapping* ipa) {
  PhonemeSeq seq = ParsePhonemes(text, alphabet, norm);
  if (alphabet == PhonemeAlphabet::kIpa) seq = MapPhonemes(seq, IpaMapping(ipa));
  return seq;
}

Transcript ParseTranscript(const json& obj, const std::string& path,
                           const CorpusLoadOptions& options, std::size_t prompt_len,
                           bool is_reference) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  Transcript t;
  t.words = NormalizeText(RequireString(obj, "text", path), options.normalization);

  PhonemeAlphabet alphabet = PhonemeAlphabet::kCgn;
  if (auto a = OptionalString(obj, "alphabet", path)) {
    auto parsed = ParseAlphabet(*a);
    if (!parsed) throw ParseError(path + ".alphabet", "expected \"cgn\" or \"ipa\"");
    alphabet = *parsed;
  }
  if (auto ph = OptionalString(obj, "phonemes", path)) {
    try {
      t.phonemes = PhonemesToCgn(*ph, alphabet, options.normalization, options.ipa_to_cgn);
    } catch (const std::exception& e) {
      throw ParseError(path + ".phonemes", e.what());
    }
  }

  if (!is_reference) return t;
  auto it = obj.find("attempts");
  if (it == obj.end() || it->is_null()) return t;
  if (!it->is_array()) throw ParseError(path + ".attempts", "expected an array");
  if (it->size() != t.words.size()) {
    throw ParseError(path + ".attempts",
                     std::to_string(it->size()) + " attempts for " +
                         std::to_string(t.words.size()) + " normalized reference words");
  }
  std::vector<AttemptLabel> labels;
  std::vector<std::optional<std::size_t>> links;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string apath = path + ".attempts[" + std::to_string(i) + "]";
    const json& a = (*it)[i];
    if (!a.is_object()) throw ParseError(apath, "expected an object");
    auto label = ParseAttemptLabel(RequireString(a, "label", apath));
    if (!label) {
      throw ParseError(apath + ".label", "expected correct|part|incorrect|other");
    }
    labels.push_back(*label);
    auto pi = a.find("prompt_index");
    if (pi == a.end() || pi->is_null()) {
      links.emplace_back();
      continue;
    }
    if (!pi->is_number_integer()) throw ParseError(apath + ".prompt_index", "expected an integer");
    const long idx = pi->get<long>();
    if (idx < 0 || static_cast<std::size_t>(idx) >= prompt_len) {
      throw ParseError(apath + ".prompt_index", "index " + std::to_string(idx) +
                                                    " outside prompt of " +
                                                    std::to_string(prompt_len) + " words");
    }
    links.emplace_back(static_cast<std::size_t>(idx));
  }
  t.attempt_labels = std::move(labels);
  t.prompt_links = std::move(links);
  return t;
}

json TranscriptToJson(const Transcript& t) {
  json out = json::object();
  out["text"] = t.words.Joined();
  if (t.phonemes) out["phonemes"] = t.phonemes->Joined();
  if (t.attempt_labels) {
    json attempts = json::array();
    for (std::size_t i = 0; i < t.attempt_labels->size(); ++i) {
      json a = json::object();
      a["label"] = std::string(AttemptLabelName((*t.attempt_labels)[i]));
      const auto& link = t.prompt_links ? (*t.prompt_links)[i] : std::nullopt;
      a["prompt_index"] = link ? json(*link) : json(nullptr);
      attempts.push_back(std::move(a));
    }
    out["attempts"] = std::move(attempts);
  }
  return out;
}

}  // namespace

std::vector<CorpusRecord> ParseCorpus(std::string_view text,
                                      const CorpusLoadOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(LineColumn(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError("document", "top level must be an object");

  const json& version = Require(doc, "version", "document");
  if (!version.is_number_integer()) throw ParseError("document.version", "expected an integer");
  if (version.get<long>() != kCorpusSchemaVersion) {
    throw SchemaVersionMismatchError(version.get<long>(), kCorpusSchemaVersion);
  }
  const json& records = Require(doc, "records", "document");
  if (!records.is_array()) throw ParseError("document.records", "expected an array");

  std::vector<CorpusRecord> out;
  out.reserve(records.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "records[" + std::to_string(i) + "]";
    const json& r = records[i];
    if (!r.is_object()) throw ParseError(path, "expected an object");

    CorpusRecord rec;
    rec.id = RequireString(r, "id", path);
    if (rec.id.empty()) throw ParseError(path + ".id", "must not be empty");
    if (!seen.insert(rec.id).second) throw DuplicateIdError(rec.id);

    rec.prompt = NormalizeText(RequireString(r, "prompt", path), options.normalization);
    if (rec.prompt.empty()) throw ParseError(path + ".prompt", "normalizes to no words");

    rec.reference = ParseTranscript(Require(r, "reference", path), path + ".reference",
                                    options, rec.prompt.size(), true);

    if (auto h = r.find("hypotheses"); h != r.end() && !h->is_null()) {
      if (!h->is_object()) throw ParseError(path + ".hypotheses", "expected an object");
      for (const auto& [model, body] : h->items()) {
        rec.hypotheses.emplace(model, ParseTranscript(body, path + ".hypotheses." + model,
                                                      options, rec.prompt.size(), false));
      }
    }
    if (auto m = r.find("metadata"); m != r.end() && !m->is_null()) {
      if (!m->is_object()) throw ParseError(path + ".metadata", "expected an object");
      for (const auto& [k, v] : m->items()) {
        rec.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    if (auto a = OptionalString(r, "audio_ref", path)) rec.metadata["audio_ref"] = *a;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<CorpusRecord> LoadCorpus(const std::filesystem::path& path,
                                     const CorpusLoadOptions& options) {
  return ParseCorpus(ReadFile(path), options);
}

std::string SerializeCorpus(std::span<const CorpusRecord> records) {
  json doc = json::object();
  doc["version"] = kCorpusSchemaVersion;
  json arr = json::array();
  for (const auto& rec : records) {
    json r = json::object();
    r["id"] = rec.id;
    r["prompt"] = rec.prompt.Joined();
    r["reference"] = TranscriptToJson(rec.reference);
    json hyps = json::object();
    for (const auto& [model, t] : rec.hypotheses) hyps[model] = TranscriptToJson(t);
    r["hypotheses"] = std::move(hyps);
    if (!rec.metadata.empty()) r["metadata"] = rec.metadata;
    arr.push_back(std::move(r));
  }
  doc["records"] = std::move(arr);
  return doc.dump(2) + "\n";
}

EmbeddingProvider ParseEmbeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw MalformedLineError(1, "missing header");
  std::size_t count = 0;
  std::size_t dim = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> count >> dim) || (header >> extra) || dim == 0) {
      throw MalformedLineError(1, "header must be \"<count> <dim>\"");
    }
  }
  EmbeddingProvider emb(dim);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<std::string> raw;
    for (std::string v; fields >> v;) raw.push_back(std::move(v));
    if (raw.size() != dim) {
      throw DimensionMismatchError(line_no, "'" + word + "' has " + std::to_string(raw.size()) +
                                                " values, expected " + std::to_string(dim));
    }
    std::vector<double> vec(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const char* first = raw[i].data();
      const char* last = first + raw[i].size();
      auto [ptr, ec] = std::from_chars(first, last, vec[i]);
      if (ec != std::errc() || ptr != last) {
        throw MalformedLineError(line_no, "'" + raw[i] + "' is not a number");
      }
    }
    if (emb.Contains(word)) throw MalformedLineError(line_no, "duplicate word '" + word + "'");
    if (emb.size() == count) {
      throw MalformedLineError(line_no, "more entries than the declared " + std::to_string(count));
    }
    emb.Add(std::move(word), std::move(vec));
  }
  if (emb.size() != count) {
    throw MalformedLineError(line_no, "header declares " + std::to_string(count) +
                                          " entries, found " + std::to_string(emb.size()));
  }
  return emb;
}

EmbeddingProvider LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read embeddings " + path.string());
  return ParseEmbeddings(in);
}

void WriteEmbeddings(std::ostream& out, const EmbeddingProvider& emb) {
  out << emb.size() << ' ' << emb.dim() << '\n';
  char buf[64];
  for (const auto& word : emb.Vocabulary()) {
    out << word;
    const std::span<const double> vec = *emb.Lookup(word);
    for (double v : vec) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

HypothesisSource HypothesisSource::Parse(std::string_view spec, std::string model) {
  HypothesisSource src;
  src.model = std::move(model);
  if (spec.empty() || spec == "inline") {
    src.kind = Kind::kInline;
  } else if (spec.starts_with("dir:")) {
    src.kind = Kind::kDirectory;
    src.directory = std::filesystem::path(std::string(spec.substr(4)));
  } else if (spec.starts_with("http://")) {
    src.kind = Kind::kRemote;
    src.endpoint = std::string(spec);
  } else {
    throw std::invalid_argument("unrecognized hypothesis source '" + std::string(spec) +
                                "' (expected inline, dir:<path> or http://...)");
  }
  return src;
}

Transcript FetchHypothesis(const HypothesisSource& source, const CorpusRecord& record,
                           const FetchContext& ctx) {
  switch (source.kind) {
    case HypothesisSource::Kind::kInline: {
      auto it = record.hypotheses.find(source.model);
      if (it == record.hypotheses.end()) throw NotFoundError(record.id);
      return it->second;
    }
    case HypothesisSource::Kind::kDirectory: {
      const auto stem = record.id + "." + source.model;
      const auto text_path = source.directory / (stem + ".txt");
      std::error_code ec;
      if (!std::filesystem::is_regular_file(text_path, ec)) throw NotFoundError(record.id);
      Transcript t;
      t.words = NormalizeText(ReadFile(text_path), ctx.normalization);
      const auto phn_path = source.directory / (stem + ".phonemes.txt");
      if (std::filesystem::is_regular_file(phn_path, ec)) {
        t.phonemes = PhonemesToCgn(ReadFile(phn_path), source.phoneme_alphabet,
                                   ctx.normalization, ctx.ipa_to_cgn);
      }
      return t;
    }
    case HypothesisSource::Kind::kRemote: {
      std::optional<std::string> audio_ref;
      if (auto it = record.metadata.find("audio_ref"); it != record.metadata.end()) {
        audio_ref = it->second;
      }
      const RemoteTranscription r = RequestTranscription(source, record.id, audio_ref);
      Transcript t;
      t.words = NormalizeText(r.text, ctx.normalization);
      if (r.phonemes) {
        t.phonemes = PhonemesToCgn(*r.phonemes, source.phoneme_alphabet, ctx.normalization,
                                   ctx.ipa_to_cgn);
      }
      return t;
    }
  }
  throw std::logic_error("unknown hypothesis source kind");
}

std::map<std::string, Transcript> FetchHypotheses(const HypothesisSource& source,
                                                  std::span<const CorpusRecord> records,
                                                  std::size_t jobs,
                                                  const FetchContext& ctx) {
  std::vector<std::optional<Transcript>> results(records.size());
  std::vector<std::exception_ptr> failures(records.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&]() {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      if (failed) return;
      try {
        results[i] = FetchHypothesis(source, records[i], ctx);
      } catch (...) {
        failures[i] = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, records.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::map<std::string, Transcript> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.emplace(records[i].id, std::move(*results[i]));
  }
  return out;
}

}  // namespace oralread
