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

#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oralread::cli {

using nlohmann::json;

namespace {

template <typename T>
T Get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError("config " + where + "." + key + ": " + e.what());
  }
}

void CheckKeys(const json& obj, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!obj.is_object()) throw UsageError("config " + where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) throw UsageError("config " + where + ": unknown key '" + k + "'");
  }
}

void ApplyCosts(const json& obj, CostConfig& cost, const std::string& where) {
  CheckKeys(obj, {"sub", "ins", "del"}, where);
  if (obj.contains("sub")) cost.sub = Get<int>(obj, "sub", where);
  if (obj.contains("ins")) cost.ins = Get<int>(obj, "ins", where);
  if (obj.contains("del")) cost.del = Get<int>(obj, "del", where);
}

}  // namespace

const std::set<std::string>& KnownAnalyses() {
  static const std::set<std::string> kNames = {
      "wer", "per", "errors", "miscues", "attempts", "false_recognition", "confusions"};
  return kNames;
}

void RunConfig::Validate() const {
  try {
    classifier.Validate();
    cost.Validate();
    phoneme_cost.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (top_k == 0) throw UsageError("top-k must be at least 1");
  if (jobs == 0) throw UsageError("jobs must be at least 1");
  if (level != "word" && level != "phoneme") {
    throw UsageError("level must be 'word' or 'phoneme'");
  }
  for (const auto& a : analyses) {
    if (!KnownAnalyses().contains(a)) throw UsageError("unknown analysis '" + a + "'");
  }
  for (const auto& f : report_formats) {
    if (f != "json" && f != "tsv" && f != "txt") {
      throw UsageError("unknown report format '" + f + "'");
    }
  }
  if (remote_retries < 0) throw UsageError("remote retries must be non-negative");
  if (remote_timeout_ms <= 0) throw UsageError("remote timeout must be positive");
}

InjectionSpec ParseInjectionCounts(const std::string& text) {
  InjectionSpec spec;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("injection count '" + item + "' is not CATEGORY=N");
    }
    const std::string name = item.substr(0, eq);
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      const long v = std::stol(item.substr(eq + 1), &used);
      if (v < 0 || used != item.size() - eq - 1) throw std::invalid_argument(item);
      n = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw UsageError("injection count '" + item + "' is not a non-negative integer");
    }
    if (name == "restart" || name == "restarts") {
      spec.restarts = n;
      continue;
    }
    auto label = ParseMiscueLabel(name);
    if (!label || *label == MiscueLabel::kRestart) {
      throw UsageError("unknown miscue category '" + name + "'");
    }
    spec.counts[*label] = n;
  }
  return spec;
}

RunConfig LoadRunConfig(const std::filesystem::path& path, RunConfig cfg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("config file " + path.string() + ": " + e.what());
  }
  CheckKeys(doc,
            {"corpus", "models", "source", "out", "embeddings", "phoneme_map", "classifier",
             "cost", "phoneme_cost", "normalization", "missing_embeddings",
             "report_formats", "analyses", "level", "top_k", "seed", "jobs", "remote",
             "inject"},
            "");
  // Relative paths in the config resolve against the config file location.
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  if (doc.contains("corpus")) cfg.corpus = resolve(Get<std::string>(doc, "corpus", ""));
  if (doc.contains("models")) cfg.models = Get<std::vector<std::string>>(doc, "models", "");
  if (doc.contains("source")) {
    cfg.source = Get<std::string>(doc, "source", "");
    if (cfg.source.starts_with("dir:")) cfg.source = "dir:" + resolve(cfg.source.substr(4)).string();
  }
  if (doc.contains("out")) cfg.out = resolve(Get<std::string>(doc, "out", ""));
  if (doc.contains("embeddings")) cfg.embeddings = resolve(Get<std::string>(doc, "embeddings", ""));
  if (doc.contains("phoneme_map")) cfg.phoneme_map = resolve(Get<std::string>(doc, "phoneme_map", ""));
  if (doc.contains("classifier")) {
    const json& c = doc["classifier"];
    CheckKeys(c, {"ortho_threshold", "sem_threshold", "restart_window", "ngram_order",
                  "lexicon_gate"},
              ".classifier");
    auto& k = cfg.classifier;
    if (c.contains("ortho_threshold")) k.ortho_threshold = Get<double>(c, "ortho_threshold", ".classifier");
    if (c.contains("sem_threshold")) k.sem_threshold = Get<double>(c, "sem_threshold", ".classifier");
    if (c.contains("restart_window")) k.restart_window = Get<std::size_t>(c, "restart_window", ".classifier");
    if (c.contains("ngram_order")) k.ngram_order = Get<std::size_t>(c, "ngram_order", ".classifier");
    if (c.contains("lexicon_gate")) k.lexicon_gate = Get<bool>(c, "lexicon_gate", ".classifier");
  }
  if (doc.contains("cost")) ApplyCosts(doc["cost"], cfg.cost, ".cost");
  if (doc.contains("phoneme_cost")) ApplyCosts(doc["phoneme_cost"], cfg.phoneme_cost, ".phoneme_cost");
  if (doc.contains("normalization")) {
    const json& n = doc["normalization"];
    CheckKeys(n, {"punctuation", "cue_markers", "cue_prefixes", "convert_numerals",
                  "preserve_apostrophes"},
              ".normalization");
    auto& nc = cfg.normalization;
    if (n.contains("punctuation")) {
      // A string whose every code point is punctuation.
      nc.punctuation.clear();
      for (auto& cp : SplitCodePoints(Get<std::string>(n, "punctuation", ".normalization"))) {
        nc.punctuation.insert(std::move(cp));
      }
    }
    if (n.contains("cue_markers")) {
      auto v = Get<std::vector<std::string>>(n, "cue_markers", ".normalization");
      nc.cue_markers = {v.begin(), v.end()};
      if (nc.cue_markers.contains("")) throw UsageError("cue markers must be non-empty");
    }
    if (n.contains("cue_prefixes")) {
      nc.cue_prefixes = Get<std::vector<std::string>>(n, "cue_prefixes", ".normalization");
    }
    if (n.contains("convert_numerals")) nc.convert_numerals = Get<bool>(n, "convert_numerals", ".normalization");
    if (n.contains("preserve_apostrophes")) nc.preserve_apostrophes = Get<bool>(n, "preserve_apostrophes", ".normalization");
  }
  if (doc.contains("missing_embeddings")) {
    const auto v = Get<std::string>(doc, "missing_embeddings", "");
    if (v == "error") {
      cfg.missing_embeddings = MissingEmbeddings::kError;
    } else if (v == "degrade") {
      cfg.missing_embeddings = MissingEmbeddings::kDegrade;
    } else {
      throw UsageError("config .missing_embeddings: expected \"error\" or \"degrade\"");
    }
  }
  if (doc.contains("report_formats")) {
    auto v = Get<std::vector<std::string>>(doc, "report_formats", "");
    cfg.report_formats = {v.begin(), v.end()};
  }
  if (doc.contains("analyses")) {
    auto v = Get<std::vector<std::string>>(doc, "analyses", "");
    cfg.analyses = {v.begin(), v.end()};
  }
  if (doc.contains("level")) cfg.level = Get<std::string>(doc, "level", "");
  if (doc.contains("top_k")) cfg.top_k = Get<std::size_t>(doc, "top_k", "");
  if (doc.contains("seed")) cfg.seed = Get<std::uint64_t>(doc, "seed", "");
  if (doc.contains("jobs")) cfg.jobs = Get<std::size_t>(doc, "jobs", "");
  if (doc.contains("remote")) {
    const json& r = doc["remote"];
    CheckKeys(r, {"retries", "timeout_ms", "phoneme_alphabet"}, ".remote");
    if (r.contains("retries")) cfg.remote_retries = Get<int>(r, "retries", ".remote");
    if (r.contains("timeout_ms")) cfg.remote_timeout_ms = Get<int>(r, "timeout_ms", ".remote");
    if (r.contains("phoneme_alphabet")) {
      auto a = ParseAlphabet(Get<std::string>(r, "phoneme_alphabet", ".remote"));
      if (!a) throw UsageError("config .remote.phoneme_alphabet: expected \"ipa\" or \"cgn\"");
      cfg.remote_alphabet = *a;
    }
  }
  if (doc.contains("inject")) {
    const json& j = doc["inject"];
    if (!j.is_object()) throw UsageError("config .inject: expected an object");
    std::string joined;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_number_unsigned()) throw UsageError("config .inject." + k + ": expected a count");
      joined += k + "=" + std::to_string(v.get<std::size_t>()) + ",";
    }
    cfg.injection = ParseInjectionCounts(joined);
  }
  return cfg;
}

}  // namespace oralread::cli
