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

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "oralread/log.hpp"
#include "pipeline.hpp"
#include "report.hpp"

namespace oralread::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Builds the command's output under a hidden staging directory and moves it
// into place only once every file has been written.
class OutputDir {
 public:
  OutputDir(const fs::path& out, const std::string& command)
      : final_(out / command), staging_(out / ("." + command + ".partial")) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw DataError("cannot create output directory " + out.string() + ": " + ec.message());
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) throw DataError("cannot create " + staging_.string() + ": " + ec.message());
  }
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;

  ~OutputDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }

  void Write(const fs::path& name, const std::string& content) {
    const fs::path path = staging_ / name;
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw DataError("cannot write " + (final_ / name).string());
  }

  void Commit() {
    std::error_code ec;
    fs::remove_all(final_, ec);
    if (ec) throw DataError("cannot replace " + final_.string() + ": " + ec.message());
    fs::rename(staging_, final_, ec);
    if (ec) throw DataError("cannot move output into " + final_.string() + ": " + ec.message());
    committed_ = true;
  }

  const fs::path& path() const { return final_; }

 private:
  fs::path final_;
  fs::path staging_;
  bool committed_ = false;
};

// Record ids and model keys are free text; keep file names portable.
std::string SafeName(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out.front() == '.') out.insert(out.begin(), '_');
  return out;
}

struct Inputs {
  std::vector<CorpusRecord> records;
  std::optional<PhonemeMapping> mapping;
  std::optional<EmbeddingProvider> embeddings;
  std::vector<std::string> models;
};

Inputs LoadInputs(const RunConfig& cfg, bool want_models) {
  if (cfg.corpus.empty()) throw UsageError("no corpus given (use --corpus or the config file)");
  Inputs in;
  if (cfg.phoneme_map) in.mapping = PhonemeMapping::Load(*cfg.phoneme_map);
  CorpusLoadOptions opts;
  opts.normalization = cfg.normalization;
  opts.ipa_to_cgn = in.mapping ? &*in.mapping : nullptr;
  in.records = LoadCorpus(cfg.corpus, opts);
  if (in.records.empty()) throw DataError("corpus " + cfg.corpus.string() + " has no records");
  if (cfg.embeddings) {
    try {
      in.embeddings = LoadEmbeddings(*cfg.embeddings);
    } catch (const EmbeddingFormatError& e) {
      throw DataError("embeddings " + cfg.embeddings->string() + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
  }
  if (!want_models) return in;
  if (!cfg.models.empty()) {
    std::set<std::string> seen;
    for (const auto& m : cfg.models) {
      if (m.empty()) throw UsageError("empty model key");
      if (seen.insert(m).second) in.models.push_back(m);
    }
  } else if (cfg.source == "inline") {
    std::set<std::string> all;
    for (const auto& r : in.records) {
      for (const auto& [m, t] : r.hypotheses) all.insert(m);
    }
    in.models.assign(all.begin(), all.end());
  } else {
    throw UsageError("--model is required with a non-inline hypothesis source");
  }
  if (in.models.empty()) {
    throw DataError("corpus " + cfg.corpus.string() + " has no hypotheses to evaluate");
  }
  return in;
}

std::vector<Transcript> HypothesesFor(const RunConfig& cfg, const Inputs& in,
                                      const std::string& model) {
  HypothesisSource source;
  try {
    source = HypothesisSource::Parse(cfg.source, model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  source.retries = cfg.remote_retries;
  source.timeout_ms = cfg.remote_timeout_ms;
  source.phoneme_alphabet = cfg.remote_alphabet;
  FetchContext ctx;
  ctx.normalization = cfg.normalization;
  ctx.ipa_to_cgn = in.mapping ? &*in.mapping : nullptr;
  std::map<std::string, Transcript> fetched;
  try {
    fetched = FetchHypotheses(source, in.records, cfg.jobs, ctx);
  } catch (const NotFoundError& e) {
    throw DataError("record '" + e.record_id() + "' has no hypothesis for model '" + model + "'");
  }
  std::vector<Transcript> out;
  out.reserve(in.records.size());
  for (const auto& r : in.records) out.push_back(std::move(fetched.at(r.id)));
  return out;
}

bool HasPhonemes(const Inputs& in, const std::vector<std::vector<Transcript>>& hyps) {
  for (std::size_t i = 0; i < in.records.size(); ++i) {
    if (!in.records[i].reference.phonemes) return false;
    for (const auto& per_model : hyps) {
      if (!per_model[i].phonemes) return false;
    }
  }
  return true;
}

bool HasAttempts(const Inputs& in) {
  for (const auto& r : in.records) {
    if (!r.reference.attempt_labels) return false;
  }
  return true;
}

Analyses ResolveAnalyses(const RunConfig& cfg, const Inputs& in,
                         const std::vector<std::vector<Transcript>>& hyps) {
  const bool phonemes = HasPhonemes(in, hyps);
  const bool attempts = HasAttempts(in);
  Analyses a;
  if (cfg.analyses.empty()) {
    a.wer = a.errors = a.miscues = a.confusions = true;
    a.per = phonemes;
    a.attempts = a.false_recognition = attempts;
    return a;
  }
  auto want = [&](const char* name) { return cfg.analyses.contains(name); };
  a.wer = want("wer");
  a.per = want("per");
  a.errors = want("errors");
  a.miscues = want("miscues");
  a.attempts = want("attempts");
  a.false_recognition = want("false_recognition");
  a.confusions = want("confusions");
  if (a.per && !phonemes) {
    throw DataError("analysis 'per' needs phoneme transcriptions on every reference and hypothesis");
  }
  if ((a.attempts || a.false_recognition) && !attempts) {
    throw DataError(std::string("analysis '") + (a.attempts ? "attempts" : "false_recognition") +
                    "' needs attempt labels on every reference");
  }
  return a;
}

void CheckClassifierResources(const RunConfig& cfg, const Inputs& in) {
  if (cfg.classifier.lexicon_gate && !in.embeddings) {
    throw UsageError("the lexicon gate needs an embeddings file");
  }
}

// Fails or warns once when substitutions were left without a semantic score.
void CheckSemanticCoverage(const RunConfig& cfg, std::span<const RecordResult> results) {
  for (const auto& r : results) {
    if (!r.wanted_semantic) continue;
    if (cfg.missing_embeddings == MissingEmbeddings::kError) {
      throw DataError("substitutions need semantic scoring but no embeddings were given "
                      "(first in record '" + r.id + "'); pass --embeddings or set "
                      "missing_embeddings to \"degrade\"");
    }
    LogWarning("no embeddings loaded: substitutions that are not orthographically similar "
               "are labelled O");
    return;
  }
}

std::vector<RecordResult> RunRecords(const RunConfig& cfg, const Inputs& in,
                                     const std::string& model,
                                     const std::vector<Transcript>& hyps, bool classify) {
  std::vector<RecordResult> results(in.records.size());
  Resources res;
  res.embeddings = in.embeddings ? &*in.embeddings : nullptr;
  ParallelFor(in.records.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = DetectRecord(in.records[i], model, hyps[i], cfg);
    if (classify) ClassifyRecord(results[i], in.records[i], cfg, res);
  });
  return results;
}

// Record outputs are keyed by sanitized names; refuse to let two collide.
std::string RecordFileName(const std::string& id, const std::string& model,
                           std::set<std::string>& used) {
  std::string name = SafeName(id) + "." + SafeName(model) + ".json";
  if (!used.insert(name).second) {
    throw DataError("record '" + id + "' maps to an output file name already in use");
  }
  return name;
}

int CmdDetectOrClassify(const RunConfig& cfg, bool classify, std::ostream& out) {
  Inputs in = LoadInputs(cfg, true);
  if (classify) CheckClassifierResources(cfg, in);
  OutputDir dir(cfg.out, classify ? "classify" : "detect");
  std::set<std::string> used;
  for (const auto& model : in.models) {
    const auto hyps = HypothesesFor(cfg, in, model);
    const auto results = RunRecords(cfg, in, model, hyps, classify);
    if (classify) CheckSemanticCoverage(cfg, results);
    for (const auto& r : results) {
      dir.Write(RecordFileName(r.id, model, used),
                classify ? ClassifyDocument(r) : DetectDocument(r));
    }
  }
  dir.Commit();
  out << "wrote " << dir.path().string() << "\n";
  return kExitOk;
}

int CmdEvaluate(const RunConfig& cfg, std::ostream& out) {
  Inputs in = LoadInputs(cfg, true);
  std::vector<std::vector<Transcript>> hyps;
  for (const auto& model : in.models) hyps.push_back(HypothesesFor(cfg, in, model));
  const Analyses an = ResolveAnalyses(cfg, in, hyps);
  if (an.miscues) CheckClassifierResources(cfg, in);

  std::vector<ModelReport> reports;
  for (std::size_t m = 0; m < in.models.size(); ++m) {
    const auto results = RunRecords(cfg, in, in.models[m], hyps[m], an.miscues);
    if (an.miscues) CheckSemanticCoverage(cfg, results);
    ModelReport total;
    total.model = in.models[m];
    for (std::size_t i = 0; i < results.size(); ++i) {
      total += ScoreRecord(results[i], in.records[i], an);
    }
    reports.push_back(std::move(total));
  }

  OutputDir dir(cfg.out, "evaluate");
  const auto& formats = cfg.report_formats;
  if (formats.contains("json")) dir.Write("report.json", EvalReportJson(reports, an, cfg.top_k));
  if (formats.contains("tsv")) {
    if (an.wer || an.per || an.errors) dir.Write("word_level.tsv", WordLevelTsv(reports, an));
    if (an.errors) dir.Write("error_detection.tsv", ErrorDetectionTsv(reports));
    if (an.miscues) dir.Write("miscue_detection.tsv", MiscueDetectionTsv(reports));
    if (an.attempts) dir.Write("attempt_accuracy.tsv", AttemptsTsv(reports));
    if (an.false_recognition) dir.Write("false_recognition.tsv", FalseRecognitionTsv(reports));
    if (an.confusions) {
      for (const auto& r : reports) {
        dir.Write(fs::path("confusions") / (SafeName(r.model) + ".word.tsv"),
                  FormatConfusionTsv(r.word_confusions.TopK(cfg.top_k)));
        if (an.per) {
          dir.Write(fs::path("confusions") / (SafeName(r.model) + ".phoneme.tsv"),
                    FormatConfusionTsv(r.phoneme_confusions.TopK(cfg.top_k)));
        }
      }
    }
  }
  const std::string summary = SummaryText(reports, an, cfg.top_k);
  if (formats.contains("txt")) dir.Write("summary.txt", summary);
  dir.Commit();
  out << summary;
  return kExitOk;
}

int CmdConfusions(const RunConfig& cfg, std::ostream& out) {
  Inputs in = LoadInputs(cfg, true);
  const bool phoneme = cfg.level == "phoneme";
  OutputDir dir(cfg.out, "confusions");
  for (const auto& model : in.models) {
    const auto hyps = HypothesesFor(cfg, in, model);
    ConfusionTable table;
    for (std::size_t i = 0; i < in.records.size(); ++i) {
      const auto& rec = in.records[i];
      if (phoneme) {
        if (!rec.reference.phonemes || !hyps[i].phonemes) {
          throw DataError("phoneme confusions requested but record '" + rec.id +
                          "' has no phoneme transcription for model '" + model + "'");
        }
        table.Add(AlignTokens(rec.reference.phonemes->symbols(), hyps[i].phonemes->symbols(),
                              cfg.phoneme_cost));
      } else {
        table.Add(AlignTokens(rec.reference.words.norms(), hyps[i].words.norms(), cfg.cost));
      }
    }
    const std::string tsv = FormatConfusionTsv(table.TopK(cfg.top_k));
    dir.Write(SafeName(model) + "." + cfg.level + ".tsv", tsv);
    out << "# " << model << " (" << cfg.level << ")\n" << tsv;
  }
  dir.Commit();
  return kExitOk;
}

int CmdInject(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.embeddings) throw UsageError("inject needs --embeddings as its word lexicon");
  Inputs in = LoadInputs(cfg, false);
  std::vector<CorpusRecord> injected;
  ordered_json truth = ordered_json::array();
  for (std::size_t i = 0; i < in.records.size(); ++i) {
    const auto& rec = in.records[i];
    InjectionSpec spec = cfg.injection;
    spec.seed = cfg.seed + i;
    InjectionResult result;
    try {
      result = InjectMiscues(rec.prompt, spec, *in.embeddings, cfg.classifier);
    } catch (const std::runtime_error& e) {
      throw DataError("record '" + rec.id + "': " + e.what());
    }
    CorpusRecord out_rec;
    out_rec.id = rec.id;
    out_rec.prompt = rec.prompt;
    out_rec.reference = result.transcript;
    out_rec.hypotheses.emplace("injected", result.transcript);
    out_rec.metadata = rec.metadata;
    injected.push_back(std::move(out_rec));

    ordered_json labels = ordered_json::array();
    for (const auto& l : result.truth) {
      ordered_json o;
      o["kind"] = EditKindName(l.error.kind);
      o["location"] = l.error.location;
      o["label"] = MiscueLabelName(l.label);
      o["ref_token"] = l.error.ref_token ? ordered_json(*l.error.ref_token) : ordered_json(nullptr);
      o["hyp_token"] = l.error.hyp_token ? ordered_json(*l.error.hyp_token) : ordered_json(nullptr);
      labels.push_back(std::move(o));
    }
    truth.push_back({{"id", rec.id}, {"seed", spec.seed}, {"truth", std::move(labels)}});
  }
  ordered_json doc;
  doc["version"] = kReportVersion;
  doc["records"] = std::move(truth);

  OutputDir dir(cfg.out, "inject");
  dir.Write("corpus.json", SerializeCorpus(injected));
  dir.Write("truth.json", doc.dump(2) + "\n");
  dir.Commit();
  out << "wrote " << dir.path().string() << "\n";
  return kExitOk;
}

int CmdNormalize(const RunConfig& cfg, const std::vector<std::string>& texts,
                 std::ostream& out) {
  if (!cfg.corpus.empty()) {
    Inputs in = LoadInputs(cfg, false);
    OutputDir dir(cfg.out, "normalize");
    dir.Write("corpus.json", SerializeCorpus(in.records));
    dir.Commit();
    out << "wrote " << dir.path().string() << "\n";
    return kExitOk;
  }
  auto emit = [&](const std::string& line) {
    out << NormalizeText(line, cfg.normalization).Joined() << "\n";
  };
  if (!texts.empty()) {
    for (const auto& t : texts) emit(t);
  } else {
    std::string line;
    while (std::getline(std::cin, line)) emit(line);
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reading miscue detection and ASR error analysis", "oralread"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::string corpus, out_dir, embeddings, phoneme_map, source, level, inject, missing;
  std::vector<std::string> models, analyses, formats;
  std::size_t top_k = 0, jobs = 0;
  std::uint64_t seed = 0;
  bool verbose = false, quiet = false;

  app.add_option("--config", config_path, "JSON run configuration");
  auto* o_corpus = app.add_option("--corpus", corpus, "Corpus file");
  auto* o_model = app.add_option("--model", models, "Model key(s); default: all in the corpus")
                      ->delimiter(',');
  auto* o_out = app.add_option("--out", out_dir, "Output directory");
  auto* o_emb = app.add_option("--embeddings", embeddings, "word2vec text embeddings");
  auto* o_map = app.add_option("--phoneme-map", phoneme_map, "IPA to CGN mapping (TSV)");
  auto* o_topk = app.add_option("--top-k", top_k, "Rows per confusion table");
  auto* o_seed = app.add_option("--seed", seed, "Base seed for injection");
  auto* o_jobs = app.add_option("--jobs", jobs, "Records processed in parallel");
  auto* o_source = app.add_option("--source", source,
                                  "Hypothesis source: inline, dir:<path> or http://...");
  auto* o_level = app.add_option("--level", level, "Confusion level: word or phoneme");
  auto* o_inject = app.add_option("--inject", inject, "Injection counts, e.g. SS=2,OS=1,restart=1");
  auto* o_an = app.add_option("--analyses", analyses, "Analyses to run (comma separated)")
                   ->delimiter(',');
  auto* o_fmt = app.add_option("--formats", formats, "Report formats: json,tsv,txt")
                    ->delimiter(',');
  auto* o_missing = app.add_option("--missing-embeddings", missing,
                                   "error or degrade when embeddings are absent");
  app.add_flag("-v,--verbose", verbose, "Log progress");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  std::vector<std::string> texts;
  auto* detect = app.add_subcommand("detect", "Extract predicted and true reading errors");
  auto* classify = app.add_subcommand("classify", "Label errors with miscue categories");
  auto* evaluate = app.add_subcommand("evaluate", "Score detection and write reports");
  auto* confusions = app.add_subcommand("confusions", "Top-k recognition error tables");
  auto* inject_cmd = app.add_subcommand("inject", "Write a corpus with synthetic miscues");
  auto* normalize = app.add_subcommand("normalize", "Normalize text or a corpus");
  normalize->add_option("text", texts, "Text to normalize (default: stdin lines)");

  std::vector<const char*> argv = {"oralread"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  SetLogLevel(quiet ? LogLevel::kError : verbose ? LogLevel::kInfo : LogLevel::kWarning);

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = LoadRunConfig(config_path, cfg);
    if (o_corpus->count()) cfg.corpus = corpus;
    if (o_model->count()) cfg.models = models;
    if (o_out->count()) cfg.out = out_dir;
    if (o_emb->count()) cfg.embeddings = embeddings;
    if (o_map->count()) cfg.phoneme_map = phoneme_map;
    if (o_topk->count()) cfg.top_k = top_k;
    if (o_seed->count()) cfg.seed = seed;
    if (o_jobs->count()) cfg.jobs = jobs;
    if (o_source->count()) cfg.source = source;
    if (o_level->count()) cfg.level = level;
    if (o_inject->count()) cfg.injection = ParseInjectionCounts(inject);
    if (o_an->count()) cfg.analyses = {analyses.begin(), analyses.end()};
    if (o_fmt->count()) cfg.report_formats = {formats.begin(), formats.end()};
    if (o_missing->count()) {
      if (missing == "error") {
        cfg.missing_embeddings = MissingEmbeddings::kError;
      } else if (missing == "degrade") {
        cfg.missing_embeddings = MissingEmbeddings::kDegrade;
      } else {
        throw UsageError("--missing-embeddings must be 'error' or 'degrade'");
      }
    }
    cfg.Validate();

    if (*detect) return CmdDetectOrClassify(cfg, false, out);
    if (*classify) return CmdDetectOrClassify(cfg, true, out);
    if (*evaluate) return CmdEvaluate(cfg, out);
    if (*confusions) return CmdConfusions(cfg, out);
    if (*inject_cmd) return CmdInject(cfg, out);
    if (*normalize) return CmdNormalize(cfg, texts, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

int RunCli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace oralread::cli
