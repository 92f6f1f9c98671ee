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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "oralread/align.hpp"
#include "oralread/analysis.hpp"
#include "oralread/errors.hpp"
#include "oralread/miscue.hpp"
#include "oralread/normalize.hpp"

namespace {

using oralread::WordSeq;

std::vector<std::string> RandomWords(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> kVocab = {"de", "kat", "zit", "op", "mat", "huis",
                                                  "groot", "boom", "vis", "lopen", "school"};
  std::mt19937_64 rng(seed);
  std::vector<std::string> out(n);
  for (auto& w : out) w = kVocab[rng() % kVocab.size()];
  return out;
}

void BM_Align(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ref = RandomWords(n, 1);
  const auto hyp = RandomWords(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(oralread::Align(ref, hyp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Align)->RangeMultiplier(4)->Range(8, 512)->Complexity(benchmark::oNSquared);

void BM_StringCosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(oralread::StringCosine("voorleesboekje", "voorlezen", n));
  }
}
BENCHMARK(BM_StringCosine)->Arg(1)->Arg(2)->Arg(3);

void BM_NormalizeText(benchmark::State& state) {
  const oralread::NormalizationConfig cfg;
  const std::string text = "Op 21 juni liep de grote kat (ggg) naar het huis-van-de-buren, "
                           "en zag er 1200 vogels!";
  for (auto _ : state) benchmark::DoNotOptimize(oralread::NormalizeText(text, cfg));
}
BENCHMARK(BM_NormalizeText);

// One record through alignment, extraction, classification and matching.
void BM_RecordPipeline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto prompt_words = RandomWords(n, 3);
  auto said = prompt_words;
  for (std::size_t i = 0; i < said.size(); i += 7) said[i] += "je";
  const WordSeq prompt = WordSeq::FromNorms(prompt_words);
  const oralread::ClassifierConfig cfg;
  for (auto _ : state) {
    const auto a = oralread::Align(prompt_words, said);
    const auto errors = oralread::ExtractErrorPairs(a, prompt_words, said);
    const auto labels = oralread::ClassifyAll(errors, prompt, cfg, nullptr);
    benchmark::DoNotOptimize(oralread::EvaluateMiscues(labels, labels));
  }
}
BENCHMARK(BM_RecordPipeline)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
