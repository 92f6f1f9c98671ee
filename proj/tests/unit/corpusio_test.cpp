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

#include <gtest/gtest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include <httplib.h>

#include <json.hpp>

#include "fixture.hpp"
#include "oralread/corpusio.hpp"

namespace oralread {
namespace {

using testing::TempDir;
using testing::WriteFile;

constexpr const char* kMinimal = R"({
  "version": 1,
  "records": [
    {
      "id": "r1",
      "prompt": "De grote kat zit op de mat.",
      "reference": {
        "text": "de goot kat zit op de mat",
        "phonemes": "d @ G o: t k A t",
        "attempts": [
          {"label": "correct", "prompt_index": 0},
          {"label": "incorrect", "prompt_index": 1},
          {"label": "correct", "prompt_index": 2},
          {"label": "correct", "prompt_index": 3},
          {"label": "correct", "prompt_index": 4},
          {"label": "correct", "prompt_index": 5},
          {"label": "correct", "prompt_index": null}
        ]
      },
      "hypotheses": {
        "asr": {"text": "De groot kat zit op de mat", "phonemes": "d ə ɣ r oː t", "alphabet": "ipa"}
      },
      "metadata": {"age": 8, "speaker": "s01"},
      "audio_ref": "s01/r1.wav"
    }
  ]
})";

TEST(LoadCorpus, MinimalRecord) {
  const auto records = ParseCorpus(kMinimal);
  ASSERT_EQ(records.size(), 1u);
  const CorpusRecord& r = records[0];
  EXPECT_EQ(r.id, "r1");
  EXPECT_EQ(r.prompt.Joined(), "de grote kat zit op de mat");
  ASSERT_TRUE(r.reference.attempt_labels.has_value());
  EXPECT_EQ((*r.reference.attempt_labels)[1], AttemptLabel::kIncorrectWord);
  EXPECT_EQ((*r.reference.prompt_links)[1], 1u);
  EXPECT_FALSE((*r.reference.prompt_links)[6].has_value());
  const Transcript& h = r.hypotheses.at("asr");
  EXPECT_EQ(h.words.Joined(), "de groot kat zit op de mat");
  ASSERT_TRUE(h.phonemes.has_value());
  EXPECT_EQ(h.phonemes->alphabet(), PhonemeAlphabet::kCgn);
  EXPECT_EQ(h.phonemes->Joined(), "d @ G r o: t");
  EXPECT_EQ(r.metadata.at("age"), "8");
  EXPECT_EQ(r.metadata.at("audio_ref"), "s01/r1.wav");
}

std::string WithRecords(const std::string& records) {
  return R"({"version": 1, "records": [)" + records + "]}";
}

TEST(LoadCorpus, DuplicateId) {
  const std::string doc = WithRecords(
      R"({"id": "a", "prompt": "de kat", "reference": {"text": "de kat"}},
         {"id": "a", "prompt": "de hond", "reference": {"text": "de hond"}})");
  EXPECT_THROW(ParseCorpus(doc), DuplicateIdError);
}

TEST(LoadCorpus, ShortAttemptListIsAParseError) {
  const std::string doc = WithRecords(
      R"({"id": "a", "prompt": "de kat", "reference": {"text": "de kat",
          "attempts": [{"label": "correct", "prompt_index": 0}]}})");
  try {
    ParseCorpus(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.where(), "records[0].reference.attempts");
  }
}

TEST(LoadCorpus, SchemaErrors) {
  EXPECT_THROW(ParseCorpus(R"({"version": 2, "records": []})"), SchemaVersionMismatchError);
  EXPECT_THROW(ParseCorpus(R"({"records": []})"), ParseError);
  EXPECT_THROW(ParseCorpus(WithRecords(R"({"id": "a", "prompt": "ggg", "reference": {"text": ""}})")),
               ParseError);
  EXPECT_THROW(ParseCorpus(WithRecords(R"({"id": "a", "prompt": "de", "reference": {"text": "de",
          "attempts": [{"label": "correct", "prompt_index": 4}]}})")),
               ParseError);
  EXPECT_THROW(ParseCorpus(WithRecords(R"({"id": "a", "prompt": "de", "reference": {"text": "de",
          "attempts": [{"label": "maybe"}]}})")),
               ParseError);
  EXPECT_THROW(ParseCorpus(WithRecords(R"({"id": "a", "prompt": "de", "reference": {"text": "de",
          "phonemes": "Q"}})")),
               ParseError);
}

TEST(LoadCorpus, SyntaxErrorsCarryLineAndColumn) {
  try {
    ParseCorpus("{\n  \"version\": 1,\n  \"records\": [ oops ]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("line 3"), std::string::npos) << e.where();
  }
}

TEST(LoadCorpus, MissingFileIsACorpusError) {
  EXPECT_THROW(LoadCorpus("/nonexistent/corpus.json"), CorpusError);
}

TEST(SerializeCorpus, RoundTripsNormalizedFields) {
  const auto first = ParseCorpus(kMinimal);
  const std::string text = SerializeCorpus(first);
  const auto second = ParseCorpus(text);
  ASSERT_EQ(second.size(), first.size());
  EXPECT_EQ(second[0].prompt.norms(), first[0].prompt.norms());
  EXPECT_EQ(second[0].reference.words.norms(), first[0].reference.words.norms());
  EXPECT_EQ(second[0].reference.phonemes, first[0].reference.phonemes);
  EXPECT_EQ(second[0].reference.attempt_labels, first[0].reference.attempt_labels);
  EXPECT_EQ(second[0].reference.prompt_links, first[0].reference.prompt_links);
  EXPECT_EQ(second[0].hypotheses.at("asr").phonemes, first[0].hypotheses.at("asr").phonemes);
  EXPECT_EQ(second[0].metadata, first[0].metadata);
  EXPECT_EQ(SerializeCorpus(second), text);
}

TEST(Embeddings, ParsesHeaderAndVectors) {
  std::istringstream in("2 3\nkat 1 0 0.5\nhond -1 2e-3 0\n");
  const EmbeddingProvider emb = ParseEmbeddings(in);
  EXPECT_EQ(emb.size(), 2u);
  EXPECT_EQ(emb.dim(), 3u);
  const auto v = emb.Lookup("hond");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ((*v)[0], -1.0);
  EXPECT_EQ((*v)[1], 2e-3);
}

TEST(Embeddings, Errors) {
  std::istringstream short_line("2 3\nkat 1 0\nhond 1 2 3\n");
  EXPECT_THROW(ParseEmbeddings(short_line), DimensionMismatchError);
  std::istringstream bad_number("1 2\nkat 1 x\n");
  EXPECT_THROW(ParseEmbeddings(bad_number), MalformedLineError);
  std::istringstream bad_header("two 3\n");
  EXPECT_THROW(ParseEmbeddings(bad_header), MalformedLineError);
  std::istringstream count("3 1\na 1\nb 2\n");
  EXPECT_THROW(ParseEmbeddings(count), MalformedLineError);
  std::istringstream dup("2 1\na 1\na 2\n");
  EXPECT_THROW(ParseEmbeddings(dup), MalformedLineError);
}

TEST(Embeddings, WriteThenReadIsBitExact) {
  EmbeddingProvider emb(2);
  emb.Add("a", {0.1, 1.0 / 3.0});
  emb.Add("b", {-2.5e-17, 12345.678});
  std::stringstream buf;
  WriteEmbeddings(buf, emb);
  const EmbeddingProvider back = ParseEmbeddings(buf);
  for (const auto& w : emb.Vocabulary()) {
    const auto x = emb.Lookup(w), y = back.Lookup(w);
    ASSERT_TRUE(y.has_value());
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ((*x)[i], (*y)[i]);
  }
}

TEST(HypothesisSource, ParsesSpecs) {
  EXPECT_EQ(HypothesisSource::Parse("inline", "m").kind, HypothesisSource::Kind::kInline);
  const auto dir = HypothesisSource::Parse("dir:/tmp/x", "m");
  EXPECT_EQ(dir.kind, HypothesisSource::Kind::kDirectory);
  EXPECT_EQ(dir.directory, "/tmp/x");
  EXPECT_EQ(HypothesisSource::Parse("http://localhost:1/t", "m").kind,
            HypothesisSource::Kind::kRemote);
  EXPECT_THROW(HypothesisSource::Parse("ftp://x", "m"), std::invalid_argument);
}

TEST(FetchHypothesis, Directory) {
  TempDir tmp;
  WriteFile(tmp / "r1.whisper.txt", "De kat, zit!\n");
  WriteFile(tmp / "r1.whisper.phonemes.txt", "d ə k ɑ t\n");
  const auto records = ParseCorpus(kMinimal);
  const auto src = HypothesisSource::Parse("dir:" + tmp.path().string(), "whisper");
  const Transcript t = FetchHypothesis(src, records[0]);
  EXPECT_EQ(t.words.Joined(), "de kat zit");
  ASSERT_TRUE(t.phonemes.has_value());
  EXPECT_EQ(t.phonemes->Joined(), "d @ k A t");
  const auto missing = HypothesisSource::Parse("dir:" + tmp.path().string(), "other");
  EXPECT_THROW(FetchHypothesis(missing, records[0]), NotFoundError);
}

TEST(FetchHypothesis, InlineMissingModel) {
  const auto records = ParseCorpus(kMinimal);
  EXPECT_THROW(FetchHypothesis(HypothesisSource::Parse("inline", "nope"), records[0]),
               NotFoundError);
}

// Local transcription service with a scripted reply.
class FakeService {
 public:
  explicit FakeService(std::function<void(const httplib::Request&, httplib::Response&)> reply) {
    server_.Post("/transcribe", [this, reply](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      reply(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/transcribe";
  }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> hits_{0};
};

HypothesisSource RemoteSource(const std::string& url, int retries) {
  HypothesisSource src = HypothesisSource::Parse(url, "asr");
  src.retries = retries;
  src.timeout_ms = 5000;
  return src;
}

TEST(FetchHypothesis, RemoteSuccessSendsIdAndAudioRef) {
  std::string seen_id, seen_audio;
  FakeService svc([&](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body);
    seen_id = body.at("id").get<std::string>();
    seen_audio = body.at("audio_ref").get<std::string>();
    res.set_content(R"({"text": "De KAT zit.", "phonemes": "d ə"})", "application/json");
  });
  const auto records = ParseCorpus(kMinimal);
  const Transcript t = FetchHypothesis(RemoteSource(svc.url(), 2), records[0]);
  EXPECT_EQ(t.words.Joined(), "de kat zit");
  EXPECT_EQ(t.phonemes->Joined(), "d @");
  EXPECT_EQ(seen_id, "r1");
  EXPECT_EQ(seen_audio, "s01/r1.wav");
  EXPECT_EQ(svc.hits(), 1);
}

TEST(FetchHypothesis, Remote5xxRetriesUpToTheLimit) {
  FakeService svc([](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
    res.set_content("busy", "text/plain");
  });
  const auto records = ParseCorpus(kMinimal);
  try {
    FetchHypothesis(RemoteSource(svc.url(), 2), records[0]);
    FAIL() << "expected RemoteError";
  } catch (const RemoteError& e) {
    EXPECT_EQ(e.status(), 503);
  }
  EXPECT_EQ(svc.hits(), 3);
}

TEST(FetchHypothesis, Remote4xxIsNotRetried) {
  FakeService svc([](const httplib::Request&, httplib::Response& res) { res.status = 404; });
  const auto records = ParseCorpus(kMinimal);
  EXPECT_THROW(FetchHypothesis(RemoteSource(svc.url(), 2), records[0]), RemoteError);
  EXPECT_EQ(svc.hits(), 1);
}

TEST(FetchHypothesis, RemoteMalformedBody) {
  FakeService svc([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"words": []})", "application/json");
  });
  const auto records = ParseCorpus(kMinimal);
  EXPECT_THROW(FetchHypothesis(RemoteSource(svc.url(), 0), records[0]), RemoteError);
}

TEST(FetchHypothesis, RemoteUnreachableIsATransportError) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  const auto records = ParseCorpus(kMinimal);
  const auto src =
      RemoteSource("http://127.0.0.1:" + std::to_string(port) + "/transcribe", 1);
  EXPECT_THROW(FetchHypothesis(src, records[0]), TransportError);
}

TEST(FetchHypotheses, AllOrNothing) {
  TempDir tmp;
  std::string recs;
  for (int i = 0; i < 6; ++i) {
    if (i) recs += ",";
    recs += R"({"id": "r)" + std::to_string(i) +
            R"(", "prompt": "de kat", "reference": {"text": "de kat"}})";
    if (i != 4) WriteFile(tmp / ("r" + std::to_string(i) + ".m.txt"), "de kat");
  }
  const auto records = ParseCorpus(WithRecords(recs));
  const auto src = HypothesisSource::Parse("dir:" + tmp.path().string(), "m");
  try {
    FetchHypotheses(src, records, 3);
    FAIL() << "expected NotFoundError";
  } catch (const NotFoundError& e) {
    EXPECT_EQ(e.record_id(), "r4");
  }
  WriteFile(tmp / "r4.m.txt", "de kat");
  EXPECT_EQ(FetchHypotheses(src, records, 3).size(), 6u);
}

}  // namespace
}  // namespace oralread
