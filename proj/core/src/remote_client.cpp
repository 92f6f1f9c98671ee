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

#include "remote_client.hpp"

#include <httplib.h>

#include <json.hpp>

#include "oralread/log.hpp"

namespace oralread {
namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint SplitEndpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("invalid endpoint '" + url + "'");
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

RemoteTranscription RequestTranscription(const HypothesisSource& source,
                                         const std::string& record_id,
                                         const std::optional<std::string>& audio_ref) {
  const Endpoint ep = SplitEndpoint(source.endpoint);
  httplib::Client client(ep.base);
  const auto timeout_s = source.timeout_ms / 1000;
  const auto timeout_us = (source.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(timeout_s, timeout_us);
  client.set_read_timeout(timeout_s, timeout_us);
  client.set_write_timeout(timeout_s, timeout_us);

  nlohmann::json body = {{"id", record_id}};
  if (audio_ref) body["audio_ref"] = *audio_ref;
  const std::string payload = body.dump();

  const int attempts = 1 + std::max(0, source.retries);
  std::string last_transport_error;
  int last_status = 0;
  std::string last_body;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto res = client.Post(ep.path, payload, "application/json");
    if (!res) {
      last_transport_error = httplib::to_string(res.error());
      last_status = 0;
      LogWarning("transcription request for '" + record_id + "' failed: " +
                 last_transport_error);
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      nlohmann::json reply;
      try {
        reply = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw RemoteError(res->status, std::string("invalid response body: ") + e.what());
      }
      auto text = reply.find("text");
      if (!reply.is_object() || text == reply.end() || !text->is_string()) {
        throw RemoteError(res->status, "response body lacks a string 'text' field");
      }
      RemoteTranscription out{text->get<std::string>(), std::nullopt};
      if (auto ph = reply.find("phonemes"); ph != reply.end() && ph->is_string()) {
        out.phonemes = ph->get<std::string>();
      }
      return out;
    }
    last_status = res->status;
    last_body = res->body;
    if (res->status < 500) break;
    LogWarning("transcription service returned " + std::to_string(res->status) +
               " for '" + record_id + "'");
  }
  if (last_status != 0) throw RemoteError(last_status, last_body);
  throw TransportError("transcription request for '" + record_id +
                       "' failed: " + last_transport_error);
}

}  // namespace oralread
