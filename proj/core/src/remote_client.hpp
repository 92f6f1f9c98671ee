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

#include <optional>
#include <string>

#include "oralread/corpusio.hpp"

namespace oralread {

struct RemoteTranscription {
  std::string text;
  std::optional<std::string> phonemes;
};

// POSTs {"id", "audio_ref"?} as JSON to source.endpoint and reads
// {"text", "phonemes"?}. 5xx responses and transport failures are retried
// source.retries more times; 4xx responses are not retried.
RemoteTranscription RequestTranscription(const HypothesisSource& source,
                                         const std::string& record_id,
                                         const std::optional<std::string>& audio_ref);

}  // namespace oralread
