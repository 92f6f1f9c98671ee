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
#include <string>
#include <string_view>
#include <vector>

namespace oralread::utf8 {

// Decodes UTF-8 into code points. Malformed bytes are skipped.
std::vector<char32_t> Decode(std::string_view text);

void Append(std::string& out, char32_t cp);
std::string Encode(char32_t cp);
std::string Encode(const std::vector<char32_t>& cps);

// Simple case folding for Latin scripts (Basic Latin, Latin-1 Supplement,
// Latin Extended-A) and Greek capitals; other code points pass through.
char32_t ToLower(char32_t cp);

bool IsSpace(char32_t cp);

}  // namespace oralread::utf8
