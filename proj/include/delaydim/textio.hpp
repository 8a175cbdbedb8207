// Copyright 2026 The delaydim Authors
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

#include <map>
#include <string>
#include <vector>

namespace delaydim {

// Splits on commas, semicolons, tabs and spaces; empty fields are dropped.
std::vector<std::string> split_fields(const std::string& line);

// Full-token parse; leading '+' accepted.
bool parse_double(const std::string& token, double& value);

std::string strip_comment(const std::string& line);

// key = value (or key: value) per line, '#' comments. Later keys win.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_keyvalue_file(const std::string& path);
KeyValues parse_keyvalue(const std::string& text, const std::string& source = "<text>");

}  // namespace delaydim
