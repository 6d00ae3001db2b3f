// Copyright 2026 The sl3hecke Authors
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

// Sectioned CSV documents written by the command line tool:
//
//   # key = value        run configuration, echoed for provenance
//   key = value          result summary
//   [section]            named table: header row, then data rows
//
// Fields are quoted when they contain commas, quotes or surrounding spaces.

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sl3cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const Table&) const = default;
};

struct Document {
  KeyValues config;
  KeyValues summary;
  std::vector<Table> tables;
  bool operator==(const Document&) const = default;
};

std::string csv_field(const std::string& s);
std::string emit_csv(const Document& d);
// Throws std::runtime_error on malformed input.
Document parse_csv(const std::string& text);

}  // namespace sl3cli
