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

#include "table.hpp"

#include <sstream>
#include <stdexcept>

namespace sl3cli {

namespace {

constexpr const char* kSep = " = ";

void check_key(const std::string& k) {
  if (k.empty() || k.find(kSep) != std::string::npos || k.find('\n') != std::string::npos || k[0] == '#' ||
      k[0] == '[')
    throw std::runtime_error("unusable key '" + k + "'");
}

void check_value(const std::string& v) {
  if (v.find('\n') != std::string::npos) throw std::runtime_error("multi-line value");
}

std::string row_line(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  return out;
}

// Splits one CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  size_t i = 0;
  while (true) {
    cur.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      while (true) {
        if (i >= line.size()) throw std::runtime_error("unterminated quote in: " + line);
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        cur += line[i++];
      }
      if (i < line.size() && line[i] != ',') throw std::runtime_error("text after closing quote in: " + line);
    } else {
      while (i < line.size() && line[i] != ',') {
        if (line[i] == '"') throw std::runtime_error("stray quote in: " + line);
        cur += line[i++];
      }
    }
    out.push_back(cur);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return out;
}

std::pair<std::string, std::string> split_kv(const std::string& line) {
  const size_t at = line.find(kSep);
  if (at == std::string::npos) throw std::runtime_error("expected 'key = value': " + line);
  return {line.substr(0, at), line.substr(at + 3)};
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.empty()) return "\"\"";  // keeps one-column rows from looking blank
  bool quote = s.front() == ' ' || s.back() == ' ';
  for (char ch : s) {
    if (ch == '\n') throw std::runtime_error("newline in CSV field");
    quote = quote || ch == ',' || ch == '"';
  }
  if (!quote) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string emit_csv(const Document& d) {
  std::ostringstream os;
  for (const auto& [k, v] : d.config) {
    check_key(k);
    check_value(v);
    os << "# " << k << kSep << v << '\n';
  }
  for (const auto& [k, v] : d.summary) {
    check_key(k);
    check_value(v);
    os << k << kSep << v << '\n';
  }
  for (const auto& t : d.tables) {
    if (t.name.empty() || t.name.find(']') != std::string::npos) throw std::runtime_error("bad table name");
    if (t.columns.empty()) throw std::runtime_error("table " + t.name + " has no columns");
    os << '\n' << '[' << t.name << "]\n" << row_line(t.columns) << '\n';
    for (const auto& r : t.rows) {
      if (r.size() != t.columns.size()) throw std::runtime_error("ragged row in table " + t.name);
      os << row_line(r) << '\n';
    }
  }
  return os.str();
}

Document parse_csv(const std::string& text) {
  Document d;
  std::istringstream is(text);
  std::string line;
  Table* cur = nullptr;
  bool want_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) {
      if (want_header) throw std::runtime_error("table without header");
      cur = nullptr;
      continue;
    }
    if (line.rfind("# ", 0) == 0 && !cur) {
      d.config.push_back(split_kv(line.substr(2)));
    } else if (line.front() == '[' && line.back() == ']' && !cur) {
      d.tables.push_back(Table{line.substr(1, line.size() - 2), {}, {}});
      cur = &d.tables.back();
      want_header = true;
    } else if (cur && want_header) {
      cur->columns = split_row(line);
      want_header = false;
    } else if (cur) {
      auto r = split_row(line);
      if (r.size() != cur->columns.size()) throw std::runtime_error("ragged row in table " + cur->name);
      cur->rows.push_back(std::move(r));
    } else {
      d.summary.push_back(split_kv(line));
    }
  }
  if (want_header) throw std::runtime_error("table without header");
  return d;
}

}  // namespace sl3cli
