// Copyright 2026 The RadKit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radkit/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "radkit/errors.hpp"

namespace radkit {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::vector<std::string> read_csv_column(const std::string& path,
                                         const CsvColumnSpec& spec) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open file: " + path);

  std::string line;
  std::size_t column_index = 0;
  bool index_known = false;
  if (all_digits(spec.column)) {
    column_index = std::stoul(spec.column);
    index_known = true;
  }

  std::vector<std::string> values;
  std::size_t row = 0;
  bool header_consumed = false;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_csv_line(line);
    if (spec.has_header && !header_consumed) {
      header_consumed = true;
      if (!index_known) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (strip(fields[i]) == spec.column) {
            column_index = i;
            index_known = true;
            break;
          }
        }
        if (!index_known) {
          throw IngestError("column not found in header: " + spec.column);
        }
      }
      continue;
    }
    if (!index_known) {
      throw IngestError(
          "column must be a numeric index when the file has no header");
    }
    if (column_index >= fields.size()) {
      throw IngestError("row " + std::to_string(row) + " has only " +
                        std::to_string(fields.size()) + " fields");
    }
    values.push_back(strip(fields[column_index]));
  }
  if (values.empty()) throw IngestError("empty input");
  return values;
}

}  // namespace radkit
