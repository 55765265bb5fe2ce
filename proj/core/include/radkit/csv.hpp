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

#pragma once

#include <string>
#include <vector>

namespace radkit {

struct CsvColumnSpec {
  // Either a header name or a 0-based index rendered as digits.
  std::string column;
  bool has_header = true;
};

// Reads one column from a UTF-8 CSV file. Quoted fields with embedded commas
// and doubled quotes are handled; rows are 1-based in error messages.
std::vector<std::string> read_csv_column(const std::string& path,
                                         const CsvColumnSpec& spec);

// Splits a single CSV line into fields.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace radkit
