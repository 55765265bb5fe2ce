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

#include <stdexcept>
#include <string>

namespace radkit {

// Invalid configuration: bad parameters, incompatible combinations of
// mechanism / prior / threat model, malformed input files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested exact computation is too large to enumerate.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// A calibration target lies at or above the supremum of the bound being
// inverted, so no parameter can reach it.
class UnreachableRiskError : public std::runtime_error {
 public:
  UnreachableRiskError(const std::string& what, double supremum)
      : std::runtime_error(what), supremum_(supremum) {}
  double supremum() const { return supremum_; }

 private:
  double supremum_;
};

// Data ingestion failure; `rows` lists the offending 1-based row numbers.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::vector<std::size_t> rows)
      : std::runtime_error(what), rows_(std::move(rows)) {}
  explicit IngestError(const std::string& what) : std::runtime_error(what) {}
  const std::vector<std::size_t>& rows() const { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

}  // namespace radkit
