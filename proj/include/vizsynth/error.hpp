// Copyright 2026 The vizsynth Authors.
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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vizsynth {

enum class ErrorCode {
  MalformedCsv,
  EmptyTable,
  MalformedJson,
  SchemaError,
  TypeError,
  PivotCollision,
  DivisionByZero,
  AggregateError,
  ParseError,
  InvalidElement,
  TooManyLayers,
  InconsistentGroup,
};

std::string_view error_code_name(ErrorCode code);

// Every failure in the library surfaces as an Error. `op_index` is set for
// evaluation failures and names the operator that failed; `path` is a
// JSON-pointer-like location for malformed request payloads.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

  const std::optional<std::size_t>& op_index() const { return op_index_; }
  Error& with_op_index(std::size_t i) {
    op_index_ = i;
    return *this;
  }

  const std::string& path() const { return path_; }
  Error& with_path(std::string p) {
    path_ = std::move(p);
    return *this;
  }

 private:
  ErrorCode code_;
  std::optional<std::size_t> op_index_;
  std::string path_;
};

}  // namespace vizsynth
