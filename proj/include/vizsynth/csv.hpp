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

#include <string>
#include <string_view>

#include "vizsynth/table.hpp"

namespace vizsynth {

/// RFC-4180 reader. Without a header the columns are named C1, C2, ...
/// Throws MalformedCsv on ragged rows, bad quoting or invalid UTF-8, and
/// EmptyTable when there are no data rows.
Table load_csv(std::string_view bytes, bool has_header = true);

/// Writes the header and canonical cell text, quoting only where needed.
std::string serialize_csv(const Table& t);

bool is_valid_utf8(std::string_view s);

}  // namespace vizsynth
