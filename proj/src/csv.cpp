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

#include "vizsynth/csv.hpp"

#include <vector>

#include "vizsynth/error.hpp"

namespace vizsynth {

bool is_valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

namespace {

std::vector<std::vector<std::string>> parse_records(std::string_view in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_has_content = false;
  };

  std::size_t i = 0;
  if (in.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // BOM
  for (; i < in.size(); ++i) {
    char c = in[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < in.size() && in[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::MalformedCsv, "stray quote in record " +
                                                   std::to_string(records.size() + 1));
        }
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < in.size() && in[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        if (record_has_content || !field.empty()) {
          end_record();
        }
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::MalformedCsv, "text after closing quote in record " +
                                                   std::to_string(records.size() + 1));
        }
        field += c;
        record_has_content = true;
    }
  }
  if (in_quotes) throw Error(ErrorCode::MalformedCsv, "unterminated quoted field");
  if (record_has_content || !field.empty()) end_record();
  return records;
}

bool needs_quotes(std::string_view s) {
  if (s.empty()) return false;
  if (s.find_first_of(",\"\r\n") != std::string_view::npos) return true;
  return s.front() == ' ' || s.back() == ' ' || s.front() == '\t' || s.back() == '\t';
}

void append_field(std::string& out, const std::string& s) {
  if (!needs_quotes(s)) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

Table load_csv(std::string_view bytes, bool has_header) {
  if (!is_valid_utf8(bytes)) throw Error(ErrorCode::MalformedCsv, "input is not valid UTF-8");
  auto records = parse_records(bytes);
  std::vector<std::string> names;
  std::size_t first = 0;
  if (has_header) {
    if (records.empty()) throw Error(ErrorCode::EmptyTable, "CSV has no header row");
    names = std::move(records[0]);
    first = 1;
  } else if (!records.empty()) {
    for (std::size_t c = 0; c < records[0].size(); ++c) names.push_back("C" + std::to_string(c + 1));
  }
  if (records.size() <= first) throw Error(ErrorCode::EmptyTable, "CSV has no data rows");
  for (std::size_t r = first; r < records.size(); ++r) {
    if (records[r].size() != names.size()) {
      throw Error(ErrorCode::MalformedCsv, "record " + std::to_string(r + 1) + " has " +
                                               std::to_string(records[r].size()) +
                                               " fields, expected " + std::to_string(names.size()));
    }
  }
  std::vector<std::vector<std::string>> body(std::make_move_iterator(records.begin() + first),
                                             std::make_move_iterator(records.end()));
  try {
    return table_from_text(std::move(names), body);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedCsv, e.what());
  }
}

std::string serialize_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.num_columns(); ++c) {
    if (c) out += ',';
    append_field(out, t.column(c).name);
  }
  out += '\n';
  for (const auto& row : t.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      append_field(out, to_text(row[c]));
    }
    out += '\n';
  }
  return out;
}

}  // namespace vizsynth
