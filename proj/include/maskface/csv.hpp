// Copyright 2026 the maskface authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Minimal RFC 4180 helpers shared by the CSV writers/readers. Fields
// are quoted only when they contain a comma, quote or line break;
// readers work line-by-line (quoted line breaks are rejected).

#ifndef MASKFACE_CSV_HPP_
#define MASKFACE_CSV_HPP_

#include <string>
#include <vector>

#include "maskface/errors.hpp"

namespace maskface {

inline std::string csv_escape(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

// Splits one line into fields. Throws ParseError on a stray or
// unterminated quote.
inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty()) {
        throw ParseError("CSV: quote inside unquoted field");
      }
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++i;
      continue;
    }
    field += c;
    ++i;
  }
  if (quoted) {
    throw ParseError("CSV: unterminated quoted field");
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace maskface

#endif  // MASKFACE_CSV_HPP_
