// Copyright 2026 The FairSim Authors.
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

#ifndef FAIRSIM_CSV_HPP_
#define FAIRSIM_CSV_HPP_

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fairsim/error.hpp"

namespace fairsim::csv {

// 17 significant digits round-trips any IEEE double.
inline std::string FormatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::vector<std::string> SplitLine(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r') {
    fields.back().pop_back();
  }
  return fields;
}

inline double ParseDouble(const std::string& field) {
  // strtod rather than from_chars: libstdc++ 11 lacks floating from_chars
  // on some targets.
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  Require(!field.empty() && end == field.c_str() + field.size(), ErrorKind::kIo,
          "not a number: '" + field + "'");
  return value;
}

inline long long ParseInt(const std::string& field) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  Require(ec == std::errc() && ptr == field.data() + field.size(), ErrorKind::kIo,
          "not an integer: '" + field + "'");
  return value;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column, or -1.
  int Column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

inline Table Read(std::istream& in) {
  Table table;
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), ErrorKind::kIo,
          "missing CSV header");
  table.header = SplitLine(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = SplitLine(line);
    Require(fields.size() == table.header.size(), ErrorKind::kIo,
            "CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

inline Table ReadFile(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorKind::kIo, "cannot open " + path);
  return Read(in);
}

inline void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot write " + path);
  out << contents;
  Require(out.good(), ErrorKind::kIo, "write failed for " + path);
}

}  // namespace fairsim::csv

#endif  // FAIRSIM_CSV_HPP_
