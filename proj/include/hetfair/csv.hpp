// Copyright 2026 The hetfair Authors
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

// Minimal CSV writer. Floats are printed with 9 significant digits so output
// is byte-stable across runs.

#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hetfair::csv {

inline std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// One row being built field by field.
class Row {
 public:
  Row& add(std::string_view s) {
    fields_.push_back(escape(s));
    return *this;
  }
  Row& add(const char* s) { return add(std::string_view(s)); }
  Row& add(const std::string& s) { return add(std::string_view(s)); }
  Row& add(double v) {
    fields_.push_back(format(v));
    return *this;
  }
  template <typename Int>
    requires std::is_integral_v<Int>
  Row& add(Int v) {
    fields_.push_back(std::to_string(v));
    return *this;
  }

  std::string str() const {
    std::string out;
    for (std::size_t k = 0; k < fields_.size(); ++k) {
      if (k) out += ',';
      out += fields_[k];
    }
    return out;
  }

 private:
  std::vector<std::string> fields_;
};

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void push(const Row& row) { rows_.push_back(row.str()); }
  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < header_.size(); ++k) {
      if (k) os << ',';
      os << escape(header_[k]);
    }
    os << '\n';
    for (const auto& r : rows_) os << r << '\n';
    return os.str();
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << str();
    if (!f) throw std::runtime_error("write failed: " + path);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace hetfair::csv
