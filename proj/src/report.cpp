/**
 * This code is part of the QNK workbench.
 *
 * (C) Copyright The QNK Workbench Authors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#include "qnk/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "qnk/errors.hpp"

namespace qnk::report {

namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  if (v == 0.0) return "0.0";  // drops the sign of -0.0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write_value(std::string& out, const nlohmann::ordered_json& v, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += nlohmann::ordered_json(key).dump();
        out += pretty ? ": " : ":";
        write_value(out, item, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Short arrays of scalars (complex amplitudes, small lists) stay on one line.
      const bool inline_array =
          v.size() <= 4 && std::none_of(v.begin(), v.end(), [](const auto& e) {
            return e.is_structured();
          });
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += inline_array && pretty ? ", " : ",";
        first = false;
        if (!inline_array) newline(depth + 1);
        write_value(out, item, indent, depth + 1);
      }
      if (!inline_array) newline(depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

template <typename Body>
void write_file(const std::string& path, Body body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  body(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string serialize(const nlohmann::ordered_json& value, int indent) {
  std::string out;
  write_value(out, value, indent, 0);
  return out;
}

void write_json(const std::string& path, const nlohmann::ordered_json& document) {
  write_file(path, [&](std::ostream& os) { os << serialize(document, 2) << '\n'; });
}

void write_jsonl(const std::string& path, const std::vector<nlohmann::ordered_json>& records) {
  write_file(path, [&](std::ostream& os) {
    for (const auto& r : records) os << serialize(r) << '\n';
  });
}

}  // namespace qnk::report
