// Copyright 2026 The mcsi Authors. All Rights Reserved.
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

#include "mcsi/trace.h"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mcsi {
namespace {

constexpr const char* kBaseHeader = "t,i,j,ybar,Y,yhat,y,updated,mistake";
constexpr const char* kRegistryHeader = ",registry_rows,registry_cols";

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void Trace::Append(const TrialRecord& r) {
  records.push_back(r);
  if (r.mistake) ++mistakes;
  if (r.updated) ++updates;
}

double Trace::MistakeRate() const {
  return records.empty() ? 0.0 : static_cast<double>(mistakes) / records.size();
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  out << kBaseHeader << (trace.has_registry ? kRegistryHeader : "") << '\n';
  const auto old_precision = out.precision(17);
  for (const TrialRecord& r : trace.records) {
    out << r.t << ',' << r.i << ',' << r.j << ',' << r.ybar << ',' << r.y_rand << ',' << r.yhat
        << ',' << r.y << ',' << (r.updated ? 1 : 0) << ',' << (r.mistake ? 1 : 0);
    if (trace.has_registry) out << ',' << r.registry_rows << ',' << r.registry_cols;
    out << '\n';
  }
  out.precision(old_precision);
}

Trace ReadTraceCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV: missing header");
  Trace trace;
  if (line == std::string(kBaseHeader) + kRegistryHeader) {
    trace.has_registry = true;
  } else if (line != kBaseHeader) {
    throw std::runtime_error("trace CSV: unexpected header '" + line + "'");
  }
  const std::size_t expected = trace.has_registry ? 11 : 9;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != expected) {
      throw std::runtime_error("trace CSV: line " + std::to_string(line_no) + " has " +
                               std::to_string(c.size()) + " fields");
    }
    try {
      TrialRecord r;
      r.t = std::stoull(c[0]);
      r.i = std::stoull(c[1]);
      r.j = std::stoull(c[2]);
      r.ybar = std::stod(c[3]);
      r.y_rand = std::stod(c[4]);
      r.yhat = std::stoi(c[5]);
      r.y = std::stoi(c[6]);
      r.updated = c[7] == "1";
      r.mistake = c[8] == "1";
      if (trace.has_registry) {
        r.registry_rows = std::stoull(c[9]);
        r.registry_cols = std::stoull(c[10]);
      }
      trace.Append(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error("trace CSV: malformed line " + std::to_string(line_no));
    }
  }
  return trace;
}

}  // namespace mcsi
