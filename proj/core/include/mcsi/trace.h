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

#ifndef MCSI_TRACE_H_
#define MCSI_TRACE_H_

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace mcsi {

// One revealed entry: row identity, column identity, label in {-1, +1}.
struct Trial {
  std::size_t i = 0;
  std::size_t j = 0;
  int y = 1;
};

struct TrialRecord {
  std::size_t t = 0;  // 1-based trial index
  std::size_t i = 0;
  std::size_t j = 0;
  double ybar = 0.0;
  double y_rand = 0.0;  // threshold Y_t
  int yhat = 0;
  int y = 0;
  bool updated = false;
  bool mistake = false;
  // Registry sizes after the trial; inductive runs only.
  std::size_t registry_rows = 0;
  std::size_t registry_cols = 0;
};

struct Trace {
  std::vector<TrialRecord> records;
  std::size_t mistakes = 0;
  std::size_t updates = 0;
  bool has_registry = false;

  void Append(const TrialRecord& r);
  std::size_t size() const { return records.size(); }
  double MistakeRate() const;
};

// Header: t,i,j,ybar,Y,yhat,y,updated,mistake[,registry_rows,registry_cols].
// Doubles are written with 17 significant digits so a read-back is exact.
void WriteTraceCsv(const Trace& trace, std::ostream& out);
Trace ReadTraceCsv(std::istream& in);

}  // namespace mcsi

#endif  // MCSI_TRACE_H_
