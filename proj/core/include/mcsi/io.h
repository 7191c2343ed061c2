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

// File formats.
//
//   graph:    first line "m", then one "i j w" line per edge, 0-based.
//   points:   CSV, one point per row.
//   instance: JSON manifest plus a labels CSV (m rows of n values in {-1,1}).
// All readers throw std::runtime_error with the offending line on bad input.

#ifndef MCSI_IO_H_
#define MCSI_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mcsi/sideinfo.h"
#include "mcsi/synth.h"
#include "nlohmann/json.hpp"

namespace mcsi {

void WriteGraph(const Graph& g, std::ostream& out);
Graph ReadGraph(std::istream& in);

void WritePoints(const std::vector<Point>& points, std::ostream& out);
std::vector<Point> ReadPoints(std::istream& in);

void WriteLabelsCsv(const Eigen::MatrixXi& labels, std::ostream& out);
Eigen::MatrixXi ReadLabelsCsv(std::istream& in);

nlohmann::json InstanceManifest(const Instance& inst, const std::string& labels_file);

// Writes <stem>.json and <stem>.labels.csv.
void SaveInstance(const Instance& inst, const std::string& stem);
// Reads a manifest and the labels CSV it names (relative to the manifest).
Instance LoadInstance(const std::string& manifest_path);

void SaveGraphFile(const Graph& g, const std::string& path);
Graph LoadGraphFile(const std::string& path);
std::vector<Point> LoadPointsFile(const std::string& path);

}  // namespace mcsi

#endif  // MCSI_IO_H_
