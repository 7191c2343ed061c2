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

#include "mcsi/io.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcsi {
namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool Blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

double ParseDouble(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || !Blank(s.substr(used))) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void WriteGraph(const Graph& g, std::ostream& out) {
  const auto old = out.precision(17);
  out << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.i << ' ' << e.j << ' ' << e.weight << '\n';
  out.precision(old);
}

Graph ReadGraph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int m = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    std::istringstream ss(line);
    if (m < 0) {
      if (!(ss >> m) || m < 1) throw std::runtime_error("graph: bad vertex count on line 1");
      continue;
    }
    Edge e;
    std::string rest;
    if (!(ss >> e.i >> e.j >> e.weight) || (ss >> rest)) {
      throw std::runtime_error("graph: line " + std::to_string(line_no) + " is not 'i j w'");
    }
    edges.push_back(e);
  }
  if (m < 0) throw std::runtime_error("graph: empty file");
  try {
    return Graph(m, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("graph: ") + e.what());
  }
}

void WritePoints(const std::vector<Point>& points, std::ostream& out) {
  const auto old = out.precision(17);
  for (const Point& p : points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) out << (i ? "," : "") << p(i);
    out << '\n';
  }
  out.precision(old);
}

std::vector<Point> ReadPoints(std::istream& in) {
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    Point p(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) p(c) = ParseDouble(cells[c], line_no);
    if (!points.empty() && p.size() != points.front().size()) {
      throw std::runtime_error("points: line " + std::to_string(line_no) +
                               " has a different dimension");
    }
    points.push_back(std::move(p));
  }
  return points;
}

void WriteLabelsCsv(const Eigen::MatrixXi& labels, std::ostream& out) {
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels.cols(); ++j) out << (j ? "," : "") << labels(i, j);
    out << '\n';
  }
}

Eigen::MatrixXi ReadLabelsCsv(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    std::vector<int> row;
    for (const std::string& cell : SplitCsv(line)) {
      const double v = ParseDouble(cell, line_no);
      if (v != 1.0 && v != -1.0) {
        throw std::runtime_error("labels: line " + std::to_string(line_no) +
                                 " has a value outside {-1, 1}");
      }
      row.push_back(static_cast<int>(v));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("labels: line " + std::to_string(line_no) + " is ragged");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("labels: empty file");
  Eigen::MatrixXi out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

nlohmann::json InstanceManifest(const Instance& inst, const std::string& labels_file) {
  nlohmann::json u_star = nlohmann::json::array();
  for (Eigen::Index a = 0; a < inst.u_star.rows(); ++a) {
    std::vector<int> row(inst.u_star.cols());
    for (Eigen::Index b = 0; b < inst.u_star.cols(); ++b) row[b] = inst.u_star(a, b);
    u_star.push_back(row);
  }
  return {
      {"m", inst.m},
      {"n", inst.n},
      {"k", inst.k},
      {"l", inst.l},
      {"seed", inst.seed},
      {"p", inst.p},
      {"beta", inst.beta},
      {"sampling", ClassSamplingName(inst.sampling)},
      {"row_class", inst.row_class},
      {"col_class", inst.col_class},
      {"u_star", u_star},
      {"labels", labels_file},
  };
}

void SaveInstance(const Instance& inst, const std::string& stem) {
  const std::filesystem::path labels_path = stem + ".labels.csv";
  {
    std::ofstream out = OpenOut(labels_path.string());
    WriteLabelsCsv(inst.labels, out);
  }
  std::ofstream out = OpenOut(stem + ".json");
  out << InstanceManifest(inst, labels_path.filename().string()).dump(2) << '\n';
}

Instance LoadInstance(const std::string& manifest_path) {
  std::ifstream in = OpenIn(manifest_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("instance manifest: " + std::string(e.what()));
  }
  Instance inst;
  try {
    inst.m = j.at("m").get<int>();
    inst.n = j.at("n").get<int>();
    inst.k = j.at("k").get<int>();
    inst.l = j.at("l").get<int>();
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.p = j.value("p", 0.0);
    inst.beta = j.value("beta", 0.0);
    inst.sampling = ParseClassSampling(j.value("sampling", std::string("surjective")));
    inst.row_class = j.at("row_class").get<std::vector<int>>();
    inst.col_class = j.at("col_class").get<std::vector<int>>();
    const auto rows = j.at("u_star").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(rows.size()) != inst.k) throw std::runtime_error("u_star has wrong rows");
    inst.u_star.resize(inst.k, inst.l);
    for (int a = 0; a < inst.k; ++a) {
      if (static_cast<int>(rows[a].size()) != inst.l) {
        throw std::runtime_error("u_star has wrong columns");
      }
      for (int b = 0; b < inst.l; ++b) inst.u_star(a, b) = rows[a][b];
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("instance manifest: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("instance manifest: " + std::string(e.what()));
  }
  if (static_cast<int>(inst.row_class.size()) != inst.m ||
      static_cast<int>(inst.col_class.size()) != inst.n) {
    throw std::runtime_error("instance manifest: class vectors do not match m, n");
  }
  for (int c : inst.row_class) {
    if (c < 0 || c >= inst.k) throw std::runtime_error("instance manifest: row class out of range");
  }
  for (int c : inst.col_class) {
    if (c < 0 || c >= inst.l) throw std::runtime_error("instance manifest: col class out of range");
  }
  inst.truth.resize(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    for (int jj = 0; jj < inst.n; ++jj) {
      inst.truth(i, jj) = inst.u_star(inst.row_class[i], inst.col_class[jj]);
    }
  }
  const std::filesystem::path labels_path =
      std::filesystem::path(manifest_path).parent_path() / j.at("labels").get<std::string>();
  std::ifstream lin = OpenIn(labels_path.string());
  inst.labels = ReadLabelsCsv(lin);
  if (inst.labels.rows() != inst.m || inst.labels.cols() != inst.n) {
    throw std::runtime_error("instance labels: shape does not match manifest");
  }
  inst.flipped = (inst.labels.array() != inst.truth.array()).matrix();
  return inst;
}

void SaveGraphFile(const Graph& g, const std::string& path) {
  std::ofstream out = OpenOut(path);
  WriteGraph(g, out);
}

Graph LoadGraphFile(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadGraph(in);
}

std::vector<Point> LoadPointsFile(const std::string& path) {
  std::ifstream in = OpenIn(path);
  return ReadPoints(in);
}

}  // namespace mcsi
