/*
 * Copyright 2026 The wvtune Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef WVTUNE_CSV_HPP
#define WVTUNE_CSV_HPP

// Labeled CSV datasets: one sample per row, integer label (0 or 1) in the
// first column, p feature columns after it. A header row is allowed and is
// recognized by a non-numeric first cell.

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wvtune/core_stats.hpp"
#include "wvtune/error.hpp"

namespace wvtune {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline bool parse_real(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  const std::string tmp(cell);
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size();
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

}  // namespace detail

inline LabeledDataset read_labeled_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<std::vector<double>> rows[2];
  std::string line;
  long line_no = 0;
  Eigen::Index p = -1;
  auto fail = [&](const std::string& msg) {
    throw ParameterError(source + ":" + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    const auto cells = detail::split_commas(view);
    double label = 0.0;
    if (!detail::parse_real(cells[0], label)) {
      if (p < 0 && rows[0].empty() && rows[1].empty()) continue;  // header
      fail("label is not numeric");
    }
    if (label != 0.0 && label != 1.0) fail("label must be 0 or 1");
    if (cells.size() < 2) fail("row has no feature columns");
    const auto width = static_cast<Eigen::Index>(cells.size() - 1);
    if (p < 0) p = width;
    if (width != p)
      fail("expected " + std::to_string(p) + " features, found " + std::to_string(width));
    std::vector<double> row(cells.size() - 1);
    for (std::size_t j = 1; j < cells.size(); ++j)
      if (!detail::parse_real(cells[j], row[j - 1]))
        fail("column " + std::to_string(j + 1) + " is not a real number");
    rows[label == 1.0 ? 1 : 0].push_back(std::move(row));
  }
  if (p < 0) throw ParameterError(source + ": no data rows");

  LabeledDataset data;
  for (int c = 0; c < 2; ++c) {
    Eigen::MatrixXd& x = c == 0 ? data.x0 : data.x1;
    x.resize(p, static_cast<Eigen::Index>(rows[c].size()));
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < p; ++i) x(i, j) = rows[c][j][i];
  }
  if (data.n0() == 0 || data.n1() == 0)
    throw ParameterError(source + ": both classes 0 and 1 must be present");
  return data;
}

inline LabeledDataset read_labeled_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  return read_labeled_csv(in, path);
}

inline void write_labeled_csv(std::ostream& out, const LabeledDataset& data) {
  out.precision(17);
  for (int c = 0; c < 2; ++c) {
    const Eigen::MatrixXd& x = data.samples(c);
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out << c;
      for (Eigen::Index i = 0; i < x.rows(); ++i) out << ',' << x(i, j);
      out << '\n';
    }
  }
}

}  // namespace wvtune

#endif  // WVTUNE_CSV_HPP
