#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "esdg/error.hpp"

namespace esdg::harness {

/// 17 significant digits round-trip every double.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// In-memory CSV table; cells are kept as text.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  explicit Table(std::vector<std::string> cols = {}) : columns(std::move(cols)) {}

  bool empty() const { return rows.empty(); }

  int column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
  }

  /// Appends a row; each cell is a string or a number.
  template <class... Cells>
  void add(const Cells&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    if (r.size() != columns.size()) throw Error(ErrorKind::invalid_argument, "row width differs from header");
    rows.push_back(std::move(r));
  }

  std::vector<double> numbers(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw Error(ErrorKind::plot_error, "missing column '" + name + "'");
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(r[static_cast<std::size_t>(c)], &used));
      } catch (const std::exception&) {
        throw Error(ErrorKind::plot_error, "column '" + name + "' holds non-numeric value '" +
                                               r[static_cast<std::size_t>(c)] + "'");
      }
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& name) const {
    const int c = column(name);
    if (c < 0) throw Error(ErrorKind::plot_error, "missing column '" + name + "'");
    std::vector<std::string> out;
    for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(c)]);
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
    return os.str();
  }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(long x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
};

inline void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  out << t.str();
}

inline Table parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Table t;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string c;
    std::istringstream ls(line);
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (line.back() == ',') cells.emplace_back();
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size())
        throw Error(ErrorKind::plot_error, "row width " + std::to_string(cells.size()) + " differs from header width " +
                                               std::to_string(t.columns.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

inline Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::plot_error, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

/// Row-major matrix dump, 17 significant digits.
template <class Mat>
void write_matrix_csv(const std::string& path, const Mat& A) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path + "'");
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) out << (j ? "," : "") << fmt(A(i, j));
    out << "\n";
  }
}

}  // namespace esdg::harness
