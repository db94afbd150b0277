#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"

namespace ihoc {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

// Sampled-function CSV: header "t,v_1,...,v_n[,dv_1,...,dv_n]", one row per
// node, strictly increasing t.
inline SampledFn read_sampled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty file " + path);
  auto header = detail::split_csv_line(line);
  if (header.empty() || detail::trim(header[0]) != "t")
    throw CsvError(path + ": header must start with column t");
  std::size_t n_v = 0, n_dv = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    std::string h = detail::trim(header[i]);
    if (h.rfind("dv_", 0) == 0)
      ++n_dv;
    else if (h.rfind("v_", 0) == 0)
      ++n_v;
    else
      throw CsvError(path + ": unexpected column " + h);
  }
  if (n_v == 0) throw CsvError(path + ": no value columns");
  if (n_dv != 0 && n_dv != n_v) throw CsvError(path + ": derivative column count mismatch");

  SampledFn s;
  s.dim = n_v;
  if (n_dv) s.derivatives = std::vector<double>();
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw CsvError(path + ": ragged row");
    s.grid.nodes.push_back(std::stod(cells[0]));
    for (std::size_t c = 0; c < n_v; ++c) s.values.push_back(std::stod(cells[1 + c]));
    for (std::size_t c = 0; c < n_dv; ++c)
      s.derivatives->push_back(std::stod(cells[1 + n_v + c]));
  }
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw CsvError(path + ": " + e.what());
  }
  return s;
}

inline void write_sampled_csv(const std::string& path, const SampledFn& s) {
  s.validate();
  std::ofstream out(path);
  if (!out) throw CsvError("cannot open " + path + " for writing");
  out << "t";
  for (std::size_t c = 1; c <= s.dim; ++c) out << ",v_" << c;
  if (s.derivatives)
    for (std::size_t c = 1; c <= s.dim; ++c) out << ",dv_" << c;
  out << "\n";
  char buf[40];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    put(s.grid.nodes[i]);
    for (std::size_t c = 0; c < s.dim; ++c) {
      out << ",";
      put(s.value(i, c));
    }
    if (s.derivatives)
      for (std::size_t c = 0; c < s.dim; ++c) {
        out << ",";
        put(s.deriv(i, c));
      }
    out << "\n";
  }
}

}  // namespace ihoc
