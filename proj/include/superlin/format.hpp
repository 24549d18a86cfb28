#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "core.hpp"
#include "polynomial.hpp"

// Report rendering. Numbers go out with 12 significant digits and no "-0",
// so identical inputs print identical bytes.

namespace superlin {

inline std::string fmt_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

inline std::string fmt_number(const Rat& x) { return x.get_str(); }

inline std::string fmt_number(const cplx& x) {
  if (x.imag() == 0) return fmt_number(x.real());
  std::string im = fmt_number(x.imag() < 0 ? -x.imag() : x.imag());
  return fmt_number(x.real()) + (x.imag() < 0 ? "-" : "+") + im + "i";
}

// compact descending form: "x^2-3x+2", "-x", "0"
template <class T> std::string fmt_poly(const Polynomial<T>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = p.degree(); k >= 0; --k) {
    T c = p.coeff(k);
    if (c == T(0)) continue;
    bool negative = false;
    std::string mag;
    if constexpr (scalar_traits<T>::is_complex) {
      mag = "(" + fmt_number(c) + ")";
    } else {
      negative = c < T(0);
      mag = fmt_number(negative ? T(-c) : c);
      if (mag.find('/') != std::string::npos && k > 0) mag = "(" + mag + ")";
    }
    std::string term;
    if (k == 0)
      term = mag;
    else {
      if (mag != "1") term = mag;
      term += (k == 1) ? "x" : "x^" + std::to_string(k);
    }
    if (out.empty())
      out = (negative ? "-" : "") + term;
    else
      out += (negative ? "-" : "+") + term;
  }
  return out.empty() ? "0" : out;
}

template <class T> std::string fmt_super_poly(const SuperPolynomial<T>& f) {
  std::string out;
  for (index_t i = 0; i < f.size(); ++i) {
    if (i) out += " | ";
    out += fmt_poly(f.part(i));
  }
  return out;
}

template <class T> std::string fmt_tuple(const std::vector<T>& xs) {
  std::string out = "(";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt_number(xs[i]);
  }
  return out + ")";
}

template <class T> std::string fmt_tuple(const SuperScalar<T>& s) { return fmt_tuple(s.comps); }

// "(1, 2 | 3)" with the thin lines drawn as bars
template <class T> std::string fmt_super_vector(const SuperVector<T>& v) {
  std::string out = "(";
  for (index_t i = 0; i < v.blocks(); ++i) {
    if (i) out += " | ";
    auto b = v.block(i);
    for (index_t j = 0; j < b.size(); ++j) {
      if (j) out += ", ";
      out += fmt_number(b(j));
    }
  }
  return out + ")";
}

inline std::string fmt_entries(const Vec<double>& v) {
  std::string out;
  for (index_t j = 0; j < v.size(); ++j) {
    if (j) out += ", ";
    out += fmt_number(v(j));
  }
  return out;
}

// left-aligned columns, two-space gutter, no trailing blanks
inline std::string fmt_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& r : rows)
    for (size_t c = 0; c < r.size(); ++c) {
      if (width.size() <= c) width.resize(c + 1, 0);
      width[c] = std::max(width[c], r[c].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (size_t c = 0; c < r.size(); ++c) {
      if (c) line += "  ";
      line += r[c];
      if (c + 1 < r.size()) line.append(width[c] - r[c].size(), ' ');
    }
    out += line + "\n";
  }
  return out;
}

// grid with " | " at column cuts and a dashed line at row cuts
template <class T> std::string fmt_super_matrix(const SuperMatrix<T>& a) {
  std::vector<size_t> width(static_cast<size_t>(a.data.cols()), 0);
  std::vector<std::vector<std::string>> cells;
  for (index_t i = 0; i < a.data.rows(); ++i) {
    std::vector<std::string> row;
    for (index_t j = 0; j < a.data.cols(); ++j) {
      row.push_back(fmt_number(a.data(i, j)));
      width[static_cast<size_t>(j)] = std::max(width[static_cast<size_t>(j)], row.back().size());
    }
    cells.push_back(std::move(row));
  }
  auto is_cut = [](const PartitionSpec& p, index_t at) {
    for (index_t b = 1; b < p.blocks(); ++b)
      if (p.offset(b) == at) return true;
    return false;
  };
  std::string out;
  size_t line_len = 0;
  for (index_t i = 0; i < a.data.rows(); ++i) {
    std::string line;
    for (index_t j = 0; j < a.data.cols(); ++j) {
      if (j) line += is_cut(a.col_partition, j) ? " | " : " ";
      const std::string& s = cells[static_cast<size_t>(i)][static_cast<size_t>(j)];
      line.append(width[static_cast<size_t>(j)] - s.size(), ' ');
      line += s;
    }
    line_len = std::max(line_len, line.size());
    out += line + "\n";
    if (is_cut(a.row_partition, i + 1)) out += std::string(line_len, '-') + "\n";
  }
  return out;
}

template <class T> std::string fmt_plain_matrix(const Mat<T>& m) {
  std::vector<size_t> width(static_cast<size_t>(m.cols()), 0);
  std::vector<std::vector<std::string>> cells;
  for (index_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (index_t j = 0; j < m.cols(); ++j) {
      row.push_back(fmt_number(m(i, j)));
      width[static_cast<size_t>(j)] = std::max(width[static_cast<size_t>(j)], row.back().size());
    }
    cells.push_back(std::move(row));
  }
  std::string out;
  for (auto& row : cells) {
    std::string line;
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) line += " ";
      line.append(width[j] - row[j].size(), ' ');
      line += row[j];
    }
    out += line + "\n";
  }
  return out;
}

} // namespace superlin
