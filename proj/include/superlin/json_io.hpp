#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "core.hpp"
#include "models.hpp"

namespace superlin {

using njson = nlohmann::json;

inline njson parse_json_text(const std::string& text) {
  try {
    return njson::parse(text);
  } catch (const njson::parse_error& e) {
    // the message carries the line and column
    fail(errc::parse_error, e.what());
  }
}

inline const njson& need_field(const njson& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    fail(errc::parse_error, std::string("missing field \"") + field + "\"");
  return j.at(field);
}

template <class T> T scalar_from_json(const njson& j, const std::string& where) {
  if constexpr (scalar_traits<T>::is_exact) {
    if (j.is_number_integer()) return T(static_cast<long>(j.get<long long>()));
    if (j.is_number_float()) {
      double d = j.get<double>();
      if (d == static_cast<double>(static_cast<long long>(d)))
        return T(static_cast<long>(d));
      fail(errc::parse_error,
           where + ": rational mode takes integers or \"p/q\" strings, got " + j.dump());
    }
    if (j.is_string()) {
      try {
        Rat q(j.get<std::string>());
        if (q.get_den() == 0) fail(errc::parse_error, where + ": zero denominator");
        q.canonicalize();
        return q;
      } catch (const std::invalid_argument&) {
        fail(errc::parse_error, where + ": cannot read \"" + j.get<std::string>() +
                                    "\" as a rational");
      }
    }
    fail(errc::parse_error, where + ": expected an integer or \"p/q\" string");
  } else {
    if (!j.is_number()) fail(errc::parse_error, where + ": expected a number, got " + j.dump());
    return T(j.get<double>());
  }
}

inline PartitionSpec partition_from_json(const njson& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(errc::parse_error, where + ": expected a non-empty array of block lengths");
  std::vector<index_t> lengths;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 1)
      fail(errc::parse_error,
           where + "[" + std::to_string(i) + "]: block lengths are positive integers");
    lengths.push_back(static_cast<index_t>(j[i].get<long long>()));
  }
  return PartitionSpec(std::move(lengths));
}

// rows of numbers; pass cols < 0 to take the width from the first row
template <class T>
Mat<T> rows_from_json(const njson& j, index_t rows, index_t cols, const std::string& where) {
  if (!j.is_array()) fail(errc::parse_error, where + ": expected an array of rows");
  if (rows >= 0 && static_cast<index_t>(j.size()) != rows)
    fail(errc::parse_error, where + ": expected " + std::to_string(rows) + " rows, got " +
                                std::to_string(j.size()));
  if (j.empty()) fail(errc::parse_error, where + ": needs at least one row");
  if (cols < 0) {
    if (!j[0].is_array()) fail(errc::parse_error, where + "[0]: expected an array");
    cols = static_cast<index_t>(j[0].size());
  }
  Mat<T> m(static_cast<index_t>(j.size()), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || static_cast<index_t>(j[i].size()) != cols)
      fail(errc::parse_error, row_where + ": expected " + std::to_string(cols) + " entries");
    for (size_t k = 0; k < j[i].size(); ++k)
      m(static_cast<index_t>(i), static_cast<index_t>(k)) =
          scalar_from_json<T>(j[i][k], row_where + "[" + std::to_string(k) + "]");
  }
  return m;
}

template <class T> Vec<T> vec_from_json(const njson& j, index_t len, const std::string& where) {
  if (!j.is_array()) fail(errc::parse_error, where + ": expected an array of numbers");
  if (len >= 0 && static_cast<index_t>(j.size()) != len)
    fail(errc::parse_error, where + ": expected " + std::to_string(len) + " entries, got " +
                                std::to_string(j.size()));
  Vec<T> v(static_cast<index_t>(j.size()));
  for (size_t k = 0; k < j.size(); ++k)
    v(static_cast<index_t>(k)) = scalar_from_json<T>(j[k], where + "[" + std::to_string(k) + "]");
  return v;
}

// ---- super objects ----

template <class T> SuperMatrix<T> super_matrix_from_json(const njson& j) {
  PartitionSpec r = partition_from_json(need_field(j, "row_partition"), "row_partition");
  PartitionSpec c = partition_from_json(need_field(j, "col_partition"), "col_partition");
  Mat<T> data = rows_from_json<T>(need_field(j, "data"), r.total(), c.total(), "data");
  return SuperMatrix<T>(std::move(data), std::move(r), std::move(c));
}

template <class T> SuperDiagonalMatrix<T> super_diagonal_from_json(const njson& j) {
  const njson& blocks = need_field(j, "blocks");
  if (!blocks.is_array() || blocks.empty())
    fail(errc::parse_error, "blocks: expected a non-empty array");
  std::vector<Mat<T>> bs;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const std::string where = "blocks[" + std::to_string(i) + "]";
    const njson& b = blocks[i];
    if (!b.is_object() || !b.contains("rows") || !b.contains("cols") || !b.contains("data"))
      fail(errc::parse_error, where + ": expected {\"rows\",\"cols\",\"data\"}");
    index_t rows = static_cast<index_t>(b.at("rows").get<long long>());
    index_t cols = static_cast<index_t>(b.at("cols").get<long long>());
    if (rows < 1 || cols < 1) fail(errc::parse_error, where + ": rows and cols must be >= 1");
    bs.push_back(rows_from_json<T>(b.at("data"), rows, cols, where + ".data"));
  }
  return SuperDiagonalMatrix<T>(std::move(bs));
}

template <class T> SuperVector<T> super_vector_from_json(const njson& j) {
  PartitionSpec p = partition_from_json(need_field(j, "partition"), "partition");
  Vec<T> e = vec_from_json<T>(need_field(j, "entries"), p.total(), "entries");
  return SuperVector<T>(std::move(e), std::move(p));
}

// vector-list file: {"partition":[...],"vectors":[[...],...]} plus an
// optional "target" for projection problems
template <class T> struct VectorListInput {
  std::vector<SuperVector<T>> vectors;
  std::optional<SuperVector<T>> target;
};

template <class T> VectorListInput<T> vector_list_from_json(const njson& j) {
  PartitionSpec p = partition_from_json(need_field(j, "partition"), "partition");
  const njson& vs = need_field(j, "vectors");
  if (!vs.is_array() || vs.empty())
    fail(errc::parse_error, "vectors: expected a non-empty array");
  VectorListInput<T> out;
  for (size_t i = 0; i < vs.size(); ++i)
    out.vectors.emplace_back(
        vec_from_json<T>(vs[i], p.total(), "vectors[" + std::to_string(i) + "]"), p);
  if (j.contains("target"))
    out.target = SuperVector<T>(vec_from_json<T>(j.at("target"), p.total(), "target"), p);
  return out;
}

// ---- model files ----

struct MarkovInput {
  MarkovSuperChain chain;
  std::optional<DistributionSuperVector> x0;
};

inline MarkovInput markov_from_json(const njson& j) {
  std::string kind = need_field(j, "kind").get<std::string>();
  MarkovInput out;
  if (kind == "markov-row")
    out.chain.kind = ChainKind::row;
  else if (kind == "markov-diagonal")
    out.chain.kind = ChainKind::diagonal;
  else
    fail(errc::parse_error, "kind: expected \"markov-row\" or \"markov-diagonal\", got \"" +
                                kind + "\"");
  const njson& blocks = need_field(j, "blocks");
  if (!blocks.is_array() || blocks.empty())
    fail(errc::parse_error, "blocks: expected a non-empty array of matrices");
  for (size_t t = 0; t < blocks.size(); ++t)
    out.chain.transitions.push_back(
        rows_from_json<double>(blocks[t], -1, -1, "blocks[" + std::to_string(t) + "]"));
  if (j.contains("labels")) {
    const njson& ls = j.at("labels");
    if (!ls.is_array() || ls.size() != blocks.size())
      fail(errc::parse_error, "labels: expected one name list per block");
    for (size_t t = 0; t < ls.size(); ++t) {
      std::vector<std::string> names;
      for (const auto& n : ls[t]) names.push_back(n.get<std::string>());
      out.chain.labels.push_back(std::move(names));
    }
  }
  validate_chain(out.chain);
  if (j.contains("x0")) {
    DistributionSuperVector x;
    const njson& xs = j.at("x0");
    if (!xs.is_array() || xs.size() != blocks.size())
      fail(errc::parse_error, "x0: expected one distribution per block");
    for (size_t t = 0; t < xs.size(); ++t)
      x.blocks.push_back(vec_from_json<double>(
          xs[t], out.chain.transitions[t].rows(), "x0[" + std::to_string(t) + "]"));
    validate_distribution(x, out.chain);
    out.x0 = std::move(x);
  }
  return out;
}

inline LeontiefModel leontief_from_json(const njson& j, bool relaxed = false) {
  std::string kind = need_field(j, "kind").get<std::string>();
  LeontiefModel m;
  const char* coeff_field;
  if (kind == "leontief-closed") {
    m.kind = LeontiefKind::closed;
    coeff_field = "A";
  } else if (kind == "leontief-open") {
    m.kind = LeontiefKind::open;
    coeff_field = "C";
  } else {
    fail(errc::parse_error, "kind: expected \"leontief-closed\" or \"leontief-open\", got \"" +
                                kind + "\"");
  }
  if (j.contains("variant")) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "row")
      m.variant = LeontiefVariant::row;
    else if (v == "diagonal")
      m.variant = LeontiefVariant::diagonal;
    else
      fail(errc::parse_error, "variant: expected \"row\" or \"diagonal\", got \"" + v + "\"");
  }
  const njson& blocks = need_field(j, coeff_field);
  if (!blocks.is_array() || blocks.empty())
    fail(errc::parse_error, std::string(coeff_field) + ": expected a non-empty array of matrices");
  for (size_t t = 0; t < blocks.size(); ++t)
    m.blocks.push_back(rows_from_json<double>(
        blocks[t], -1, -1, std::string(coeff_field) + "[" + std::to_string(t) + "]"));
  if (m.kind == LeontiefKind::open) {
    const njson& ds = need_field(j, "d");
    if (!ds.is_array() || ds.size() != blocks.size())
      fail(errc::parse_error, "d: expected one demand vector per block");
    for (size_t t = 0; t < ds.size(); ++t)
      m.demand.push_back(
          vec_from_json<double>(ds[t], m.blocks[t].rows(), "d[" + std::to_string(t) + "]"));
  }
  validate_leontief(m, relaxed);
  return m;
}

// ---- serialization ----

inline njson scalar_to_json(double x) { return njson(x); }
inline njson scalar_to_json(const Rat& x) { return njson(x.get_str()); }

template <class T> njson mat_to_json(const Mat<T>& m) {
  njson rows = njson::array();
  for (index_t i = 0; i < m.rows(); ++i) {
    njson row = njson::array();
    for (index_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class T> njson vec_to_json(const Vec<T>& v) {
  njson out = njson::array();
  for (index_t j = 0; j < v.size(); ++j) out.push_back(scalar_to_json(v(j)));
  return out;
}

inline njson partition_to_json(const PartitionSpec& p) {
  njson out = njson::array();
  for (index_t l : p.lengths()) out.push_back(l);
  return out;
}

template <class T> njson to_json(const SuperMatrix<T>& a) {
  return njson{{"row_partition", partition_to_json(a.row_partition)},
               {"col_partition", partition_to_json(a.col_partition)},
               {"data", mat_to_json(a.data)}};
}

template <class T> njson to_json(const SuperDiagonalMatrix<T>& a) {
  njson blocks = njson::array();
  for (index_t i = 0; i < a.block_count(); ++i)
    blocks.push_back(njson{{"rows", a.block(i).rows()},
                           {"cols", a.block(i).cols()},
                           {"data", mat_to_json(a.block(i))}});
  return njson{{"blocks", std::move(blocks)}};
}

template <class T> njson to_json(const SuperVector<T>& v) {
  return njson{{"partition", partition_to_json(v.partition)},
               {"entries", vec_to_json(v.entries)}};
}

} // namespace superlin
