#pragma once

#include <Eigen/Dense>

#include "core.hpp"

namespace superlin {

// A map between super spaces of the same type: one block per partition line,
// stored as the super diagonal matrix it corresponds to.
template <class T> struct SuperLinearMap {
  SuperDiagonalMatrix<T> matrix;

  SuperLinearMap() = default;
  explicit SuperLinearMap(SuperDiagonalMatrix<T> m) : matrix(std::move(m)) {}

  index_t block_count() const { return matrix.block_count(); }
  PartitionSpec domain_partition() const { return matrix.col_partition(); }
  PartitionSpec codomain_partition() const { return matrix.row_partition(); }
  const Mat<T>& block(index_t i) const { return matrix.block(i); }
};

template <class T> SuperLinearMap<T> identity_map(const PartitionSpec& p) {
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < p.blocks(); ++i)
    bs.push_back(Mat<T>::Identity(p.length(i), p.length(i)));
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

template <class T> SuperVector<T> apply(const SuperLinearMap<T>& t, const SuperVector<T>& v) {
  if (v.partition != t.domain_partition())
    fail(errc::partition_mismatch, "vector type does not match the map domain");
  PartitionSpec cod = t.codomain_partition();
  Vec<T> out = Vec<T>::Zero(cod.total());
  for (index_t i = 0; i < t.block_count(); ++i)
    out.segment(cod.offset(i), cod.length(i)) = t.block(i) * v.block(i);
  return SuperVector<T>(std::move(out), cod);
}

// s after t
template <class T>
SuperLinearMap<T> compose(const SuperLinearMap<T>& s, const SuperLinearMap<T>& t) {
  if (t.codomain_partition() != s.domain_partition())
    fail(errc::partition_mismatch, "inner codomain does not match outer domain");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < s.block_count(); ++i) bs.push_back(s.block(i) * t.block(i));
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

template <class T>
SuperLinearMap<T> add_maps(const SuperLinearMap<T>& a, const SuperLinearMap<T>& b) {
  if (a.domain_partition() != b.domain_partition() ||
      a.codomain_partition() != b.codomain_partition())
    fail(errc::partition_mismatch, "maps are not of the same type");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < a.block_count(); ++i) bs.push_back(a.block(i) + b.block(i));
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

template <class T> SuperLinearMap<T> scale_map(const T& c, const SuperLinearMap<T>& a) {
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < a.block_count(); ++i) bs.push_back(Mat<T>(a.block(i) * c));
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

// pivots below rel_tol times the largest are treated as zero
template <class T> index_t mat_rank(const Mat<T>& m, double rel_tol = 1e-10) {
  Eigen::FullPivLU<Mat<T>> lu(m);
  if constexpr (!scalar_traits<T>::is_exact) lu.setThreshold(rel_tol);
  return lu.rank();
}

struct RankNullity {
  std::vector<index_t> rank, nullity;
};

template <class T> RankNullity rank_nullity(const SuperLinearMap<T>& t, double rel_tol = 1e-10) {
  RankNullity rn;
  for (index_t i = 0; i < t.block_count(); ++i) {
    index_t r = mat_rank(t.block(i), rel_tol);
    rn.rank.push_back(r);
    rn.nullity.push_back(t.block(i).cols() - r);
  }
  return rn;
}

template <class T> Mat<T> mat_inverse(const Mat<T>& m, index_t block_index, double rel_tol = 1e-10) {
  if (m.rows() != m.cols())
    fail(errc::non_square_block, "block " + std::to_string(block_index) + " is not square");
  Eigen::FullPivLU<Mat<T>> lu(m);
  if constexpr (!scalar_traits<T>::is_exact) lu.setThreshold(rel_tol);
  if (lu.rank() < m.rows())
    fail(errc::singular_block, "block " + std::to_string(block_index) + " is singular");
  return lu.inverse();
}

template <class T> SuperLinearMap<T> invert(const SuperLinearMap<T>& t, double rel_tol = 1e-10) {
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < t.block_count(); ++i) bs.push_back(mat_inverse(t.block(i), i, rel_tol));
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

// natural dimension of SL(V, W): sum of m_i * n_i, always within m * n
inline index_t sl_dimension(const PartitionSpec& domain, const PartitionSpec& codomain) {
  if (domain.blocks() != codomain.blocks())
    fail(errc::component_count_mismatch, "domain and codomain block counts differ");
  index_t d = 0;
  for (index_t i = 0; i < domain.blocks(); ++i) d += domain.length(i) * codomain.length(i);
  return d;
}

inline index_t sl_dimension_bound(const PartitionSpec& domain, const PartitionSpec& codomain) {
  return domain.total() * codomain.total();
}

// widen the codomain by padding each block with zero rows
template <class T>
SuperLinearMap<T> embed_map(const SuperLinearMap<T>& t, const PartitionSpec& codomain) {
  if (codomain.blocks() != t.block_count())
    fail(errc::component_count_mismatch, "embedding must keep the block count");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < t.block_count(); ++i) {
    const Mat<T>& b = t.block(i);
    if (codomain.length(i) < b.rows())
      fail(errc::partition_mismatch, "embedding codomain smaller than block " + std::to_string(i));
    Mat<T> wide = Mat<T>::Zero(codomain.length(i), b.cols());
    wide.topRows(b.rows()) = b;
    bs.push_back(std::move(wide));
  }
  return SuperLinearMap<T>(SuperDiagonalMatrix<T>(std::move(bs)));
}

} // namespace superlin
