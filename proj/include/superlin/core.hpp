#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scalars.hpp"

namespace superlin {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
using index_t = Eigen::Index;

constexpr double kDefaultTol = 1e-9;

template <class T> double max_abs(const Mat<T>& m) {
  double best = 0;
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) best = std::max(best, abs_val(m(i, j)));
  return best;
}

// The "thin lines": an ordered list of positive block lengths.
class PartitionSpec {
public:
  PartitionSpec() = default;
  explicit PartitionSpec(std::vector<index_t> lengths) : lengths_(std::move(lengths)) {
    if (lengths_.empty()) fail(errc::partition_mismatch, "partition needs at least one block");
    offsets_.resize(lengths_.size() + 1);
    offsets_[0] = 0;
    for (size_t i = 0; i < lengths_.size(); ++i) {
      if (lengths_[i] < 1) fail(errc::partition_mismatch, "block lengths must be >= 1");
      offsets_[i + 1] = offsets_[i] + lengths_[i];
    }
  }

  index_t blocks() const { return static_cast<index_t>(lengths_.size()); }
  index_t length(index_t i) const { return lengths_[static_cast<size_t>(i)]; }
  index_t offset(index_t i) const { return offsets_[static_cast<size_t>(i)]; }
  index_t total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  const std::vector<index_t>& lengths() const { return lengths_; }

  bool operator==(const PartitionSpec& o) const { return lengths_ == o.lengths_; }
  bool operator!=(const PartitionSpec& o) const { return !(*this == o); }

private:
  std::vector<index_t> lengths_;
  std::vector<index_t> offsets_;
};

// n-tuple of field elements, one per block
template <class T> struct SuperScalar {
  std::vector<T> comps;
  SuperScalar() = default;
  explicit SuperScalar(std::vector<T> c) : comps(std::move(c)) {}
  index_t size() const { return static_cast<index_t>(comps.size()); }
  T& operator[](index_t i) { return comps[static_cast<size_t>(i)]; }
  const T& operator[](index_t i) const { return comps[static_cast<size_t>(i)]; }
};

template <class T> struct SuperVector {
  Vec<T> entries;
  PartitionSpec partition;

  SuperVector() = default;
  SuperVector(Vec<T> e, PartitionSpec p) : entries(std::move(e)), partition(std::move(p)) {
    if (partition.total() != entries.size())
      fail(errc::partition_mismatch, "partition covers " + std::to_string(partition.total()) +
                                         " entries, vector has " + std::to_string(entries.size()));
  }

  index_t blocks() const { return partition.blocks(); }
  auto block(index_t i) { return entries.segment(partition.offset(i), partition.length(i)); }
  auto block(index_t i) const { return entries.segment(partition.offset(i), partition.length(i)); }
};

template <class T> struct SuperMatrix {
  Mat<T> data;
  PartitionSpec row_partition, col_partition;

  SuperMatrix() = default;
  SuperMatrix(Mat<T> d, PartitionSpec r, PartitionSpec c)
      : data(std::move(d)), row_partition(std::move(r)), col_partition(std::move(c)) {
    if (row_partition.total() != data.rows() || col_partition.total() != data.cols())
      fail(errc::partition_mismatch,
           "partition totals (" + std::to_string(row_partition.total()) + "," +
               std::to_string(col_partition.total()) + ") do not match grid " +
               std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
  }

  index_t block_rows() const { return row_partition.blocks(); }
  index_t block_cols() const { return col_partition.blocks(); }
  auto block(index_t i, index_t j) {
    return data.block(row_partition.offset(i), col_partition.offset(j), row_partition.length(i),
                      col_partition.length(j));
  }
  auto block(index_t i, index_t j) const {
    return data.block(row_partition.offset(i), col_partition.offset(j), row_partition.length(i),
                      col_partition.length(j));
  }
};

// Only the diagonal blocks are stored; off-diagonal is zero by construction.
template <class T> struct SuperDiagonalMatrix {
  std::vector<Mat<T>> blocks;

  SuperDiagonalMatrix() = default;
  explicit SuperDiagonalMatrix(std::vector<Mat<T>> bs) : blocks(std::move(bs)) {
    if (blocks.empty()) fail(errc::partition_mismatch, "need at least one block");
    for (const auto& b : blocks)
      if (b.rows() < 1 || b.cols() < 1)
        fail(errc::partition_mismatch, "blocks must be non-empty");
  }

  index_t block_count() const { return static_cast<index_t>(blocks.size()); }
  const Mat<T>& block(index_t i) const { return blocks[static_cast<size_t>(i)]; }
  Mat<T>& block(index_t i) { return blocks[static_cast<size_t>(i)]; }

  PartitionSpec row_partition() const {
    std::vector<index_t> l;
    for (const auto& b : blocks) l.push_back(b.rows());
    return PartitionSpec(l);
  }
  PartitionSpec col_partition() const {
    std::vector<index_t> l;
    for (const auto& b : blocks) l.push_back(b.cols());
    return PartitionSpec(l);
  }
  // every diagonal block square: the only shape a super determinant exists for
  bool is_square_square() const {
    for (const auto& b : blocks)
      if (b.rows() != b.cols()) return false;
    return true;
  }
};

// ---- construction and flattening ----

template <class T>
SuperMatrix<T> make_super_matrix(Mat<T> data, PartitionSpec r, PartitionSpec c) {
  return SuperMatrix<T>(std::move(data), std::move(r), std::move(c));
}

template <class T> Mat<T> flatten(const SuperMatrix<T>& a) { return a.data; }

template <class T> Mat<T> flatten(const SuperDiagonalMatrix<T>& a) {
  PartitionSpec r = a.row_partition(), c = a.col_partition();
  Mat<T> out = Mat<T>::Zero(r.total(), c.total());
  for (index_t i = 0; i < a.block_count(); ++i)
    out.block(r.offset(i), c.offset(i), r.length(i), c.length(i)) = a.block(i);
  return out;
}

template <class T> SuperMatrix<T> to_super_matrix(const SuperDiagonalMatrix<T>& a) {
  return SuperMatrix<T>(flatten(a), a.row_partition(), a.col_partition());
}

template <class T>
SuperMatrix<T> repartition(const SuperMatrix<T>& a, PartitionSpec r, PartitionSpec c) {
  return SuperMatrix<T>(a.data, std::move(r), std::move(c));
}

// ---- equality ----

template <class T> bool grid_equal(const Mat<T>& a, const Mat<T>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j)
      if (!is_zero_at<T>(a(i, j) - b(i, j), tol)) return false;
  return true;
}

// simple form comparison: partitions are ignored
template <class T>
bool simple_equals(const SuperMatrix<T>& a, const SuperMatrix<T>& b, double tol = kDefaultTol) {
  return grid_equal(a.data, b.data, tol);
}

// strict comparison: same type means same partitions too
template <class T>
bool equals(const SuperMatrix<T>& a, const SuperMatrix<T>& b, double tol = kDefaultTol) {
  return a.row_partition == b.row_partition && a.col_partition == b.col_partition &&
         simple_equals(a, b, tol);
}

template <class T>
bool equals(const SuperVector<T>& a, const SuperVector<T>& b, double tol = kDefaultTol) {
  if (a.partition != b.partition) return false;
  for (index_t i = 0; i < a.entries.size(); ++i)
    if (!is_zero_at<T>(a.entries(i) - b.entries(i), tol)) return false;
  return true;
}

// ---- additive structure ----

template <class T> SuperMatrix<T> add(const SuperMatrix<T>& a, const SuperMatrix<T>& b) {
  if (a.row_partition != b.row_partition || a.col_partition != b.col_partition)
    fail(errc::incompatible_partition, "summands are not of the same type");
  return SuperMatrix<T>(a.data + b.data, a.row_partition, a.col_partition);
}

template <class T> SuperVector<T> add(const SuperVector<T>& a, const SuperVector<T>& b) {
  if (a.partition != b.partition)
    fail(errc::incompatible_partition, "summands are not of the same type");
  return SuperVector<T>(a.entries + b.entries, a.partition);
}

template <class T> SuperMatrix<T> scalar_mul(const T& c, const SuperMatrix<T>& a) {
  return SuperMatrix<T>(Mat<T>(a.data * c), a.row_partition, a.col_partition);
}

template <class T> SuperVector<T> scalar_mul(const T& c, const SuperVector<T>& a) {
  return SuperVector<T>(Vec<T>(a.entries * c), a.partition);
}

template <class T>
SuperVector<T> blockwise_scale(const SuperScalar<T>& c, const SuperVector<T>& v) {
  if (c.size() != v.blocks())
    fail(errc::component_count_mismatch, std::to_string(c.size()) + " components against " +
                                             std::to_string(v.blocks()) + " blocks");
  SuperVector<T> out = v;
  for (index_t i = 0; i < v.blocks(); ++i) out.block(i) *= c[i];
  return out;
}

// ---- transpose and symmetry ----

template <class T> SuperMatrix<T> transpose(const SuperMatrix<T>& a) {
  return SuperMatrix<T>(a.data.transpose(), a.col_partition, a.row_partition);
}

template <class T> SuperDiagonalMatrix<T> transpose(const SuperDiagonalMatrix<T>& a) {
  std::vector<Mat<T>> bs;
  for (const auto& b : a.blocks) bs.push_back(b.transpose());
  return SuperDiagonalMatrix<T>(std::move(bs));
}

template <class T> bool is_symmetrically_partitioned(const SuperMatrix<T>& a) {
  return a.data.rows() == a.data.cols() && a.row_partition == a.col_partition;
}

template <class T> bool is_symmetric_super(const SuperMatrix<T>& a, double tol = kDefaultTol) {
  return is_symmetrically_partitioned(a) && grid_equal<T>(a.data, a.data.transpose(), tol);
}

} // namespace superlin
