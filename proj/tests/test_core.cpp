#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "superlin/core.hpp"

using namespace superlin;

namespace {

SuperMatrix<double> sample_4x4() {
  // symmetric with the partition lines on the same cuts both ways
  Mat<double> m(4, 4);
  m << 4, 3, 2, 7,
       3, 6, 1, 4,
       2, 1, 5, 2,
       7, 4, 2, 7;
  return make_super_matrix(m, PartitionSpec({2, 2}), PartitionSpec({2, 2}));
}

Mat<double> sample_5x5() {
  Mat<double> m(5, 5);
  m << 3, 6, 0, 4, 5,
       2, 1, 6, 3, 0,
       1, 1, 1, 2, 1,
       0, 1, 0, 1, 0,
       2, 0, 1, 2, 1;
  return m;
}

} // namespace

TEST_CASE("partition bookkeeping") {
  PartitionSpec p({3, 2, 4});
  CHECK(p.blocks() == 3);
  CHECK(p.total() == 9);
  CHECK(p.offset(0) == 0);
  CHECK(p.offset(1) == 3);
  CHECK(p.offset(2) == 5);
  CHECK(p.length(2) == 4);
  CHECK(p == PartitionSpec({3, 2, 4}));
  CHECK(p != PartitionSpec({3, 6}));
}

TEST_CASE("super vector addition, the worked rational-field case") {
  SuperVector<double> x(Vec<double>(5), PartitionSpec({3, 2}));
  SuperVector<double> y(Vec<double>(5), PartitionSpec({3, 2}));
  x.entries << 3, 2, 1, -5, 3;
  y.entries << 0, 2, 4, 1, -2;
  SuperVector<double> s = add(x, y);
  Vec<double> want(5);
  want << 3, 4, 5, -4, 1;
  CHECK(equals(s, SuperVector<double>(want, PartitionSpec({3, 2}))));
  // the zero vector of the type is the identity and -x the inverse
  SuperVector<double> z(Vec<double>::Zero(5), PartitionSpec({3, 2}));
  CHECK(equals(add(x, z), x));
  CHECK(equals(add(x, scalar_mul(-1.0, x)), z));
  // and the group is abelian
  CHECK(equals(add(x, y), add(y, x)));
}

TEST_CASE("vectors of different type do not add") {
  SuperVector<double> x(Vec<double>::Zero(5), PartitionSpec({3, 2}));
  SuperVector<double> y(Vec<double>::Zero(5), PartitionSpec({2, 3}));
  CHECK_THROWS_AS(add(x, y), super_error);
  try {
    add(x, y);
  } catch (const super_error& e) {
    CHECK(e.code == errc::incompatible_partition);
  }
}

TEST_CASE("matrices with mismatched block orders do not add") {
  // both are 3x3 second order square supermatrices, but the submatrix
  // orders disagree, so blockwise addition is undefined
  Mat<double> a(3, 3), b(3, 3);
  a << 3, 0, 1,
       1, 2, 7,
       4, 3, 6;
  b << 2, 1, 3,
       5, 4, 1,
       2, 0, 2;
  SuperMatrix<double> sa = make_super_matrix(a, PartitionSpec({2, 1}), PartitionSpec({2, 1}));
  SuperMatrix<double> sb = make_super_matrix(b, PartitionSpec({1, 2}), PartitionSpec({1, 2}));
  CHECK_THROWS_AS(add(sa, sb), super_error);
  try {
    add(sa, sb);
  } catch (const super_error& e) {
    CHECK(e.code == errc::incompatible_partition);
  }
  // same partitions add entrywise and keep the type
  SuperMatrix<double> sum = add(sa, repartition(sb, PartitionSpec({2, 1}), PartitionSpec({2, 1})));
  CHECK(sum.row_partition == sa.row_partition);
  CHECK(sum.data(0, 0) == doctest::Approx(5.0));
  CHECK(sum.data(2, 2) == doctest::Approx(8.0));
}

TEST_CASE("equality: simple versus strict") {
  // one simple matrix, two different partitions: equal as grids, not as types
  SuperMatrix<double> a =
      make_super_matrix(sample_5x5(), PartitionSpec({3, 2}), PartitionSpec({3, 2}));
  SuperMatrix<double> b =
      make_super_matrix(sample_5x5(), PartitionSpec({4, 1}), PartitionSpec({4, 1}));
  CHECK(simple_equals(a, b));
  CHECK(!equals(a, b));
  CHECK(equals(a, a));
}

TEST_CASE("a symmetrically partitioned symmetric matrix is a transpose fixed point") {
  SuperMatrix<double> a = sample_4x4();
  CHECK(is_symmetrically_partitioned(a));
  CHECK(is_symmetric_super(a));
  SuperMatrix<double> t = transpose(a);
  CHECK(equals(t, a));
}

TEST_CASE("transpose swaps partitions and is an involution") {
  std::mt19937_64 rng(101);
  Mat<double> m = oracle::random_mat(rng, 5, 3);
  SuperMatrix<double> a = make_super_matrix(m, PartitionSpec({2, 3}), PartitionSpec({1, 2}));
  SuperMatrix<double> t = transpose(a);
  CHECK(t.row_partition == a.col_partition);
  CHECK(t.col_partition == a.row_partition);
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) CHECK(t.data(j, i) == m(i, j));
  CHECK(equals(transpose(t), a));
}

TEST_CASE("block views address the partition grid") {
  SuperMatrix<double> a = sample_4x4();
  CHECK(a.block_rows() == 2);
  CHECK(a.block_cols() == 2);
  CHECK(a.block(0, 1)(0, 0) == doctest::Approx(2.0));
  CHECK(a.block(1, 0)(1, 1) == doctest::Approx(4.0));
  SuperVector<double> v(Vec<double>(5), PartitionSpec({3, 2}));
  v.entries << 1, 2, 3, 4, 5;
  CHECK(v.block(1)(0) == doctest::Approx(4.0));
}

TEST_CASE("scalar and blockwise scaling") {
  std::mt19937_64 rng(102);
  PartitionSpec p({2, 3});
  SuperVector<double> v = oracle::random_vector(rng, p);
  SuperVector<double> w = scalar_mul(2.5, v);
  for (index_t i = 0; i < v.entries.size(); ++i)
    CHECK(w.entries(i) == doctest::Approx(2.5 * v.entries(i)));
  // blockwise: a different factor on each block
  SuperScalar<double> c(std::vector<double>{2.0, -1.0});
  SuperVector<double> b = blockwise_scale(c, v);
  CHECK(b.entries(0) == doctest::Approx(2.0 * v.entries(0)));
  CHECK(b.entries(4) == doctest::Approx(-v.entries(4)));
  SuperScalar<double> bad(std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_AS(blockwise_scale(bad, v), super_error);
}

TEST_CASE("flatten and repartition leave the grid alone") {
  SuperMatrix<double> a =
      make_super_matrix(sample_5x5(), PartitionSpec({3, 2}), PartitionSpec({3, 2}));
  SuperMatrix<double> b = repartition(a, PartitionSpec({1, 4}), PartitionSpec({2, 3}));
  CHECK(b.row_partition == PartitionSpec({1, 4}));
  CHECK(simple_equals(a, b));
  CHECK(oracle::max_diff(oracle::from_eigen(flatten(a)), oracle::from_eigen(flatten(b))) == 0.0);
}

TEST_CASE("super diagonal matrices flatten with zero off-diagonal blocks") {
  Mat<double> b1(2, 2), b2(1, 3);
  b1 << 1, 2, 3, 4;
  b2 << 5, 6, 7;
  SuperDiagonalMatrix<double> d(std::vector<Mat<double>>{b1, b2});
  CHECK(d.row_partition() == PartitionSpec({2, 1}));
  CHECK(d.col_partition() == PartitionSpec({2, 3}));
  CHECK(!d.is_square_square());
  Mat<double> f = flatten(d);
  CHECK(f.rows() == 3);
  CHECK(f.cols() == 5);
  CHECK(f(0, 1) == 2.0);
  CHECK(f(2, 3) == 6.0);
  CHECK(f(0, 3) == 0.0);
  CHECK(f(2, 0) == 0.0);
  SuperMatrix<double> s = to_super_matrix(d);
  CHECK(s.row_partition == d.row_partition());
}

TEST_CASE("addition against a dense oracle on random grids") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    PartitionSpec r = oracle::random_partition(rng, 1, 3, 1, 4);
    PartitionSpec c = oracle::random_partition(rng, 1, 3, 1, 4);
    Mat<double> ma = oracle::random_mat(rng, r.total(), c.total());
    Mat<double> mb = oracle::random_mat(rng, r.total(), c.total());
    SuperMatrix<double> s = add(make_super_matrix(ma, r, c), make_super_matrix(mb, r, c));
    for (index_t i = 0; i < ma.rows(); ++i)
      for (index_t j = 0; j < ma.cols(); ++j)
        CHECK(s.data(i, j) == doctest::Approx(ma(i, j) + mb(i, j)));
  }
}

TEST_CASE("rational scalars stay exact through the additive layer") {
  Mat<Rat> a(2, 2);
  a << Rat(1, 3), Rat(1, 6), Rat(2, 7), Rat(5, 2);
  SuperMatrix<Rat> sa = make_super_matrix(a, PartitionSpec({1, 1}), PartitionSpec({1, 1}));
  SuperMatrix<Rat> twice = add(sa, sa);
  CHECK(twice.data(0, 0) == Rat(2, 3));
  CHECK(twice.data(1, 1) == Rat(5, 1));
  SuperMatrix<Rat> t = transpose(sa);
  CHECK(t.data(0, 1) == Rat(2, 7));
}
