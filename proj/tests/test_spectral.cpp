#include <doctest.h>

#include <complex>
#include <random>

#include "oracles.hpp"
#include "superlin/spectral.hpp"

using namespace superlin;

namespace {

// the rotation-block operator whose characteristic parts are all x^2 + 1
SuperDiagonalMatrix<double> rotations() {
  Mat<double> a1(2, 2), a2(2, 2), a3(2, 2);
  a1 << 0, -1, 1, 0;
  a2 << 0, -1, 1, 0;
  a3 << 0, 1, -1, 0;
  return SuperDiagonalMatrix<double>(std::vector<Mat<double>>{a1, a2, a3});
}

SuperDiagonalMatrix<Rat> rotations_exact() {
  Mat<Rat> a1(2, 2), a2(2, 2), a3(2, 2);
  a1 << Rat(0), Rat(-1), Rat(1), Rat(0);
  a2 << Rat(0), Rat(-1), Rat(1), Rat(0);
  a3 << Rat(0), Rat(1), Rat(-1), Rat(0);
  return SuperDiagonalMatrix<Rat>(std::vector<Mat<Rat>>{a1, a2, a3});
}

Mat<double> sym_block(std::mt19937_64& rng, index_t n) {
  Mat<double> m = oracle::random_mat(rng, n, n);
  return Mat<double>((m + m.transpose()) / 2.0);
}

} // namespace

TEST_CASE("super determinant blockwise and against the dense grid") {
  Mat<double> b1(2, 2), b2(1, 1);
  b1 << 1, 2, 3, 4; // det -2
  b2 << 5;
  SuperDiagonalMatrix<double> a(std::vector<Mat<double>>{b1, b2});
  SuperScalar<double> d = super_det(a);
  REQUIRE(d.size() == 2);
  CHECK(d[0] == doctest::Approx(-2.0));
  CHECK(d[1] == doctest::Approx(5.0));
  // the flattened determinant is the product of the components
  double dense = oracle::det(oracle::from_eigen(flatten(a)));
  CHECK(dense == doctest::Approx(d[0] * d[1]).epsilon(1e-10));

  SuperScalar<double> di = super_det(
      SuperDiagonalMatrix<double>(std::vector<Mat<double>>{Mat<double>::Identity(2, 2),
                                                           Mat<double>::Identity(3, 3)}));
  CHECK(di[0] == doctest::Approx(1.0));
  CHECK(di[1] == doctest::Approx(1.0));

  Mat<double> rect(1, 2);
  rect << 1, 2;
  CHECK_THROWS_AS(super_det(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{rect})),
                  super_error);
}

TEST_CASE("super determinant is exact over the rationals") {
  Mat<Rat> b(2, 2);
  b << Rat(1, 2), Rat(1, 3), Rat(1, 4), Rat(1, 5);
  SuperScalar<Rat> d = super_det(SuperDiagonalMatrix<Rat>(std::vector<Mat<Rat>>{b}));
  CHECK(d[0] == Rat(1, 2) * Rat(1, 5) - Rat(1, 3) * Rat(1, 4));
}

TEST_CASE("characteristic parts of the rotation operator are x^2 + 1, exactly") {
  SuperPolynomial<Rat> f = char_super_poly(rotations_exact());
  REQUIRE(f.size() == 3);
  for (index_t i = 0; i < 3; ++i) {
    CHECK(f.part(i).coeffs == std::vector<Rat>{Rat(1), Rat(0), Rat(1)});
  }
  CHECK(f.is_super_monic());
  // and over the reals none of the blocks has a characteristic value
  auto values = char_super_values(rotations());
  REQUIRE(values.size() == 3);
  for (const auto& block : values) CHECK(block.empty());
}

TEST_CASE("characteristic polynomial agrees with dense determinants at sample points") {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 40; ++trial) {
    index_t n = 1 + static_cast<index_t>(rng() % 5);
    Mat<double> a = oracle::random_mat(rng, n, n);
    Polynomial<double> p = charpoly_block(a);
    CHECK(p.degree() == n);
    CHECK(p.is_monic(1e-9));
    for (double x : {0.0, 1.0, -1.7, 2.3}) {
      oracle::grid shifted = oracle::from_eigen(a);
      for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < n; ++j) shifted[i][j] = -shifted[i][j];
        shifted[i][i] += x;
      }
      double want = oracle::det(shifted); // det(xI - A) by hand
      CHECK(p.eval(x) == doctest::Approx(want).epsilon(1e-7).scale(std::pow(2.0 + n, n)));
    }
  }
}

TEST_CASE("a companion matrix has its polynomial as characteristic part") {
  // companion of x^3 - 2x^2 + 3x - 4, built by hand
  Mat<Rat> comp = Mat<Rat>::Zero(3, 3);
  comp(1, 0) = Rat(1);
  comp(2, 1) = Rat(1);
  comp(0, 2) = Rat(4);
  comp(1, 2) = Rat(-3);
  comp(2, 2) = Rat(2);
  Polynomial<Rat> p = charpoly_block(comp);
  CHECK(p.coeffs == std::vector<Rat>{Rat(-4), Rat(3), Rat(-2), Rat(1)});
}

TEST_CASE("eigenvalues of a triangular block read off the diagonal") {
  Mat<double> b(3, 3);
  b << 1, 5, -2,
       0, 2, 7,
       0, 0, 3;
  SuperDiagonalMatrix<double> a(std::vector<Mat<double>>{b});
  auto values = char_super_values(a);
  REQUIRE(values.size() == 1);
  REQUIRE(values[0].size() == 3);
  CHECK(values[0][0].value.real() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(values[0][1].value.real() == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(values[0][2].value.real() == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("characteristic vectors really are eigenvectors, scaled to a unit lead") {
  Mat<double> b1 = Mat<double>::Zero(2, 2);
  b1(0, 0) = 2;
  b1(1, 1) = 5;
  Mat<double> b2 = Mat<double>::Zero(2, 2);
  b2(0, 0) = 5;
  b2(1, 1) = 7;
  SuperDiagonalMatrix<double> a(std::vector<Mat<double>>{b1, b2});
  SuperScalar<double> c(std::vector<double>{5.0, 5.0});
  std::vector<Mat<double>> vs = char_super_vectors(a, c);
  REQUIRE(vs.size() == 2);
  for (index_t i = 0; i < 2; ++i) {
    const Mat<double>& basis = vs[static_cast<size_t>(i)];
    REQUIRE(basis.cols() == 1);
    Mat<double> want = a.block(i) * basis - basis * 5.0;
    CHECK(max_abs(want) < 1e-8);
    // leading nonzero entry normalized to one
    index_t lead = 0;
    while (std::abs(basis(lead, 0)) < 1e-9) ++lead;
    CHECK(basis(lead, 0) == doctest::Approx(1.0));
  }
  SuperScalar<double> wrong(std::vector<double>{3.0, 5.0});
  try {
    char_super_vectors(a, wrong);
    CHECK(false);
  } catch (const super_error& e) {
    CHECK(e.code == errc::not_an_eigenvalue);
    CHECK(std::string(e.what()).find("component 0") != std::string::npos);
  }
}

TEST_CASE("minimal part of a projection drops the repeated factor") {
  // diag(1,1,0) squares to itself: minimal polynomial x^2 - x, not the cubic
  Mat<Rat> b = Mat<Rat>::Zero(3, 3);
  b(0, 0) = Rat(1);
  b(1, 1) = Rat(1);
  SuperDiagonalMatrix<Rat> a(std::vector<Mat<Rat>>{b});
  SuperPolynomial<Rat> mp = minimal_super_poly(a);
  CHECK(mp.part(0).coeffs == std::vector<Rat>{Rat(0), Rat(-1), Rat(1)});
  // and it divides the characteristic part with no remainder
  SuperPolynomial<Rat> cp = char_super_poly(a);
  auto [q, r] = poly_divmod(cp.part(0), mp.part(0));
  CHECK(r.is_zero());
}

TEST_CASE("minimal and characteristic parts share roots on random blocks") {
  std::mt19937_64 rng(402);
  for (int trial = 0; trial < 30; ++trial) {
    SuperDiagonalMatrix<double> a = oracle::random_diag(rng, 1, 3, 1, 4);
    SuperPolynomial<double> mp = minimal_super_poly(a);
    SuperPolynomial<double> cp = char_super_poly(a);
    for (index_t i = 0; i < a.block_count(); ++i) {
      // same clustered root sets (random blocks have simple spectra, so the
      // minimal part generically equals the characteristic part)
      auto mr = cluster_roots(roots(complexify(mp.part(i))));
      auto cr = cluster_roots(roots(complexify(cp.part(i))));
      REQUIRE(mr.size() == cr.size());
      // conjugate pairs with near-tied real parts may come back in either
      // order, so match as sets rather than by index
      auto covered = [](const auto& xs, const auto& ys) {
        for (const auto& x : xs) {
          bool hit = false;
          for (const auto& y : ys)
            if (std::abs(x.value - y.value) < 1e-5 * std::max(1.0, std::abs(x.value))) hit = true;
          if (!hit) return false;
        }
        return true;
      };
      CHECK(covered(mr, cr));
      CHECK(covered(cr, mr));
      // the minimal part annihilates the block
      CHECK(max_abs(poly_eval_matrix(mp.part(i), a.block(i))) < 1e-7);
    }
  }
}

TEST_CASE("similarity preserves the characteristic super polynomial") {
  std::mt19937_64 rng(403);
  for (int trial = 0; trial < 20; ++trial) {
    PartitionSpec p = oracle::random_partition(rng, 2, 3, 1, 4);
    std::vector<Mat<double>> as, ps;
    for (index_t i = 0; i < p.blocks(); ++i) {
      as.push_back(oracle::random_mat(rng, p.length(i), p.length(i)));
      Mat<double> m = oracle::random_mat(rng, p.length(i), p.length(i));
      m += Mat<double>::Identity(p.length(i), p.length(i)) * 3.0;
      ps.push_back(m);
    }
    SuperDiagonalMatrix<double> a(as), pm(ps);
    SuperDiagonalMatrix<double> conj = similarity_conjugate(a, pm);
    SuperPolynomial<double> f = char_super_poly(a);
    SuperPolynomial<double> g = char_super_poly(conj);
    for (index_t i = 0; i < p.blocks(); ++i) {
      REQUIRE(f.part(i).degree() == g.part(i).degree());
      for (int k = 0; k <= f.part(i).degree(); ++k)
        CHECK(f.part(i).coeff(k) ==
              doctest::Approx(g.part(i).coeff(k)).epsilon(1e-6).scale(10.0));
    }
  }
}

TEST_CASE("cayley-hamilton: blocks annihilate their characteristic parts") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    SuperDiagonalMatrix<double> a = oracle::random_diag(rng, 2, 4, 1, 5);
    SuperScalar<double> r = cayley_hamilton_residual(a);
    for (index_t i = 0; i < r.size(); ++i) CHECK(r[i] <= 1e-7);
  }
  // exact arithmetic drives the residual to literal zero
  std::uniform_int_distribution<int> coin(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Mat<Rat>> bs;
    for (int b = 0; b < 2; ++b) {
      index_t n = 2 + static_cast<index_t>(rng() % 3);
      Mat<Rat> m(n, n);
      for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) m(i, j) = Rat(coin(rng));
      bs.push_back(m);
    }
    SuperScalar<double> r = cayley_hamilton_residual(SuperDiagonalMatrix<Rat>(bs));
    for (index_t i = 0; i < r.size(); ++i) CHECK(r[i] == 0.0);
  }
}

TEST_CASE("diagonalizability verdicts") {
  // distinct eigenvalues: yes, with an eigenvector witness
  Mat<double> good(2, 2);
  good << 1, 1, 0, 2;
  DiagonalizabilityReport rep =
      is_super_diagonalizable(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{good}));
  CHECK(rep.diagonalizable);
  REQUIRE(rep.witness.size() == 1);
  const Mat<cplx>& w = rep.witness[0];
  REQUIRE(w.cols() == 2);
  // columns are eigenvectors of the complexified block
  Mat<cplx> g = complexify(good);
  for (index_t j = 0; j < 2; ++j) {
    cplx lam = rep.minpoly_roots[0][static_cast<size_t>(j)].value;
    CHECK(max_abs(Mat<cplx>(g * w.col(j) - w.col(j) * lam)) < 1e-7);
  }

  // a shear block: repeated root in the minimal part, so no
  Mat<double> shear(2, 2);
  shear << 1, 1, 0, 1;
  DiagonalizabilityReport bad =
      is_super_diagonalizable(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{good, shear}));
  CHECK(!bad.diagonalizable);
  CHECK(bad.block_ok[0] == 1);
  CHECK(bad.block_ok[1] == 0);

  // rotations have distinct complex roots but no real ones: no over the
  // reals, yes over the complex scalars
  CHECK(!is_super_diagonalizable(rotations()).diagonalizable);
  std::vector<Mat<cplx>> cb;
  for (const auto& b : rotations().blocks) cb.push_back(complexify(b));
  CHECK(is_super_diagonalizable(SuperDiagonalMatrix<cplx>(cb)).diagonalizable);
}

TEST_CASE("spectral resolution: projections sum to the identity and split A") {
  std::mt19937_64 rng(405);
  for (int trial = 0; trial < 20; ++trial) {
    PartitionSpec p = oracle::random_partition(rng, 1, 3, 1, 4);
    std::vector<Mat<double>> bs;
    for (index_t i = 0; i < p.blocks(); ++i) bs.push_back(sym_block(rng, p.length(i)));
    SuperDiagonalMatrix<double> a(bs);
    SpectralResolution<double> res = spectral_resolution(a);
    for (index_t i = 0; i < p.blocks(); ++i) {
      size_t k = static_cast<size_t>(i);
      index_t n = p.length(i);
      Mat<double> sum = Mat<double>::Zero(n, n);
      Mat<double> recon = Mat<double>::Zero(n, n);
      for (size_t u = 0; u < res.projections[k].size(); ++u) {
        sum += res.projections[k][u];
        recon += res.projections[k][u] * res.eigenvalues[k][u];
        for (size_t v = 0; v < res.projections[k].size(); ++v) {
          Mat<double> prod = res.projections[k][u] * res.projections[k][v];
          Mat<double> want = u == v ? res.projections[k][u] : Mat<double>::Zero(n, n);
          CHECK(max_abs(Mat<double>(prod - want)) < 1e-7);
        }
      }
      CHECK(max_abs(Mat<double>(sum - Mat<double>::Identity(n, n))) < 1e-8);
      CHECK(max_abs(Mat<double>(recon - a.block(i))) < 1e-7);
    }
    // f(A) with f(x) = x^2 equals the straightforward square
    SuperDiagonalMatrix<double> sq =
        apply_function<double>(res, [](const double& x) { return x * x; });
    for (index_t i = 0; i < p.blocks(); ++i) {
      Mat<double> want = a.block(i) * a.block(i);
      CHECK(max_abs(Mat<double>(sq.block(i) - want)) < 1e-7);
    }
  }
}

TEST_CASE("spectral resolution refuses non-normal blocks") {
  Mat<double> shear(2, 2);
  shear << 1, 1, 0, 1;
  try {
    spectral_resolution(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{shear}));
    CHECK(false);
  } catch (const super_error& e) {
    CHECK(e.code == errc::not_normal);
  }
}

TEST_CASE("square roots of positive blocks") {
  std::mt19937_64 rng(406);
  for (int trial = 0; trial < 15; ++trial) {
    PartitionSpec p = oracle::random_partition(rng, 1, 3, 1, 4);
    std::vector<Mat<double>> bs;
    for (index_t i = 0; i < p.blocks(); ++i) {
      Mat<double> m = oracle::random_mat(rng, p.length(i), p.length(i));
      bs.push_back(Mat<double>(m * m.transpose()) +
                   Mat<double>(Mat<double>::Identity(p.length(i), p.length(i)) * 0.1));
    }
    SuperDiagonalMatrix<double> a(bs);
    SuperDiagonalMatrix<double> n = nonneg_sqrt(a);
    for (index_t i = 0; i < p.blocks(); ++i) {
      CHECK(max_abs(Mat<double>(n.block(i) * n.block(i) - a.block(i))) < 1e-8);
      CHECK(is_self_adjoint_block(n.block(i)));
    }
  }
  // a block with a negative eigenvalue has no nonnegative root
  Mat<double> neg = Mat<double>::Identity(2, 2);
  neg(1, 1) = -1;
  try {
    nonneg_sqrt(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{neg}));
    CHECK(false);
  } catch (const super_error& e) {
    CHECK(e.code == errc::negative_spectrum);
  }
  // and a non-symmetric block is rejected before any spectra are taken
  Mat<double> shear(2, 2);
  shear << 1, 1, 0, 1;
  try {
    nonneg_sqrt(SuperDiagonalMatrix<double>(std::vector<Mat<double>>{shear}));
    CHECK(false);
  } catch (const super_error& e) {
    CHECK(e.code == errc::not_self_adjoint);
  }
}

TEST_CASE("polar form: unitary times nonnegative recovers the operator") {
  std::mt19937_64 rng(407);
  for (int trial = 0; trial < 15; ++trial) {
    PartitionSpec p = oracle::random_partition(rng, 1, 3, 1, 4);
    std::vector<Mat<double>> bs;
    for (index_t i = 0; i < p.blocks(); ++i) {
      Mat<double> m = oracle::random_mat(rng, p.length(i), p.length(i));
      m += Mat<double>::Identity(p.length(i), p.length(i)) * 2.0; // invertible
      bs.push_back(m);
    }
    SuperDiagonalMatrix<double> a(bs);
    PolarDecomposition<double> pd = polar_decomposition(a);
    for (index_t i = 0; i < p.blocks(); ++i) {
      index_t n = p.length(i);
      Mat<double> utu = pd.unitary.block(i).transpose() * pd.unitary.block(i);
      CHECK(max_abs(Mat<double>(utu - Mat<double>::Identity(n, n))) < 1e-8);
      Mat<double> un = pd.unitary.block(i) * pd.nonneg.block(i);
      CHECK(max_abs(Mat<double>(un - a.block(i))) < 1e-8);
    }
  }
}
