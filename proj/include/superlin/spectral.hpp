#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "core.hpp"
#include "linmap.hpp"
#include "polynomial.hpp"

namespace superlin {

template <class T> void require_square_blocks(const SuperDiagonalMatrix<T>& a, const char* what) {
  for (index_t i = 0; i < a.block_count(); ++i)
    if (a.block(i).rows() != a.block(i).cols())
      fail(errc::non_square_block,
           std::string(what) + " needs a square super diagonal square matrix, block " +
               std::to_string(i) + " is " + std::to_string(a.block(i).rows()) + "x" +
               std::to_string(a.block(i).cols()));
}

template <class T> cplx to_cplx(const T& x) {
  if constexpr (std::is_same_v<T, cplx>)
    return x;
  else if constexpr (scalar_traits<T>::is_exact)
    return cplx(x.get_d(), 0.0);
  else
    return cplx(static_cast<double>(x), 0.0);
}

template <class T> Polynomial<cplx> complexify(const Polynomial<T>& p) {
  std::vector<cplx> c;
  for (const auto& x : p.coeffs) c.push_back(to_cplx(x));
  return Polynomial<cplx>(std::move(c));
}

template <class T> Mat<cplx> complexify(const Mat<T>& a) {
  Mat<cplx> out(a.rows(), a.cols());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) out(i, j) = to_cplx(a(i, j));
  return out;
}

// ---- determinant and characteristic polynomial ----

template <class T> SuperScalar<T> super_det(const SuperDiagonalMatrix<T>& a) {
  require_square_blocks(a, "the super determinant");
  SuperScalar<T> out;
  for (index_t i = 0; i < a.block_count(); ++i) {
    Eigen::FullPivLU<Mat<T>> lu(a.block(i));
    out.comps.push_back(lu.determinant());
  }
  return out;
}

template <class T> T scalar_from_index(index_t k) {
  if constexpr (std::is_same_v<T, cplx>)
    return cplx(static_cast<double>(k), 0.0);
  else
    return T(static_cast<long>(k));
}

// Faddeev-LeVerrier: exact over rationals, no eigenvalue machinery needed
template <class T> Polynomial<T> charpoly_block(const Mat<T>& a) {
  index_t n = a.rows();
  std::vector<T> c(static_cast<size_t>(n) + 1, T(0));
  c[static_cast<size_t>(n)] = T(1);
  Mat<T> id = Mat<T>::Identity(n, n);
  Mat<T> m = Mat<T>::Zero(n, n);
  for (index_t k = 1; k <= n; ++k) {
    m = Mat<T>(a * m) + Mat<T>(id * c[static_cast<size_t>(n - k + 1)]);
    Mat<T> am = a * m;
    T tr = T(0);
    for (index_t j = 0; j < n; ++j) tr += am(j, j);
    c[static_cast<size_t>(n - k)] = -tr / scalar_from_index<T>(k);
  }
  return Polynomial<T>(std::move(c));
}

template <class T> SuperPolynomial<T> char_super_poly(const SuperDiagonalMatrix<T>& a) {
  require_square_blocks(a, "the characteristic super polynomial");
  std::vector<Polynomial<T>> parts;
  for (index_t i = 0; i < a.block_count(); ++i) parts.push_back(charpoly_block(a.block(i)));
  return SuperPolynomial<T>(std::move(parts));
}

// ---- characteristic super values and vectors ----

// per block: eigenvalue clusters over the scalar field (real modes drop
// complex conjugate pairs, which is how a rotation block ends up with none)
template <class T>
std::vector<std::vector<RootCluster>> char_super_values(const SuperDiagonalMatrix<T>& a,
                                                        double cluster_tol = 1e-6) {
  SuperPolynomial<T> f = char_super_poly(a);
  std::vector<std::vector<RootCluster>> out;
  for (index_t i = 0; i < f.size(); ++i) {
    std::vector<RootCluster> cs = cluster_roots(roots(complexify(f.part(i))), cluster_tol);
    if constexpr (!scalar_traits<T>::is_complex) {
      std::vector<RootCluster> real_only;
      for (auto& c : cs)
        if (std::abs(c.value.imag()) <= 1e-7 * std::max(1.0, std::abs(c.value))) {
          c.value = cplx(c.value.real(), 0.0);
          real_only.push_back(c);
        }
      cs = std::move(real_only);
    }
    out.push_back(std::move(cs));
  }
  return out;
}

// scale each basis column so its leading entry is 1
template <class T> void normalize_columns(Mat<T>& basis) {
  for (index_t j = 0; j < basis.cols(); ++j) {
    double m = 0;
    for (index_t i = 0; i < basis.rows(); ++i) m = std::max(m, abs_val(basis(i, j)));
    if (m == 0) continue;
    for (index_t i = 0; i < basis.rows(); ++i) {
      if (abs_val(basis(i, j)) > 1e-9 * m) {
        T lead = basis(i, j);
        for (index_t r = 0; r < basis.rows(); ++r) basis(r, j) = basis(r, j) / lead;
        break;
      }
    }
  }
}

template <class T> Mat<T> kernel_basis(const Mat<T>& m, double rel_tol = 1e-8) {
  Eigen::FullPivLU<Mat<T>> lu(m);
  if constexpr (!scalar_traits<T>::is_exact) lu.setThreshold(rel_tol);
  if (lu.dimensionOfKernel() == 0) return Mat<T>(m.cols(), 0);
  Mat<T> k = lu.kernel();
  normalize_columns(k);
  return k;
}

template <class T>
std::vector<Mat<T>> char_super_vectors(const SuperDiagonalMatrix<T>& a, const SuperScalar<T>& c,
                                       double rel_tol = 1e-8) {
  require_square_blocks(a, "eigenvector extraction");
  if (c.size() != a.block_count())
    fail(errc::component_count_mismatch, std::to_string(c.size()) + " values against " +
                                             std::to_string(a.block_count()) + " blocks");
  std::vector<Mat<T>> out;
  for (index_t i = 0; i < a.block_count(); ++i) {
    index_t n = a.block(i).rows();
    Mat<T> shifted = a.block(i) - Mat<T>(Mat<T>::Identity(n, n) * c[i]);
    Mat<T> basis = kernel_basis(shifted, rel_tol);
    if (basis.cols() == 0)
      fail(errc::not_an_eigenvalue,
           "component " + std::to_string(i) + " is not a characteristic value of its block");
    out.push_back(std::move(basis));
  }
  return out;
}

// ---- minimal super polynomial ----

template <class T> Vec<T> flatten_to_vec(const Mat<T>& m) {
  Vec<T> v(m.rows() * m.cols());
  index_t k = 0;
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

template <class T> index_t column_rank(const Mat<T>& m, double tol) {
  if constexpr (scalar_traits<T>::is_exact) {
    return Eigen::FullPivLU<Mat<T>>(m).rank();
  } else {
    Eigen::ColPivHouseholderQR<Mat<T>> qr(m);
    qr.setThreshold(tol);
    return qr.rank();
  }
}

// first linear dependence among vec(I), vec(A), vec(A^2), ...
template <class T> Polynomial<T> minpoly_block(const Mat<T>& a, double rank_tol = 1e-10) {
  index_t n = a.rows();
  std::vector<Vec<T>> powers;
  Mat<T> cur = Mat<T>::Identity(n, n);
  powers.push_back(flatten_to_vec(cur));
  for (index_t k = 1; k <= n; ++k) {
    cur = Mat<T>(cur * a);
    powers.push_back(flatten_to_vec(cur));
  }
  for (index_t k = 1; k <= n; ++k) {
    Mat<T> stacked(n * n, k + 1);
    for (index_t j = 0; j <= k; ++j) stacked.col(j) = powers[static_cast<size_t>(j)];
    if (column_rank(stacked, rank_tol) <= k) {
      Mat<T> lhs = stacked.leftCols(k);
      Vec<T> x;
      if constexpr (scalar_traits<T>::is_exact)
        x = Eigen::FullPivLU<Mat<T>>(lhs).solve(powers[static_cast<size_t>(k)]);
      else
        x = Eigen::ColPivHouseholderQR<Mat<T>>(lhs).solve(powers[static_cast<size_t>(k)]);
      std::vector<T> coeffs(static_cast<size_t>(k) + 1, T(0));
      for (index_t j = 0; j < k; ++j) coeffs[static_cast<size_t>(j)] = -x(j);
      coeffs[static_cast<size_t>(k)] = T(1);
      return Polynomial<T>(std::move(coeffs));
    }
  }
  // dependence is certain by degree n; if the rank test missed it, the
  // characteristic polynomial is still a correct annihilator
  return charpoly_block(a);
}

template <class T>
SuperPolynomial<T> minimal_super_poly(const SuperDiagonalMatrix<T>& a, double rank_tol = 1e-10) {
  require_square_blocks(a, "the minimal super polynomial");
  std::vector<Polynomial<T>> parts;
  for (index_t i = 0; i < a.block_count(); ++i) parts.push_back(minpoly_block(a.block(i), rank_tol));
  return SuperPolynomial<T>(std::move(parts));
}

// ---- similarity ----

template <class T>
SuperDiagonalMatrix<T> similarity_conjugate(const SuperDiagonalMatrix<T>& a,
                                            const SuperDiagonalMatrix<T>& p,
                                            double rel_tol = 1e-10) {
  require_square_blocks(a, "similarity");
  require_square_blocks(p, "similarity");
  if (p.block_count() != a.block_count() || p.row_partition() != a.row_partition())
    fail(errc::partition_mismatch, "conjugating matrix is not of the same type");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < a.block_count(); ++i) {
    Mat<T> pinv = mat_inverse(p.block(i), i, rel_tol);
    bs.push_back(Mat<T>(Mat<T>(pinv * a.block(i)) * p.block(i)));
  }
  return SuperDiagonalMatrix<T>(std::move(bs));
}

// ---- diagonalizability ----

struct DiagonalizabilityReport {
  bool diagonalizable = true;
  std::vector<char> block_ok;
  // minimal polynomial root clusters per block
  std::vector<std::vector<RootCluster>> minpoly_roots;
  // eigenvector columns per block, filled when the verdict is positive
  std::vector<Mat<cplx>> witness;
};

template <class T>
DiagonalizabilityReport is_super_diagonalizable(const SuperDiagonalMatrix<T>& a,
                                                double cluster_tol = 1e-6) {
  require_square_blocks(a, "the diagonalizability test");
  SuperPolynomial<T> mp = minimal_super_poly(a);
  DiagonalizabilityReport rep;
  for (index_t i = 0; i < a.block_count(); ++i) {
    std::vector<RootCluster> cs = cluster_roots(roots(complexify(mp.part(i))), cluster_tol);
    bool ok = true;
    for (const auto& c : cs) {
      if (c.multiplicity > 1) ok = false;
      if constexpr (!scalar_traits<T>::is_complex) {
        // a repeated-free minimal polynomial is not enough over the reals,
        // the factors must also be linear there
        if (std::abs(c.value.imag()) > 1e-7 * std::max(1.0, std::abs(c.value))) ok = false;
      }
    }
    rep.block_ok.push_back(ok ? 1 : 0);
    rep.minpoly_roots.push_back(std::move(cs));
    if (!ok) rep.diagonalizable = false;
  }
  if (rep.diagonalizable) {
    for (index_t i = 0; i < a.block_count(); ++i) {
      Mat<cplx> block = complexify(a.block(i));
      index_t n = block.rows();
      Mat<cplx> basis(n, 0);
      for (const auto& c : rep.minpoly_roots[static_cast<size_t>(i)]) {
        Mat<cplx> shifted = block - Mat<cplx>(Mat<cplx>::Identity(n, n) * c.value);
        Mat<cplx> k = kernel_basis(shifted);
        Mat<cplx> wider(n, basis.cols() + k.cols());
        wider << basis, k;
        basis = std::move(wider);
      }
      rep.witness.push_back(std::move(basis));
    }
  }
  return rep;
}

// ---- Cayley-Hamilton ----

template <class T> SuperScalar<double> cayley_hamilton_residual(const SuperDiagonalMatrix<T>& a) {
  SuperPolynomial<T> f = char_super_poly(a);
  SuperScalar<double> out;
  for (index_t i = 0; i < a.block_count(); ++i)
    out.comps.push_back(max_abs(poly_eval_matrix(f.part(i), a.block(i))));
  return out;
}

// ---- spectral resolution ----

template <class T> Mat<T> adjoint_of(const Mat<T>& a) {
  Mat<T> out(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) out(j, i) = scalar_traits<T>::conj(a(i, j));
  return out;
}

template <class T> bool is_normal_block(const Mat<T>& a, double tol = 1e-8) {
  Mat<T> adj = adjoint_of(a);
  Mat<T> diff = Mat<T>(a * adj) - Mat<T>(adj * a);
  return max_abs(diff) <= tol * std::max(1.0, max_abs(a));
}

template <class T> bool is_self_adjoint_block(const Mat<T>& a, double tol = 1e-8) {
  if (a.rows() != a.cols()) return false;
  Mat<T> diff = a - adjoint_of(a);
  return max_abs(diff) <= tol * std::max(1.0, max_abs(a));
}

template <class T> struct SpectralResolution {
  // per block: distinct eigenvalues and the matching projections
  std::vector<std::vector<T>> eigenvalues;
  std::vector<std::vector<Mat<T>>> projections;

  index_t block_count() const { return static_cast<index_t>(eigenvalues.size()); }
};

template <class T>
SpectralResolution<T> spectral_resolution(const SuperDiagonalMatrix<T>& a,
                                          double cluster_tol = 1e-6) {
  static_assert(!scalar_traits<T>::is_exact,
                "spectral resolutions are a floating-point operation");
  require_square_blocks(a, "the spectral resolution");
  SpectralResolution<T> res;
  for (index_t i = 0; i < a.block_count(); ++i) {
    const Mat<T>& block = a.block(i);
    if (!is_normal_block(block))
      fail(errc::not_normal, "block " + std::to_string(i) + " is not normal");
    std::vector<RootCluster> cs =
        cluster_roots(roots(complexify(charpoly_block(block))), cluster_tol);
    std::vector<T> values;
    for (const auto& c : cs) {
      if constexpr (scalar_traits<T>::is_complex) {
        values.push_back(c.value);
      } else {
        if (std::abs(c.value.imag()) > 1e-7 * std::max(1.0, std::abs(c.value)))
          fail(errc::not_diagonalizable,
               "block " + std::to_string(i) + " has no real eigenbasis");
        values.push_back(c.value.real());
      }
    }
    // Lagrange polynomials through the distinct eigenvalues
    std::vector<Mat<T>> projs;
    for (size_t u = 0; u < values.size(); ++u) {
      Polynomial<T> e(std::vector<T>{T(1)});
      for (size_t v = 0; v < values.size(); ++v) {
        if (v == u) continue;
        T denom = values[u] - values[v];
        Polynomial<T> factor(std::vector<T>{-values[v] / denom, T(1) / denom});
        e = poly_mul(e, factor);
      }
      projs.push_back(poly_eval_matrix(e, block));
    }
    res.eigenvalues.push_back(std::move(values));
    res.projections.push_back(std::move(projs));
  }
  return res;
}

template <class T>
SuperDiagonalMatrix<T> apply_function(const SpectralResolution<T>& res,
                                      const std::function<T(const T&)>& f) {
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < res.block_count(); ++i) {
    const auto& projs = res.projections[static_cast<size_t>(i)];
    const auto& vals = res.eigenvalues[static_cast<size_t>(i)];
    index_t n = projs.front().rows();
    Mat<T> acc = Mat<T>::Zero(n, n);
    for (size_t u = 0; u < vals.size(); ++u) acc += Mat<T>(projs[u] * f(vals[u]));
    bs.push_back(std::move(acc));
  }
  return SuperDiagonalMatrix<T>(std::move(bs));
}

template <class T>
SuperDiagonalMatrix<T> reconstruct(const SpectralResolution<T>& res) {
  return apply_function<T>(res, [](const T& x) { return x; });
}

// ---- square root and polar form ----

template <class T>
SuperDiagonalMatrix<T> nonneg_sqrt(const SuperDiagonalMatrix<T>& a, double tol = 1e-8) {
  static_assert(!scalar_traits<T>::is_exact, "square roots are a floating-point operation");
  require_square_blocks(a, "the square root");
  for (index_t i = 0; i < a.block_count(); ++i)
    if (!is_self_adjoint_block(a.block(i), tol))
      fail(errc::not_self_adjoint, "block " + std::to_string(i) + " is not self-adjoint");
  SpectralResolution<T> res = spectral_resolution(a);
  for (index_t i = 0; i < res.block_count(); ++i) {
    double scale = std::max(1.0, max_abs(a.block(i)));
    for (const T& v : res.eigenvalues[static_cast<size_t>(i)])
      if (scalar_traits<T>::re(v) < -tol * scale)
        fail(errc::negative_spectrum, "block " + std::to_string(i) +
                                          " has a negative eigenvalue, no nonnegative root");
  }
  return apply_function<T>(res, [](const T& x) {
    double r = scalar_traits<T>::re(x);
    return T(std::sqrt(r < 0 ? 0.0 : r));
  });
}

template <class T> struct PolarDecomposition {
  SuperDiagonalMatrix<T> unitary, nonneg;
};

template <class T>
PolarDecomposition<T> polar_decomposition(const SuperDiagonalMatrix<T>& a, double tol = 1e-8) {
  static_assert(!scalar_traits<T>::is_exact,
                "polar decompositions are a floating-point operation");
  require_square_blocks(a, "the polar decomposition");
  std::vector<Mat<T>> gram;
  for (index_t i = 0; i < a.block_count(); ++i)
    gram.push_back(Mat<T>(adjoint_of(a.block(i)) * a.block(i)));
  SuperDiagonalMatrix<T> n = nonneg_sqrt(SuperDiagonalMatrix<T>(std::move(gram)), tol);
  std::vector<Mat<T>> us;
  for (index_t i = 0; i < a.block_count(); ++i)
    us.push_back(Mat<T>(a.block(i) * mat_inverse(n.block(i), i)));
  return {SuperDiagonalMatrix<T>(std::move(us)), std::move(n)};
}

} // namespace superlin
