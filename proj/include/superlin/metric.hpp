#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "core.hpp"
#include "linmap.hpp"
#include "spectral.hpp"

namespace superlin {

// ---- inner products and norms ----

// standard super inner product: per block, conjugation on the second slot
template <class T> SuperScalar<T> inner(const SuperVector<T>& u, const SuperVector<T>& v) {
  if (u.partition != v.partition)
    fail(errc::partition_mismatch, "inner product needs vectors of the same type");
  SuperScalar<T> out;
  for (index_t i = 0; i < u.blocks(); ++i) {
    T acc = T(0);
    auto ub = u.block(i);
    auto vb = v.block(i);
    for (index_t j = 0; j < ub.size(); ++j) acc += ub(j) * scalar_traits<T>::conj(vb(j));
    out.comps.push_back(acc);
  }
  return out;
}

template <class T>
SuperScalar<typename scalar_traits<T>::real_type> norm_sq(const SuperVector<T>& v) {
  SuperScalar<T> ip = inner(v, v);
  SuperScalar<typename scalar_traits<T>::real_type> out;
  for (index_t i = 0; i < ip.size(); ++i) out.comps.push_back(scalar_traits<T>::re(ip[i]));
  return out;
}

template <class T> SuperScalar<double> norm(const SuperVector<T>& v) {
  auto sq = norm_sq(v);
  SuperScalar<double> out;
  for (index_t i = 0; i < sq.size(); ++i) {
    double s;
    if constexpr (scalar_traits<T>::is_exact)
      s = sq[i].get_d();
    else
      s = static_cast<double>(sq[i]);
    out.comps.push_back(std::sqrt(s < 0 ? 0.0 : s));
  }
  return out;
}

// ---- Gram-Schmidt, blockwise ----

template <class T>
std::vector<SuperVector<T>> gram_schmidt(const std::vector<SuperVector<T>>& vs,
                                         double dep_tol = 1e-10) {
  static_assert(!scalar_traits<T>::is_exact,
                "orthonormalization is a floating-point operation");
  if (vs.empty()) return {};
  const PartitionSpec& part = vs.front().partition;
  for (const auto& v : vs)
    if (v.partition != part)
      fail(errc::partition_mismatch, "all vectors must be of the same type");
  std::vector<SuperVector<T>> out;
  for (size_t k = 0; k < vs.size(); ++k) {
    SuperVector<T> w = vs[k];
    // subtract the projections block by block, then normalize block by block
    for (index_t i = 0; i < part.blocks(); ++i) {
      auto wb = w.block(i);
      for (const auto& u : out) {
        auto ub = u.block(i);
        T coef = T(0);
        for (index_t j = 0; j < wb.size(); ++j)
          coef += vs[k].block(i)(j) * scalar_traits<T>::conj(ub(j));
        wb -= Vec<T>(ub * coef);
      }
      double len = 0;
      for (index_t j = 0; j < wb.size(); ++j)
        len += abs_val(wb(j)) * abs_val(wb(j));
      len = std::sqrt(len);
      if (len < dep_tol)
        fail(errc::dependent_block, "block " + std::to_string(i) + " is dependent at vector " +
                                        std::to_string(k));
      wb /= T(len);
    }
    out.push_back(std::move(w));
  }
  return out;
}

// Thm-style best approximation: orthonormalize the spanning set, then project
template <class T>
SuperVector<T> best_approximation(const std::vector<SuperVector<T>>& w_basis,
                                  const SuperVector<T>& beta) {
  static_assert(!scalar_traits<T>::is_exact,
                "best approximation is a floating-point operation");
  std::vector<SuperVector<T>> onb = gram_schmidt(w_basis);
  if (!onb.empty() && onb.front().partition != beta.partition)
    fail(errc::partition_mismatch, "target vector is not of the basis type");
  SuperVector<T> alpha(Vec<T>::Zero(beta.entries.size()), beta.partition);
  for (const auto& u : onb) {
    SuperScalar<T> c = inner(beta, u);
    for (index_t i = 0; i < beta.blocks(); ++i)
      alpha.block(i) += Vec<T>(u.block(i) * c[i]);
  }
  return alpha;
}

// ---- dual bases and the transpose map ----

// basis vectors sit in the columns; the dual functionals come out as rows
template <class T> SuperDiagonalMatrix<T> dual_basis(const SuperDiagonalMatrix<T>& basis) {
  require_square_blocks(basis, "the dual basis");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < basis.block_count(); ++i) bs.push_back(mat_inverse(basis.block(i), i));
  return SuperDiagonalMatrix<T>(std::move(bs));
}

template <class T> SuperLinearMap<T> transpose_map(const SuperLinearMap<T>& t) {
  return SuperLinearMap<T>(transpose(t.matrix));
}

// ---- bilinear superforms ----

template <class T> struct BilinearSuperForm {
  SuperDiagonalMatrix<T> matrix;

  explicit BilinearSuperForm(SuperDiagonalMatrix<T> m) : matrix(std::move(m)) {
    require_square_blocks(matrix, "a bilinear superform");
  }

  index_t block_count() const { return matrix.block_count(); }
  PartitionSpec partition() const { return matrix.row_partition(); }

  bool symmetric(double tol = kDefaultTol) const {
    for (const auto& b : matrix.blocks)
      if (!grid_equal<T>(b, b.transpose(), tol)) return false;
    return true;
  }
  bool skew(double tol = kDefaultTol) const {
    for (const auto& b : matrix.blocks)
      if (!grid_equal<T>(b, Mat<T>(-b.transpose()), tol)) return false;
    return true;
  }
  bool hermitian(double tol = kDefaultTol) const {
    for (const auto& b : matrix.blocks)
      if (!grid_equal<T>(b, adjoint_of(b), tol)) return false;
    return true;
  }
};

template <class T>
SuperScalar<T> form_eval(const BilinearSuperForm<T>& f, const SuperVector<T>& x,
                         const SuperVector<T>& y) {
  if (x.partition != f.partition() || y.partition != f.partition())
    fail(errc::partition_mismatch, "arguments do not match the form's type");
  SuperScalar<T> out;
  for (index_t i = 0; i < f.block_count(); ++i) {
    Vec<T> ay = f.matrix.block(i) * y.block(i);
    T acc = T(0);
    for (index_t j = 0; j < ay.size(); ++j) acc += x.block(i)(j) * ay(j);
    out.comps.push_back(acc);
  }
  return out;
}

template <class T>
SuperScalar<T> quadratic(const BilinearSuperForm<T>& f, const SuperVector<T>& x) {
  return form_eval(f, x, x);
}

template <class T> std::vector<index_t> form_rank(const BilinearSuperForm<T>& f,
                                                  double rel_tol = 1e-10) {
  std::vector<index_t> out;
  for (index_t i = 0; i < f.block_count(); ++i) out.push_back(mat_rank(f.matrix.block(i), rel_tol));
  return out;
}

template <class T> bool is_nondegenerate(const BilinearSuperForm<T>& f, double rel_tol = 1e-10) {
  std::vector<index_t> r = form_rank(f, rel_tol);
  for (index_t i = 0; i < f.block_count(); ++i)
    if (r[static_cast<size_t>(i)] != f.matrix.block(i).rows()) return false;
  return true;
}

// ---- symmetric diagonalization and the signature ----

struct SignatureReport {
  std::vector<index_t> p, q, z; // +1, -1 and 0 counts per block
  std::vector<index_t> rank;
  std::vector<index_t> signature; // 2p - r per block
};

template <class T> struct SymmetricDiagonalization {
  SuperDiagonalMatrix<T> basis;    // congruence P per block
  SuperDiagonalMatrix<T> diagonal; // P^t A P, entries in {+1,-1,0}
  SignatureReport report;
};

// eigendecompose, rescale eigenvectors by 1/sqrt|lambda|, order as +1,-1,0
template <class T>
SymmetricDiagonalization<T> diagonalize_symmetric(const BilinearSuperForm<T>& f,
                                                  double zero_tol = 1e-9) {
  static_assert(!scalar_traits<T>::is_exact,
                "symmetric diagonalization is a floating-point operation");
  if constexpr (scalar_traits<T>::is_complex) {
    if (!f.hermitian(1e-8)) fail(errc::not_symmetric, "form matrix is not hermitian");
  } else {
    if (!f.symmetric(1e-8)) fail(errc::not_symmetric, "form matrix is not symmetric");
  }
  SymmetricDiagonalization<T> out;
  std::vector<Mat<T>> ps, ds;
  for (index_t i = 0; i < f.block_count(); ++i) {
    const Mat<T>& a = f.matrix.block(i);
    index_t n = a.rows();
    Eigen::SelfAdjointEigenSolver<Mat<T>> es(a);
    double scale = max_abs(a);
    std::vector<index_t> plus, minus, zero;
    for (index_t j = 0; j < n; ++j) {
      double lam = es.eigenvalues()(j);
      if (std::abs(lam) <= zero_tol * scale)
        zero.push_back(j);
      else if (lam > 0)
        plus.push_back(j);
      else
        minus.push_back(j);
    }
    Mat<T> p(n, n);
    Mat<T> d = Mat<T>::Zero(n, n);
    index_t col = 0;
    auto place = [&](const std::vector<index_t>& idx, double dval) {
      for (index_t j : idx) {
        double lam = es.eigenvalues()(j);
        double s = dval == 0 ? 1.0 : 1.0 / std::sqrt(std::abs(lam));
        p.col(col) = es.eigenvectors().col(j) * T(s);
        d(col, col) = T(dval);
        ++col;
      }
    };
    place(plus, 1.0);
    place(minus, -1.0);
    place(zero, 0.0);
    out.report.p.push_back(static_cast<index_t>(plus.size()));
    out.report.q.push_back(static_cast<index_t>(minus.size()));
    out.report.z.push_back(static_cast<index_t>(zero.size()));
    index_t r = static_cast<index_t>(plus.size() + minus.size());
    out.report.rank.push_back(r);
    out.report.signature.push_back(2 * static_cast<index_t>(plus.size()) - r);
    ps.push_back(std::move(p));
    ds.push_back(std::move(d));
  }
  out.basis = SuperDiagonalMatrix<T>(std::move(ps));
  out.diagonal = SuperDiagonalMatrix<T>(std::move(ds));
  return out;
}

// ---- skew canonical form ----

template <class T> struct SkewCanonicalForm {
  SuperDiagonalMatrix<T> basis;       // columns: alpha_1, beta_1, ..., then the radical
  std::vector<index_t> pair_counts;   // k per block; rank = 2k
};

// the constructive pairing: pick u,w with f(u,w)=1, split them off, project
// the rest into their f-orthogonal complement, repeat
template <class T>
SkewCanonicalForm<T> skew_canonical(const BilinearSuperForm<T>& f, double tol = 1e-10) {
  if (!f.skew(1e-8)) fail(errc::not_skew, "form matrix is not skew-symmetric");
  SkewCanonicalForm<T> out;
  std::vector<Mat<T>> bases;
  for (index_t bi = 0; bi < f.block_count(); ++bi) {
    const Mat<T>& a = f.matrix.block(bi);
    index_t n = a.rows();
    double scale = std::max(1.0, max_abs(a));
    auto fval = [&](const Vec<T>& x, const Vec<T>& y) {
      Vec<T> ay = a * y;
      T acc = T(0);
      for (index_t j = 0; j < n; ++j) acc += x(j) * ay(j);
      return acc;
    };
    std::vector<Vec<T>> remaining;
    for (index_t j = 0; j < n; ++j) remaining.push_back(Vec<T>(Mat<T>::Identity(n, n).col(j)));
    std::vector<Vec<T>> paired;
    index_t k = 0;
    while (remaining.size() >= 2) {
      // strongest pairing first keeps the projections tame
      size_t bu = 0, bw = 0;
      double best = 0;
      for (size_t u = 0; u < remaining.size(); ++u)
        for (size_t w = u + 1; w < remaining.size(); ++w) {
          double m = abs_val(fval(remaining[u], remaining[w]));
          if (m > best) {
            best = m;
            bu = u;
            bw = w;
          }
        }
      if (best <= tol * scale) break; // the rest is the radical
      Vec<T> alpha = remaining[bu];
      T val = fval(alpha, remaining[bw]);
      Vec<T> beta = Vec<T>(remaining[bw] / val);
      std::vector<Vec<T>> next;
      for (size_t r = 0; r < remaining.size(); ++r) {
        if (r == bu || r == bw) continue;
        const Vec<T>& eps = remaining[r];
        Vec<T> gamma = Vec<T>(alpha * fval(eps, beta)) - Vec<T>(beta * fval(eps, alpha));
        next.push_back(Vec<T>(eps - gamma));
      }
      paired.push_back(std::move(alpha));
      paired.push_back(std::move(beta));
      remaining = std::move(next);
      ++k;
    }
    Mat<T> basis(n, n);
    index_t col = 0;
    for (const auto& v : paired) basis.col(col++) = v;
    for (const auto& v : remaining) basis.col(col++) = v;
    bases.push_back(std::move(basis));
    out.pair_counts.push_back(k);
  }
  out.basis = SuperDiagonalMatrix<T>(std::move(bases));
  return out;
}

// ---- form preservation ----

template <class T>
bool preserves_form(const BilinearSuperForm<T>& f, const SuperDiagonalMatrix<T>& m,
                    double tol = 1e-8) {
  require_square_blocks(m, "form preservation");
  if (m.block_count() != f.block_count() || m.row_partition() != f.partition())
    fail(errc::partition_mismatch, "operator is not of the form's type");
  for (index_t i = 0; i < f.block_count(); ++i) {
    const Mat<T>& a = f.matrix.block(i);
    const Mat<T>& mi = m.block(i);
    Mat<T> lhs = Mat<T>(Mat<T>(mi.transpose() * a) * mi);
    if (max_abs(Mat<T>(lhs - a)) > tol * std::max(1.0, max_abs(a))) return false;
  }
  return true;
}

} // namespace superlin
