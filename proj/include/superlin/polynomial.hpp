#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <vector>

#include "core.hpp"

namespace superlin {

// Coefficients ascending; the zero polynomial is the empty list (degree -1).
template <class T> struct Polynomial {
  std::vector<T> coeffs;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> c) : coeffs(std::move(c)) { trim_exact(); }

  void trim_exact() {
    while (!coeffs.empty() && coeffs.back() == T(0)) coeffs.pop_back();
  }

  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  T coeff(int k) const {
    return (k < 0 || k >= static_cast<int>(coeffs.size())) ? T(0)
                                                           : coeffs[static_cast<size_t>(k)];
  }
  T lead() const { return is_zero() ? T(0) : coeffs.back(); }

  bool is_monic(double tol = kDefaultTol) const {
    return !is_zero() && is_zero_at<T>(lead() - T(1), tol);
  }

  template <class U> U eval(const U& x) const {
    U acc = U(0);
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + U(coeffs[i]);
    return acc;
  }
};

template <class T> Polynomial<T> poly_add(const Polynomial<T>& a, const Polynomial<T>& b) {
  std::vector<T> c(std::max(a.coeffs.size(), b.coeffs.size()), T(0));
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return Polynomial<T>(std::move(c));
}

template <class T> Polynomial<T> poly_scale(const T& s, const Polynomial<T>& a) {
  std::vector<T> c = a.coeffs;
  for (auto& x : c) x = x * s;
  return Polynomial<T>(std::move(c));
}

template <class T> Polynomial<T> poly_mul(const Polynomial<T>& a, const Polynomial<T>& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial<T>();
  std::vector<T> c(a.coeffs.size() + b.coeffs.size() - 1, T(0));
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    for (size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return Polynomial<T>(std::move(c));
}

// long division; remainder has degree below the divisor's
template <class T>
std::pair<Polynomial<T>, Polynomial<T>> poly_divmod(const Polynomial<T>& a,
                                                    const Polynomial<T>& b) {
  if (b.is_zero()) fail(errc::zero_polynomial, "division by the zero polynomial");
  std::vector<T> rem = a.coeffs;
  int db = b.degree();
  if (a.degree() < db) return {Polynomial<T>(), a};
  std::vector<T> quot(static_cast<size_t>(a.degree() - db + 1), T(0));
  for (int k = a.degree(); k >= db; --k) {
    T f = rem[static_cast<size_t>(k)] / b.lead();
    quot[static_cast<size_t>(k - db)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k - db + j)] -= f * b.coeff(j);
  }
  rem.resize(static_cast<size_t>(db) > 0 ? static_cast<size_t>(db) : 0);
  return {Polynomial<T>(std::move(quot)), Polynomial<T>(std::move(rem))};
}

template <class T> Mat<T> poly_eval_matrix(const Polynomial<T>& p, const Mat<T>& a) {
  if (a.rows() != a.cols()) fail(errc::non_square_block, "matrix argument must be square");
  Mat<T> acc = Mat<T>::Zero(a.rows(), a.cols());
  Mat<T> id = Mat<T>::Identity(a.rows(), a.cols());
  for (size_t i = p.coeffs.size(); i-- > 0;) acc = Mat<T>(acc * a) + Mat<T>(id * p.coeffs[i]);
  return acc;
}

// n-tuple of polynomials, one per block
template <class T> struct SuperPolynomial {
  std::vector<Polynomial<T>> parts;

  SuperPolynomial() = default;
  explicit SuperPolynomial(std::vector<Polynomial<T>> p) : parts(std::move(p)) {
    if (parts.empty()) fail(errc::component_count_mismatch, "need at least one part");
  }

  index_t size() const { return static_cast<index_t>(parts.size()); }
  const Polynomial<T>& part(index_t i) const { return parts[static_cast<size_t>(i)]; }

  bool is_super_monic(double tol = kDefaultTol) const {
    for (const auto& p : parts)
      if (!p.is_monic(tol)) return false;
    return true;
  }
  std::vector<int> super_degree() const {
    std::vector<int> d;
    for (const auto& p : parts) d.push_back(p.degree());
    return d;
  }
};

template <class T>
void check_parts(const SuperPolynomial<T>& f, index_t n, const char* what) {
  if (f.size() != n)
    fail(errc::component_count_mismatch,
         std::string(what) + ": " + std::to_string(f.size()) + " parts against " +
             std::to_string(n) + " blocks");
}

template <class T>
SuperPolynomial<T> sp_add(const SuperPolynomial<T>& f, const SuperPolynomial<T>& g) {
  check_parts(g, f.size(), "sp_add");
  std::vector<Polynomial<T>> parts;
  for (index_t i = 0; i < f.size(); ++i) parts.push_back(poly_add(f.part(i), g.part(i)));
  return SuperPolynomial<T>(std::move(parts));
}

template <class T>
SuperPolynomial<T> sp_mul(const SuperPolynomial<T>& f, const SuperPolynomial<T>& g) {
  check_parts(g, f.size(), "sp_mul");
  std::vector<Polynomial<T>> parts;
  for (index_t i = 0; i < f.size(); ++i) parts.push_back(poly_mul(f.part(i), g.part(i)));
  return SuperPolynomial<T>(std::move(parts));
}

template <class T>
SuperScalar<T> sp_eval_scalar(const SuperPolynomial<T>& f, const SuperScalar<T>& c) {
  check_parts(f, c.size(), "sp_eval_scalar");
  SuperScalar<T> out;
  for (index_t i = 0; i < f.size(); ++i) out.comps.push_back(f.part(i).template eval<T>(c[i]));
  return out;
}

template <class T>
SuperDiagonalMatrix<T> sp_eval_operator(const SuperPolynomial<T>& f,
                                        const SuperDiagonalMatrix<T>& a) {
  check_parts(f, a.block_count(), "sp_eval_operator");
  std::vector<Mat<T>> bs;
  for (index_t i = 0; i < a.block_count(); ++i) bs.push_back(poly_eval_matrix(f.part(i), a.block(i)));
  return SuperDiagonalMatrix<T>(std::move(bs));
}

// ---- roots ----

inline std::vector<cplx> sorted_roots(std::vector<cplx> rs) {
  std::sort(rs.begin(), rs.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return rs;
}

// all complex roots with multiplicity, via the companion matrix
template <class T> std::vector<cplx> roots(const Polynomial<T>& p) {
  static_assert(!scalar_traits<T>::is_exact, "roots are a floating-point operation");
  if (p.is_zero()) fail(errc::zero_polynomial, "the zero polynomial has no root set");
  int n = p.degree();
  if (n == 0) return {};
  Mat<cplx> comp = Mat<cplx>::Zero(n, n);
  cplx lead = cplx(p.lead());
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -cplx(p.coeff(i)) / lead;
  Eigen::ComplexEigenSolver<Mat<cplx>> es(comp);
  std::vector<cplx> rs(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return sorted_roots(std::move(rs));
}

template <class T> std::vector<std::vector<cplx>> sp_roots(const SuperPolynomial<T>& f) {
  std::vector<std::vector<cplx>> out;
  for (const auto& p : f.parts) out.push_back(roots(p));
  return out;
}

struct RootCluster {
  cplx value;
  int multiplicity;
};

// merge roots closer than rel_tol (relative to their magnitude, floored at 1)
inline std::vector<RootCluster> cluster_roots(const std::vector<cplx>& rs,
                                              double rel_tol = 1e-6) {
  std::vector<RootCluster> out;
  for (const cplx& r : sorted_roots(rs)) {
    bool merged = false;
    for (auto& c : out) {
      double scale = std::max({1.0, std::abs(c.value), std::abs(r)});
      if (std::abs(r - c.value) <= rel_tol * scale) {
        c.value = (c.value * static_cast<double>(c.multiplicity) + r) /
                  static_cast<double>(c.multiplicity + 1);
        c.multiplicity += 1;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({r, 1});
  }
  return out;
}

// roots whose imaginary part vanishes at tolerance
inline std::vector<double> real_roots(const std::vector<cplx>& rs, double tol = 1e-7) {
  std::vector<double> out;
  for (const cplx& r : rs)
    if (std::abs(r.imag()) <= tol * std::max(1.0, std::abs(r))) out.push_back(r.real());
  return out;
}

} // namespace superlin
