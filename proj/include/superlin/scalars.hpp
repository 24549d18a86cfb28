#pragma once

#include <Eigen/Core>
#include <complex>
#include <gmpxx.h>

// Scalar layer: the library is templated over double, std::complex<double> and
// exact rationals (GMP mpq_class). Eigen needs a NumTraits entry for mpq_class;
// with epsilon 0 the pivoted decompositions become exact.

namespace Eigen {
template <> struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};
} // namespace Eigen

namespace superlin {

using Rat = mpq_class;
using cplx = std::complex<double>;

template <class T> struct scalar_traits {
  static constexpr bool is_complex = false;
  static constexpr bool is_exact = false;
  using real_type = T;
  static T conj(const T& x) { return x; }
  static real_type re(const T& x) { return x; }
};

template <> struct scalar_traits<cplx> {
  static constexpr bool is_complex = true;
  static constexpr bool is_exact = false;
  using real_type = double;
  static cplx conj(const cplx& x) { return std::conj(x); }
  static real_type re(const cplx& x) { return x.real(); }
};

template <> struct scalar_traits<Rat> {
  static constexpr bool is_complex = false;
  static constexpr bool is_exact = true;
  using real_type = Rat;
  static Rat conj(const Rat& x) { return x; }
  static real_type re(const Rat& x) { return x; }
};

// magnitude usable in pivot/zero tests for every scalar mode
inline double abs_val(double x) { return x < 0 ? -x : x; }
inline double abs_val(const cplx& x) { return std::abs(x); }
inline double abs_val(const Rat& x) { return std::abs(x.get_d()); }

template <class T> bool is_zero_at(const T& x, double tol) {
  if constexpr (scalar_traits<T>::is_exact)
    return x == 0;
  else
    return abs_val(x) <= tol;
}

} // namespace superlin
