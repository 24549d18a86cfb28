#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "linmap.hpp"

// The applied layer runs on plain doubles: stochastic matrices and economic
// coefficients come from measured data, so exact arithmetic buys nothing.

namespace superlin {

enum class ChainKind { row, diagonal };

struct MarkovSuperChain {
  ChainKind kind = ChainKind::row;
  std::vector<Mat<double>> transitions;
  std::vector<std::vector<std::string>> labels; // optional state names per block
};

inline index_t chain_blocks(const MarkovSuperChain& c) {
  return static_cast<index_t>(c.transitions.size());
}

inline void validate_chain(const MarkovSuperChain& c, double tol = 1e-9) {
  if (c.transitions.empty()) fail(errc::parse_error, "chain needs at least one block");
  for (size_t t = 0; t < c.transitions.size(); ++t) {
    const Mat<double>& p = c.transitions[t];
    if (p.rows() != p.cols())
      fail(errc::parse_error, "transition block " + std::to_string(t) + " is not square");
    if (c.kind == ChainKind::row && p.rows() != c.transitions[0].rows())
      fail(errc::parse_error, "row chains need equal-size blocks, block " + std::to_string(t) +
                                  " differs");
    for (index_t i = 0; i < p.rows(); ++i) {
      double sum = 0;
      for (index_t j = 0; j < p.cols(); ++j) {
        if (p(i, j) < -tol)
          fail(errc::parse_error, "negative probability in block " + std::to_string(t));
        sum += p(i, j);
      }
      if (std::abs(sum - 1.0) > tol)
        fail(errc::parse_error, "row " + std::to_string(i) + " of block " + std::to_string(t) +
                                    " sums to " + std::to_string(sum));
    }
  }
}

struct DistributionSuperVector {
  std::vector<Vec<double>> blocks; // probability row vectors
};

inline void validate_distribution(const DistributionSuperVector& x, const MarkovSuperChain& c,
                                  double tol = 1e-9) {
  if (static_cast<index_t>(x.blocks.size()) != chain_blocks(c))
    fail(errc::partition_mismatch, "distribution has " + std::to_string(x.blocks.size()) +
                                       " blocks, chain has " +
                                       std::to_string(c.transitions.size()));
  for (size_t t = 0; t < x.blocks.size(); ++t) {
    if (x.blocks[t].size() != c.transitions[t].rows())
      fail(errc::partition_mismatch, "distribution block " + std::to_string(t) +
                                         " does not match its transition block");
    double sum = 0;
    for (index_t j = 0; j < x.blocks[t].size(); ++j) {
      if (x.blocks[t](j) < -tol)
        fail(errc::parse_error, "negative probability in distribution block " + std::to_string(t));
      sum += x.blocks[t](j);
    }
    if (std::abs(sum - 1.0) > tol)
      fail(errc::parse_error, "distribution block " + std::to_string(t) + " sums to " +
                                  std::to_string(sum));
  }
}

inline Vec<double> renormalize_distribution(Vec<double> v) {
  double sum = v.sum();
  if (sum > 0) v /= sum;
  return v;
}

// X(n) = X(0) P^n, blockwise; drift is squeezed out every 64 steps
inline DistributionSuperVector step(const MarkovSuperChain& chain,
                                    const DistributionSuperVector& x0, long n) {
  if (n < 0) fail(errc::negative_steps, "cannot step a chain backwards");
  validate_distribution(x0, chain);
  DistributionSuperVector out = x0;
  for (size_t t = 0; t < out.blocks.size(); ++t) {
    Eigen::RowVectorXd row = out.blocks[t].transpose();
    for (long k = 1; k <= n; ++k) {
      row = row * chain.transitions[t];
      if (k % 64 == 0) row = renormalize_distribution(row.transpose()).transpose();
    }
    out.blocks[t] = renormalize_distribution(row.transpose());
  }
  return out;
}

struct ErgodicLimit {
  std::vector<Mat<double>> limits;      // L_t = lim P_t^n
  std::vector<Vec<double>> stationary;  // pi_t, the shared row of L_t
  std::vector<long> iterations;
};

// power iteration with a period-2 alarm: if P^n and P^(n+2) agree while
// P^(n+1) sits far from both, the chain is cycling, not converging. The
// "far" margin matters: a convergent chain with a strongly negative
// eigenvalue has its two-step gap undercut tol a few iterations before the
// one-step gap does, and that must not be read as a cycle.
inline ErgodicLimit ergodic_limit(const MarkovSuperChain& chain, double tol = 1e-10,
                                  long max_iter = 1000000) {
  validate_chain(chain);
  ErgodicLimit out;
  for (size_t t = 0; t < chain.transitions.size(); ++t) {
    const Mat<double>& p = chain.transitions[t];
    Mat<double> prev = Mat<double>::Identity(p.rows(), p.cols());
    Mat<double> cur = p;
    long iters = 0;
    bool converged = false;
    while (iters < max_iter) {
      Mat<double> next = cur * p;
      ++iters;
      if (iters % 64 == 0)
        for (index_t i = 0; i < next.rows(); ++i)
          next.row(i) = renormalize_distribution(next.row(i).transpose()).transpose();
      if (max_abs(Mat<double>(next - cur)) <= tol) {
        cur = next;
        converged = true;
        break;
      }
      if (max_abs(Mat<double>(next - prev)) <= tol &&
          max_abs(Mat<double>(next - cur)) > std::sqrt(tol))
        fail(errc::not_ergodic, "block " + std::to_string(t) + " oscillates with period 2");
      prev = cur;
      cur = next;
    }
    if (!converged)
      fail(errc::not_ergodic, "block " + std::to_string(t) + " did not converge in " +
                                  std::to_string(max_iter) + " iterations");
    Vec<double> pi = Vec<double>::Zero(p.cols());
    for (index_t i = 0; i < cur.rows(); ++i) pi += cur.row(i).transpose();
    pi /= static_cast<double>(cur.rows());
    out.limits.push_back(std::move(cur));
    out.stationary.push_back(renormalize_distribution(pi));
    out.iterations.push_back(iters);
  }
  return out;
}

inline DistributionSuperVector x_infinity(const ErgodicLimit& lim,
                                          const DistributionSuperVector& x0) {
  if (x0.blocks.size() != lim.limits.size())
    fail(errc::partition_mismatch, "distribution does not match the limit's block count");
  DistributionSuperVector out;
  for (size_t t = 0; t < lim.limits.size(); ++t) {
    Eigen::RowVectorXd row = x0.blocks[t].transpose() * lim.limits[t];
    out.blocks.push_back(renormalize_distribution(row.transpose()));
  }
  return out;
}

// ---- Leontief models ----

enum class LeontiefKind { closed, open };
enum class LeontiefVariant { row, diagonal };

struct LeontiefModel {
  LeontiefKind kind = LeontiefKind::closed;
  LeontiefVariant variant = LeontiefVariant::row;
  std::vector<Mat<double>> blocks;  // exchange matrices A or consumption matrices C
  std::vector<Vec<double>> demand;  // open kind only
};

inline void validate_leontief(const LeontiefModel& m, bool relaxed = false, double tol = 1e-9) {
  if (m.blocks.empty()) fail(errc::parse_error, "model needs at least one block");
  for (size_t t = 0; t < m.blocks.size(); ++t) {
    const Mat<double>& a = m.blocks[t];
    if (a.rows() != a.cols())
      fail(errc::parse_error, "coefficient block " + std::to_string(t) + " is not square");
    if (m.variant == LeontiefVariant::row && a.rows() != m.blocks[0].rows())
      fail(errc::parse_error, "row models need equal-size blocks, block " + std::to_string(t) +
                                  " differs");
    if (relaxed && m.kind == LeontiefKind::closed) continue;
    for (index_t i = 0; i < a.rows(); ++i)
      for (index_t j = 0; j < a.cols(); ++j)
        if (a(i, j) < -tol)
          fail(errc::parse_error, "negative coefficient in block " + std::to_string(t));
    if (m.kind == LeontiefKind::closed) {
      for (index_t j = 0; j < a.cols(); ++j) {
        double sum = a.col(j).sum();
        if (std::abs(sum - 1.0) > tol)
          fail(errc::parse_error, "column " + std::to_string(j) + " of block " +
                                      std::to_string(t) + " sums to " + std::to_string(sum));
      }
    }
  }
  if (m.kind == LeontiefKind::open) {
    if (m.demand.size() != m.blocks.size())
      fail(errc::parse_error, "open model needs one demand vector per block");
    for (size_t t = 0; t < m.demand.size(); ++t) {
      if (m.demand[t].size() != m.blocks[t].rows())
        fail(errc::parse_error, "demand block " + std::to_string(t) + " has the wrong length");
      for (index_t j = 0; j < m.demand[t].size(); ++j)
        if (m.demand[t](j) < -tol)
          fail(errc::parse_error, "negative demand in block " + std::to_string(t));
    }
  }
}

struct ClosedBlockResult {
  Vec<double> price;                    // normalized to sum 1 in strict mode
  bool unique = false;                  // some power A^m is strictly positive
  double residual = 0;                  // max |(I-A)p|
  std::vector<Vec<double>> candidates;  // relaxed mode: the whole nullspace basis
};

inline std::vector<Vec<double>> null_space_svd(const Mat<double>& m, double rel_tol = 1e-8) {
  Eigen::JacobiSVD<Mat<double>> svd(m, Eigen::ComputeFullV);
  double scale = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<Vec<double>> out;
  for (index_t j = 0; j < svd.matrixV().cols(); ++j)
    if (j >= svd.singularValues().size() ||
        svd.singularValues()(j) <= rel_tol * std::max(1.0, scale))
      out.push_back(svd.matrixV().col(j));
  return out;
}

inline Vec<double> sign_fix_dominant(Vec<double> v) {
  index_t best = 0;
  for (index_t j = 1; j < v.size(); ++j)
    if (std::abs(v(j)) > std::abs(v(best))) best = j;
  if (v(best) < 0) v = -v;
  return v;
}

inline bool power_positive(const Mat<double>& a) {
  Mat<double> acc = a;
  for (index_t m = 1; m <= a.rows(); ++m) {
    if (acc.minCoeff() > 0) return true;
    acc = acc * a;
  }
  return false;
}

// (I - A)p = 0 with p >= 0, sum 1. The kernel always contains a nonnegative
// direction for a true exchange matrix; finding it is a heuristic hunt:
// project the uniform vector into the kernel first, fall back to clamping
// each basis vector.
inline std::vector<ClosedBlockResult> leontief_closed_solve(const LeontiefModel& m,
                                                            bool relaxed = false) {
  if (m.kind != LeontiefKind::closed) fail(errc::parse_error, "model is not of the closed kind");
  validate_leontief(m, relaxed);
  std::vector<ClosedBlockResult> out;
  for (size_t t = 0; t < m.blocks.size(); ++t) {
    const Mat<double>& a = m.blocks[t];
    index_t n = a.rows();
    Mat<double> ima = Mat<double>::Identity(n, n) - a;
    std::vector<Vec<double>> kernel = null_space_svd(ima);
    if (kernel.empty())
      fail(errc::no_nonnegative_solution,
           "block " + std::to_string(t) + " admits no price solution at tolerance");
    ClosedBlockResult res;
    res.unique = power_positive(a);
    if (relaxed) {
      // hand back every direction, scaled to a unit top entry, best first
      for (const auto& v : kernel) {
        Vec<double> c = sign_fix_dominant(v);
        double top = c.cwiseAbs().maxCoeff();
        if (top > 0) c /= top;
        res.candidates.push_back(c);
      }
      std::sort(res.candidates.begin(), res.candidates.end(),
                [](const Vec<double>& x, const Vec<double>& y) {
                  return x.minCoeff() > y.minCoeff();
                });
      res.price = res.candidates.front();
      res.residual = max_abs(Mat<double>(ima * res.price));
      out.push_back(std::move(res));
      continue;
    }
    Vec<double> p;
    Vec<double> uniform = Vec<double>::Constant(n, 1.0 / static_cast<double>(n));
    Vec<double> proj = Vec<double>::Zero(n);
    for (const auto& v : kernel) proj += v * uniform.dot(v);
    bool found = false;
    if (proj.cwiseAbs().maxCoeff() > 1e-12 && proj.sum() != 0) {
      Vec<double> cand = sign_fix_dominant(proj);
      if (cand.minCoeff() >= -1e-10 * std::max(1.0, cand.cwiseAbs().maxCoeff())) {
        p = cand;
        found = true;
      }
    }
    if (!found) {
      for (const auto& v : kernel) {
        Vec<double> cand = sign_fix_dominant(v).cwiseMax(0.0);
        if (cand.sum() <= 0) continue;
        cand /= cand.sum();
        if (max_abs(Mat<double>(ima * cand)) <= 1e-7 * std::max(1.0, max_abs(a))) {
          p = cand;
          found = true;
          break;
        }
      }
    }
    if (!found)
      fail(errc::no_nonnegative_solution,
           "block " + std::to_string(t) + " has no nonnegative price in its nullspace basis");
    p = p.cwiseMax(0.0);
    p /= p.sum();
    res.price = p;
    res.residual = max_abs(Mat<double>(ima * p));
    out.push_back(std::move(res));
  }
  return out;
}

struct OpenBlockResult {
  Vec<double> production;  // x = (I-C)^{-1} d
  bool productive = false;
  bool row_sums_ok = false;  // every row sum of C below one
  bool col_sums_ok = false;
  bool inverse_nonneg = false;
  bool x_nonneg = false;
  double residual = 0;  // max |(I-C)x - d|
};

inline std::vector<OpenBlockResult> leontief_open_solve(const LeontiefModel& m) {
  if (m.kind != LeontiefKind::open) fail(errc::parse_error, "model is not of the open kind");
  validate_leontief(m);
  std::vector<OpenBlockResult> out;
  for (size_t t = 0; t < m.blocks.size(); ++t) {
    const Mat<double>& c = m.blocks[t];
    index_t n = c.rows();
    OpenBlockResult res;
    res.row_sums_ok = true;
    res.col_sums_ok = true;
    for (index_t i = 0; i < n; ++i) {
      if (c.row(i).sum() >= 1.0) res.row_sums_ok = false;
      if (c.col(i).sum() >= 1.0) res.col_sums_ok = false;
    }
    Mat<double> imc = Mat<double>::Identity(n, n) - c;
    Eigen::FullPivLU<Mat<double>> lu(imc);
    lu.setThreshold(1e-12);
    if (lu.rank() < n)
      fail(errc::not_productive, "block " + std::to_string(t) + ": I - C is singular");
    Mat<double> inv = lu.inverse();
    if (inv.minCoeff() < -1e-9)
      fail(errc::not_productive,
           "block " + std::to_string(t) + ": (I - C) inverse has negative entries");
    res.inverse_nonneg = true;
    res.productive = true;
    res.production = inv * m.demand[t];
    res.x_nonneg = res.production.minCoeff() >= -1e-10;
    res.residual = max_abs(Mat<double>(imc * res.production - m.demand[t]));
    out.push_back(std::move(res));
  }
  return out;
}

} // namespace superlin
