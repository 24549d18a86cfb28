#include "superlin/capi.h"

#include <string>
#include <vector>

#include "superlin/format.hpp"
#include "superlin/json_io.hpp"
#include "superlin/metric.hpp"
#include "superlin/models.hpp"
#include "superlin/spectral.hpp"

namespace {

using namespace superlin;

struct Report {
  std::string text;
  std::string json_text;
  bool has_json = false;
};

thread_local int g_status = 0;
thread_local std::string g_error;

int status_for(errc c) {
  switch (c) {
    case errc::parse_error:
    case errc::partition_mismatch:
    case errc::incompatible_partition:
    case errc::component_count_mismatch:
    case errc::non_square_block:
    case errc::negative_steps:
      return SLM_ERR_INPUT;
    default:
      return SLM_ERR_MATH;
  }
}

struct Opts {
  double tol = -1;
  bool rational = false;
  bool relaxed = false;
  bool json = false;
  long max_iter = 1000000;
  long steps = 1;
};

double tol_or(const Opts& o, double dflt) { return o.tol > 0 ? o.tol : dflt; }

void set_json(Report& rep, const Opts& o, njson j) {
  if (!o.json) return;
  rep.json_text = j.dump(2) + "\n";
  rep.has_json = true;
}

void need_inputs(const std::vector<njson>& js, size_t n, const std::string& what) {
  if (js.size() != n)
    fail(errc::parse_error,
         what + " takes " + std::to_string(n) + " input(s), got " + std::to_string(js.size()));
}

void reject_rational(const Opts& o, const std::string& what) {
  if (o.rational) fail(errc::parse_error, "rational mode is not available for " + what);
}

bool is_diagonal_format(const njson& j) { return j.is_object() && j.contains("blocks"); }
bool is_vector_format(const njson& j) { return j.is_object() && j.contains("entries"); }

template <class T> SuperMatrix<T> load_matrix_any(const njson& j) {
  if (is_diagonal_format(j)) return to_super_matrix(super_diagonal_from_json<T>(j));
  if (is_vector_format(j)) {
    // a super row vector is a one-row supermatrix, so the matrix verbs take it
    SuperVector<T> v = super_vector_from_json<T>(j);
    Mat<T> row(1, v.entries.size());
    for (index_t k = 0; k < v.entries.size(); ++k) row(0, k) = v.entries(k);
    return SuperMatrix<T>(std::move(row), PartitionSpec({1}), v.partition);
  }
  return super_matrix_from_json<T>(j);
}

// ---- matrix verb ----

template <class T>
Report matrix_report(const std::string& action, const std::vector<njson>& js, const Opts& o) {
  Report rep;
  if (action == "add") {
    need_inputs(js, 2, "matrix add");
    SuperMatrix<T> s = add(load_matrix_any<T>(js[0]), load_matrix_any<T>(js[1]));
    rep.text = fmt_super_matrix(s);
    njson j = to_json(s);
    j["verb"] = "matrix add";
    set_json(rep, o, std::move(j));
  } else if (action == "transpose") {
    need_inputs(js, 1, "matrix transpose");
    if (is_diagonal_format(js[0])) {
      SuperDiagonalMatrix<T> t = transpose(super_diagonal_from_json<T>(js[0]));
      rep.text = fmt_super_matrix(to_super_matrix(t));
      njson j = to_json(t);
      j["verb"] = "matrix transpose";
      set_json(rep, o, std::move(j));
    } else {
      SuperMatrix<T> t = transpose(load_matrix_any<T>(js[0]));
      rep.text = fmt_super_matrix(t);
      njson j = to_json(t);
      j["verb"] = "matrix transpose";
      set_json(rep, o, std::move(j));
    }
  } else if (action == "flatten") {
    need_inputs(js, 1, "matrix flatten");
    SuperMatrix<T> a = load_matrix_any<T>(js[0]);
    Mat<T> f = flatten(a);
    rep.text = fmt_plain_matrix(f);
    njson j = to_json(SuperMatrix<T>(f, PartitionSpec({f.rows()}), PartitionSpec({f.cols()})));
    j["verb"] = "matrix flatten";
    set_json(rep, o, std::move(j));
  } else if (action == "det") {
    need_inputs(js, 1, "matrix det");
    if (!is_diagonal_format(js[0]))
      fail(errc::parse_error, "det needs the super diagonal format ({\"blocks\": ...})");
    SuperScalar<T> d = super_det(super_diagonal_from_json<T>(js[0]));
    rep.text = fmt_tuple(d) + "\n";
    njson comps = njson::array();
    for (const T& x : d.comps) comps.push_back(scalar_to_json(x));
    set_json(rep, o, njson{{"verb", "matrix det"}, {"components", std::move(comps)}});
  } else {
    fail(errc::parse_error, "unknown matrix action \"" + action + "\"");
  }
  return rep;
}

// ---- spec verb ----

template <class T> njson poly_parts_json(const SuperPolynomial<T>& f) {
  njson parts = njson::array();
  for (index_t i = 0; i < f.size(); ++i) {
    njson coeffs = njson::array();
    for (const T& c : f.part(i).coeffs) coeffs.push_back(scalar_to_json(c));
    parts.push_back(njson{{"coefficients", std::move(coeffs)}});
  }
  return parts;
}

std::string fmt_cluster_list(const std::vector<RootCluster>& cs) {
  if (cs.empty()) return "none";
  std::string out;
  for (size_t u = 0; u < cs.size(); ++u) {
    if (u) out += ", ";
    out += fmt_number(cs[u].value);
    if (cs[u].multiplicity > 1) out += " (x" + std::to_string(cs[u].multiplicity) + ")";
  }
  return out;
}

template <class T>
Report spec_report(const std::string& action, const std::vector<njson>& js, const Opts& o) {
  need_inputs(js, 1, "spec " + action);
  SuperDiagonalMatrix<T> a = super_diagonal_from_json<T>(js[0]);
  Report rep;
  if (action == "charpoly") {
    SuperPolynomial<T> f = char_super_poly(a);
    rep.text = fmt_super_poly(f) + "\n";
    set_json(rep, o, njson{{"verb", "spec charpoly"}, {"parts", poly_parts_json(f)}});
  } else if (action == "minpoly") {
    SuperPolynomial<T> f = minimal_super_poly(a, tol_or(o, 1e-10));
    rep.text = fmt_super_poly(f) + "\n";
    set_json(rep, o, njson{{"verb", "spec minpoly"}, {"parts", poly_parts_json(f)}});
  } else if (action == "eigen") {
    auto values = char_super_values(a, tol_or(o, 1e-6));
    std::vector<std::vector<std::string>> rows{{"block", "eigenvalues"}};
    njson blocks = njson::array();
    for (size_t i = 0; i < values.size(); ++i) {
      rows.push_back({std::to_string(i), fmt_cluster_list(values[i])});
      njson vs = njson::array();
      for (const auto& c : values[i])
        vs.push_back(njson{{"re", c.value.real()},
                           {"im", c.value.imag()},
                           {"multiplicity", c.multiplicity}});
      blocks.push_back(njson{{"block", i}, {"eigenvalues", std::move(vs)}});
    }
    rep.text = fmt_table(rows);
    set_json(rep, o, njson{{"verb", "spec eigen"}, {"blocks", std::move(blocks)}});
  } else if (action == "diag") {
    DiagonalizabilityReport d = is_super_diagonalizable(a, tol_or(o, 1e-6));
    std::vector<std::vector<std::string>> rows{{"block", "diagonalizable"}};
    njson blocks = njson::array();
    for (size_t i = 0; i < d.block_ok.size(); ++i) {
      rows.push_back({std::to_string(i), d.block_ok[i] ? "yes" : "no"});
      blocks.push_back(njson{{"block", i}, {"diagonalizable", static_cast<bool>(d.block_ok[i])}});
    }
    rep.text = fmt_table(rows) + "overall: " + (d.diagonalizable ? "yes" : "no") + "\n";
    set_json(rep, o, njson{{"verb", "spec diag"},
                           {"blocks", std::move(blocks)},
                           {"diagonalizable", d.diagonalizable}});
  } else if (action == "cayley") {
    SuperScalar<double> r = cayley_hamilton_residual(a);
    rep.text = fmt_tuple(r) + "\n";
    njson res = njson::array();
    for (double x : r.comps) res.push_back(x);
    set_json(rep, o, njson{{"verb", "spec cayley"}, {"residuals", std::move(res)}});
  } else {
    fail(errc::parse_error, "unknown spec action \"" + action + "\"");
  }
  return rep;
}

// ---- metric verb ----

template <class T> Report form_report_impl(const njson& input, const Opts& o) {
  BilinearSuperForm<T> f(super_diagonal_from_json<T>(input));
  std::vector<index_t> ranks = form_rank(f, tol_or(o, 1e-10));
  std::vector<std::vector<std::string>> rows{{"block", "size", "rank", "class", "nondegenerate"}};
  njson blocks = njson::array();
  for (index_t i = 0; i < f.block_count(); ++i) {
    const Mat<T>& b = f.matrix.block(i);
    std::string cls = "general";
    if (grid_equal<T>(b, b.transpose(), kDefaultTol))
      cls = "symmetric";
    else if (grid_equal<T>(b, Mat<T>(-b.transpose()), kDefaultTol))
      cls = "skew";
    bool nondeg = ranks[static_cast<size_t>(i)] == b.rows();
    rows.push_back({std::to_string(i), std::to_string(b.rows()),
                    std::to_string(ranks[static_cast<size_t>(i)]), cls, nondeg ? "yes" : "no"});
    blocks.push_back(njson{{"block", i},
                           {"size", b.rows()},
                           {"rank", ranks[static_cast<size_t>(i)]},
                           {"class", cls},
                           {"nondegenerate", nondeg}});
  }
  Report rep;
  rep.text = fmt_table(rows);
  set_json(rep, o, njson{{"verb", "metric form-report"}, {"blocks", std::move(blocks)}});
  return rep;
}

Report metric_report(const std::string& action, const std::vector<njson>& js, const Opts& o) {
  need_inputs(js, 1, "metric " + action);
  Report rep;
  if (action == "gram-schmidt") {
    reject_rational(o, "metric gram-schmidt");
    VectorListInput<double> in = vector_list_from_json<double>(js[0]);
    std::vector<SuperVector<double>> ons = gram_schmidt(in.vectors, tol_or(o, 1e-10));
    njson vectors = njson::array();
    for (const auto& v : ons) {
      rep.text += fmt_super_vector(v) + "\n";
      vectors.push_back(vec_to_json(v.entries));
    }
    set_json(rep, o, njson{{"verb", "metric gram-schmidt"},
                           {"partition", partition_to_json(ons.front().partition)},
                           {"vectors", std::move(vectors)}});
  } else if (action == "project") {
    reject_rational(o, "metric project");
    VectorListInput<double> in = vector_list_from_json<double>(js[0]);
    if (!in.target)
      fail(errc::parse_error, "project needs a \"target\" vector in the input file");
    SuperVector<double> alpha = best_approximation(in.vectors, *in.target);
    rep.text = fmt_super_vector(alpha) + "\n";
    njson j = to_json(alpha);
    j["verb"] = "metric project";
    set_json(rep, o, std::move(j));
  } else if (action == "form-report") {
    rep = o.rational ? form_report_impl<Rat>(js[0], o) : form_report_impl<double>(js[0], o);
  } else if (action == "signature") {
    reject_rational(o, "metric signature");
    BilinearSuperForm<double> f(super_diagonal_from_json<double>(js[0]));
    SymmetricDiagonalization<double> d = diagonalize_symmetric(f, tol_or(o, 1e-9));
    std::vector<std::vector<std::string>> rows{{"block", "p", "q", "z", "rank", "signature"}};
    njson blocks = njson::array();
    for (size_t i = 0; i < d.report.p.size(); ++i) {
      rows.push_back({std::to_string(i), std::to_string(d.report.p[i]),
                      std::to_string(d.report.q[i]), std::to_string(d.report.z[i]),
                      std::to_string(d.report.rank[i]), std::to_string(d.report.signature[i])});
      blocks.push_back(njson{{"block", i},
                             {"p", d.report.p[i]},
                             {"q", d.report.q[i]},
                             {"z", d.report.z[i]},
                             {"rank", d.report.rank[i]},
                             {"signature", d.report.signature[i]}});
    }
    rep.text = fmt_table(rows);
    set_json(rep, o, njson{{"verb", "metric signature"}, {"blocks", std::move(blocks)}});
  } else {
    fail(errc::parse_error, "unknown metric action \"" + action + "\"");
  }
  return rep;
}

// ---- markov verb ----

Report markov_report(const std::string& action, const std::vector<njson>& js, const Opts& o) {
  reject_rational(o, "markov " + action);
  need_inputs(js, 1, "markov " + action);
  MarkovInput in = markov_from_json(js[0]);
  Report rep;
  if (action == "step") {
    if (!in.x0) fail(errc::parse_error, "step needs an \"x0\" distribution in the model file");
    DistributionSuperVector x = step(in.chain, *in.x0, o.steps);
    std::vector<std::vector<std::string>> rows{{"block", "distribution"}};
    njson blocks = njson::array();
    for (size_t t = 0; t < x.blocks.size(); ++t) {
      rows.push_back({std::to_string(t), fmt_entries(x.blocks[t])});
      blocks.push_back(njson{{"block", t},
                             {"verdict", "ok"},
                             {"vector", vec_to_json(x.blocks[t])},
                             {"residual", 0.0},
                             {"iterations", o.steps}});
    }
    rep.text = fmt_table(rows);
    set_json(rep, o, njson{{"verb", "markov step"}, {"blocks", std::move(blocks)}});
  } else if (action == "limit") {
    ErgodicLimit lim = ergodic_limit(in.chain, tol_or(o, 1e-10),
                                     o.max_iter > 0 ? o.max_iter : 1000000);
    std::vector<std::vector<std::string>> rows{{"block", "stationary", "iterations", "residual"}};
    njson blocks = njson::array();
    for (size_t t = 0; t < lim.stationary.size(); ++t) {
      Eigen::RowVectorXd pi = lim.stationary[t].transpose();
      double residual = (pi * in.chain.transitions[t] - pi).cwiseAbs().maxCoeff();
      rows.push_back({std::to_string(t), fmt_entries(lim.stationary[t]),
                      std::to_string(lim.iterations[t]), fmt_number(residual)});
      blocks.push_back(njson{{"block", t},
                             {"verdict", "ergodic"},
                             {"vector", vec_to_json(lim.stationary[t])},
                             {"residual", residual},
                             {"iterations", lim.iterations[t]}});
    }
    rep.text = fmt_table(rows);
    njson j{{"verb", "markov limit"}, {"blocks", std::move(blocks)}};
    if (in.x0) {
      DistributionSuperVector xinf = x_infinity(lim, *in.x0);
      std::vector<std::vector<std::string>> xrows{{"block", "limit distribution"}};
      njson xj = njson::array();
      for (size_t t = 0; t < xinf.blocks.size(); ++t) {
        xrows.push_back({std::to_string(t), fmt_entries(xinf.blocks[t])});
        xj.push_back(vec_to_json(xinf.blocks[t]));
      }
      rep.text = fmt_table(rows) + fmt_table(xrows);
      j["x_infinity"] = std::move(xj);
    }
    set_json(rep, o, std::move(j));
  } else {
    fail(errc::parse_error, "unknown markov action \"" + action + "\"");
  }
  return rep;
}

// ---- leontief verb ----

Report leontief_report(const std::string& action, const std::vector<njson>& js, const Opts& o) {
  reject_rational(o, "leontief " + action);
  need_inputs(js, 1, "leontief " + action);
  LeontiefModel m = leontief_from_json(js[0], o.relaxed);
  Report rep;
  if (action == "closed") {
    std::vector<ClosedBlockResult> rs = leontief_closed_solve(m, o.relaxed);
    std::vector<std::vector<std::string>> rows;
    rows.push_back(o.relaxed
                       ? std::vector<std::string>{"block", "price", "candidates", "residual"}
                       : std::vector<std::string>{"block", "price", "unique", "residual"});
    njson blocks = njson::array();
    for (size_t t = 0; t < rs.size(); ++t) {
      const ClosedBlockResult& r = rs[t];
      njson b{{"block", t},
              {"verdict", o.relaxed ? "relaxed" : "solved"},
              {"vector", vec_to_json(r.price)},
              {"residual", r.residual},
              {"iterations", 0},
              {"unique", r.unique}};
      if (o.relaxed) {
        rows.push_back({std::to_string(t), fmt_entries(r.price),
                        std::to_string(r.candidates.size()), fmt_number(r.residual)});
        njson cs = njson::array();
        for (const auto& c : r.candidates) cs.push_back(vec_to_json(c));
        b["candidates"] = std::move(cs);
      } else {
        rows.push_back({std::to_string(t), fmt_entries(r.price), r.unique ? "yes" : "no",
                        fmt_number(r.residual)});
      }
      blocks.push_back(std::move(b));
    }
    rep.text = fmt_table(rows);
    set_json(rep, o, njson{{"verb", "leontief closed"}, {"blocks", std::move(blocks)}});
  } else if (action == "open") {
    std::vector<OpenBlockResult> rs = leontief_open_solve(m);
    std::vector<std::vector<std::string>> rows{{"block", "production", "productive", "residual"}};
    njson blocks = njson::array();
    for (size_t t = 0; t < rs.size(); ++t) {
      const OpenBlockResult& r = rs[t];
      rows.push_back({std::to_string(t), fmt_entries(r.production), r.productive ? "yes" : "no",
                      fmt_number(r.residual)});
      blocks.push_back(njson{{"block", t},
                             {"verdict", r.productive ? "productive" : "not productive"},
                             {"vector", vec_to_json(r.production)},
                             {"residual", r.residual},
                             {"iterations", 0},
                             {"row_sums_ok", r.row_sums_ok},
                             {"col_sums_ok", r.col_sums_ok},
                             {"inverse_nonneg", r.inverse_nonneg},
                             {"x_nonneg", r.x_nonneg}});
    }
    rep.text = fmt_table(rows);
    set_json(rep, o, njson{{"verb", "leontief open"}, {"blocks", std::move(blocks)}});
  } else {
    fail(errc::parse_error, "unknown leontief action \"" + action + "\"");
  }
  return rep;
}

Report dispatch(const std::string& verb, const std::string& action,
                const std::vector<njson>& js, const Opts& o) {
  if (verb == "matrix")
    return o.rational ? matrix_report<Rat>(action, js, o) : matrix_report<double>(action, js, o);
  if (verb == "spec")
    return o.rational ? spec_report<Rat>(action, js, o) : spec_report<double>(action, js, o);
  if (verb == "metric") return metric_report(action, js, o);
  if (verb == "markov") return markov_report(action, js, o);
  if (verb == "leontief") return leontief_report(action, js, o);
  fail(errc::parse_error, "unknown verb \"" + verb + "\"");
}

} // namespace

struct slm_report {
  Report r;
};

extern "C" {

void slm_options_init(slm_options* opts) {
  if (!opts) return;
  opts->tol = -1;
  opts->rational = 0;
  opts->relaxed = 0;
  opts->json = 0;
  opts->max_iter = -1;
  opts->steps = 1;
}

int slm_run(const char* verb, const char* action, const char* const* inputs, int input_count,
            const slm_options* opts, slm_report** out) {
  if (out) *out = nullptr;
  if (!verb || !action || !out || (input_count > 0 && !inputs)) {
    g_status = SLM_ERR_INPUT;
    g_error = "ParseError: null argument";
    return g_status;
  }
  try {
    std::vector<njson> js;
    for (int i = 0; i < input_count; ++i) {
      if (!inputs[i]) fail(errc::parse_error, "null input text");
      js.push_back(parse_json_text(inputs[i]));
    }
    Opts o;
    if (opts) {
      o.tol = opts->tol;
      o.rational = opts->rational != 0;
      o.relaxed = opts->relaxed != 0;
      o.json = opts->json != 0;
      if (opts->max_iter > 0) o.max_iter = opts->max_iter;
      o.steps = opts->steps;
    }
    Report rep = dispatch(verb, action, js, o);
    *out = new slm_report{std::move(rep)};
    g_status = 0;
    g_error.clear();
    return SLM_OK;
  } catch (const super_error& e) {
    g_status = status_for(e.code);
    g_error = e.what();
    return g_status;
  } catch (const nlohmann::json::exception& e) {
    g_status = SLM_ERR_INPUT;
    g_error = std::string("ParseError: ") + e.what();
    return g_status;
  } catch (const std::exception& e) {
    g_status = SLM_ERR_MATH;
    g_error = e.what();
    return g_status;
  }
}

const char* slm_report_text(const slm_report* rep) { return rep ? rep->r.text.c_str() : nullptr; }

const char* slm_report_json(const slm_report* rep) {
  return (rep && rep->r.has_json) ? rep->r.json_text.c_str() : nullptr;
}

void slm_report_free(slm_report* rep) { delete rep; }

int slm_last_status(void) { return g_status; }

const char* slm_last_error(void) { return g_error.c_str(); }

const char* slm_version(void) { return "superlin 1.0.0"; }

} // extern "C"
