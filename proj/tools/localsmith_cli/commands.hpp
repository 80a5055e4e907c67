// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "localsmith/artin.hpp"
#include "localsmith/ginverse.hpp"
#include "localsmith/smith_form.hpp"
#include "localsmith/structure_checks.hpp"
#include "localsmith/transform.hpp"
#include "localsmith_cli/input_doc.hpp"

namespace localsmith::cli {

struct CommandOptions {
  std::string command;
  int order = -1;  // -1: default 2k+6
  int k_max = -1;  // -1: document value or 64
  bool check = false;
  std::optional<std::string> at;        // recenter before analysis
  std::string backend;                  // "", "exact", "float"
  std::optional<double> tol;
  std::optional<std::string> samples;   // comma separated
  std::string format = "text";
  uint64_t seed = 20240101;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNonStabilized = 3;
inline constexpr int kExitVerification = 4;

// --- serialization helpers --------------------------------------------------

template <Scalar K>
Json mat_json(const Mat<K>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(ScalarTraits<K>::str(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <Scalar K>
Json series_json(const MatSeries<K>& s, int through = -1) {
  Json out;
  out["kind"] = s.is_polynomial() ? "polynomial" : "jet";
  out["order"] = std::min(s.order(), through < 0 ? s.order() : through);
  Json coeffs = Json::array();
  int top = out["order"].get<int>();
  for (int t = 0; t <= top; ++t) coeffs.push_back(mat_json(s.at(t)));
  out["coefficients"] = std::move(coeffs);
  return out;
}

template <Scalar K>
Json laurent_json(const LaurentSeries<K>& l) {
  Json out;
  out["pole_order"] = l.pole_order();
  out["lowest_exponent"] = -l.pole_order();
  out["highest_exponent"] = l.order();
  Json coeffs = Json::array();
  for (int e = -l.pole_order(); e <= l.order(); ++e) coeffs.push_back(mat_json(l.at(e)));
  out["coefficients"] = std::move(coeffs);
  return out;
}

inline Json checks_json(const std::vector<CheckResult>& checks) {
  Json arr = Json::array();
  for (const CheckResult& c : checks) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

// --- text rendering of the structured document ------------------------------

inline bool is_matrix_like(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const Json& row : j) {
    if (!row.is_array()) return false;
    for (const Json& e : row)
      if (!e.is_string() && !e.is_number()) return false;
  }
  return true;
}

inline std::string inline_matrix(const Json& j) {
  std::string out = "[";
  bool first_row = true;
  for (const Json& row : j) {
    if (!first_row) out += "; ";
    first_row = false;
    bool first = true;
    for (const Json& e : row) {
      if (!first) out += " ";
      first = false;
      out += e.is_string() ? e.get<std::string>() : e.dump();
    }
  }
  return out + "]";
}

inline void render_text(const Json& j, std::ostream& os, int indent = 0) {
  std::string pad(static_cast<size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const Json& v = it.value();
      if (v.is_object() || (v.is_array() && !is_matrix_like(v) && !v.empty() &&
                            (v.front().is_object() || v.front().is_array()))) {
        os << pad << it.key() << ":\n";
        render_text(v, os, indent + 1);
      } else if (is_matrix_like(v) && !v.empty() && v.front().is_array()) {
        os << pad << it.key() << ": " << inline_matrix(v) << "\n";
      } else if (v.is_array()) {
        os << pad << it.key() << ": " << v.dump() << "\n";
      } else {
        os << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
           << "\n";
      }
    }
  } else if (j.is_array()) {
    int idx = 0;
    for (const Json& v : j) {
      if (v.is_object()) {
        os << pad << "- [" << idx << "]\n";
        render_text(v, os, indent + 1);
      } else if (is_matrix_like(v)) {
        os << pad << "- " << inline_matrix(v) << "\n";
      } else {
        os << pad << "- " << v.dump() << "\n";
      }
      ++idx;
    }
  } else {
    os << pad << j.dump() << "\n";
  }
}

// --- command core ------------------------------------------------------------

template <Scalar K>
Json stabilization_json(const RecursionState<K>& state) {
  const StabilizationReport& st = state.require_stabilization();
  Json out;
  out["k"] = st.k;
  out["certified"] = st.certified;
  out["certification_method"] = certification_name(st.method);
  out["degenerate"] = st.degenerate;
  out["horizon_steps"] = st.horizon;
  out["exponents"] = chain_exponents(state);
  out["exponent_multiplicities"] = st.exponent_multiplicities;
  out["dim_kernel_limit"] = st.dim_kernel_limit;
  out["dim_range_limit"] = st.dim_range_limit;
  Json steps = Json::array();
  for (int i = 1; i <= st.k + 1; ++i) {
    Json s;
    s["step"] = i;
    s["dim_kernel"] = state.step(i).n.dim();
    s["dim_kernel_complement"] = state.step(i).n_c.dim();
    s["dim_leading_space"] = state.step(i).r.dim();
    s["dim_target_complement"] = state.step(i).r_c.dim();
    steps.push_back(std::move(s));
  }
  out["steps"] = std::move(steps);
  return out;
}

template <Scalar K>
std::vector<K> parse_samples(const InputDocument& doc, const CommandOptions& opts) {
  std::vector<std::string> raw;
  if (opts.samples) {
    std::stringstream ss(*opts.samples);
    std::string tok;
    while (std::getline(ss, tok, ',')) raw.push_back(tok);
  } else if (!doc.sample_points.empty()) {
    raw = doc.sample_points;
  } else {
    raw = {"1/7", "-1/5", "2"};
  }
  std::vector<K> out;
  for (const std::string& s : raw) out.push_back(parse_entry_or_throw<K>(s));
  return out;
}

/// Assemble the order-`length` block system directly from the family; used
/// by the artin command to sample approximations.
template <Scalar K>
Mat<K> block_system(const MatSeries<K>& l, int length) {
  Mat<K> out(length * l.rows(), length * l.cols());
  for (int r = 1; r <= length; ++r)
    for (int c = r; c <= length; ++c)
      if (c - r <= l.valid_order()) out.set_block((r - 1) * l.rows(), (c - 1) * l.cols(),
                                                  l.at(c - r));
  return out;
}

template <Scalar K>
std::vector<CheckResult> verification_suite(const Diagonalization<K>& diag,
                                            const std::vector<K>& samples) {
  std::vector<CheckResult> checks;
  const MatSeries<K>& l = diag.state.family();

  if (!diag.degenerate) {
    auto structural = run_structure_checks(diag.state);
    checks.insert(checks.end(), structural.begin(), structural.end());
  }
  checks.push_back({"dual-path-phi", diag.degenerate || diag.dual_path_checked,
                    diag.dual_path_checked ? "" : "skipped (insufficient jet data)"});

  // factorization psi * Delta = L * phi coefficientwise
  {
    CheckResult c{"left-right-factorization", true, ""};
    MatSeries<K> lhs = series_mul(diag.psi.series, diag.delta.series());
    int top = std::min(diag.psi.valid_order, diag.s.valid_order());
    for (int t = 0; t <= top; ++t)
      if (lhs.at(t) != diag.s.at(t)) {
        c.pass = false;
        c.detail = "coefficient " + std::to_string(t);
        break;
      }
    checks.push_back(std::move(c));
  }
  checks.push_back({"diagonal-identity",
                    diag.identity_order >= 0 || l.valid_order() < 0,
                    "verified through order " + std::to_string(diag.identity_order)});

  if constexpr (ScalarTraits<K>::exact) {
    if (l.is_polynomial()) {
      CheckResult c{"oracle-smith", true, ""};
      auto oracle = smith_normal_form(l);
      std::vector<int> expect = oracle.local_exponents;
      std::sort(expect.begin(), expect.end());
      if (chain_exponents(diag.state) != expect) {
        c.pass = false;
        c.detail = "exponent multisets differ";
      }
      checks.push_back(std::move(c));
    }
  }

  {
    AxiomReport rep = verify_ginverse_axioms(diag, samples);
    std::string detail;
    for (const std::string& n : rep.notes) detail += (detail.empty() ? "" : "; ") + n;
    checks.push_back({"ginverse-axioms", rep.pass || !rep.checked, detail});
  }
  if (l.is_polynomial() && !diag.degenerate) {
    CheckResult c{"kernel-range-families", true, ""};
    int hits = 0;
    for (const K& eps : samples) {
      PointEvaluation<K> pe = evaluate_at(diag, eps);
      if (!pe.valid) continue;
      ++hits;
      if (!kernel_range_match_at(diag, pe)) {
        c.pass = false;
        c.detail = "mismatch at " + ScalarTraits<K>::str(eps);
        break;
      }
    }
    if (hits == 0) c.detail = "all sample points skipped";
    checks.push_back(std::move(c));
  }
  {
    auto pf = projection_families(diag.phi, diag.psi, diag.delta,
                                  std::min(diag.phi.valid_order, diag.psi.valid_order));
    checks.push_back({"projection-idempotence", pf.idempotent, ""});
  }
  return checks;
}

template <Scalar K>
int run_typed(const InputDocument& doc, const CommandOptions& opts, Json& out) {
  MatSeries<K> l = materialize<K>(doc);
  if (doc.tolerance) float_tolerance = *doc.tolerance;
  if (opts.tol) float_tolerance = *opts.tol;

  std::optional<std::string> shift_str = opts.at ? opts.at : doc.shift;
  if (shift_str) {
    K shift = parse_entry_or_throw<K>(*shift_str);
    l = recenter(l, shift);
    out["recentered_at"] = *shift_str;
  }

  out["input"] = Json{{"field", doc.field},
                      {"kind", doc.kind},
                      {"rows", l.rows()},
                      {"cols", l.cols()},
                      {"stored_order", l.order()}};
  if constexpr (!ScalarTraits<K>::exact) {
    out["backend_warning"] =
        "FLOAT BACKEND: every rank decision depends on the tolerance " +
        ScalarTraits<double>::str(float_tolerance) + "; results are best-effort";
  }

  int k_max = opts.k_max > 0 ? opts.k_max : doc.k_max.value_or(64);
  std::vector<K> samples = parse_samples<K>(doc, opts);

  if (opts.command == "oracle-smith") {
    if constexpr (!ScalarTraits<K>::exact) {
      throw ParseError("oracle-smith requires an exact scalar backend");
    } else {
      auto f = smith_normal_form(l);
      Json factors = Json::array();
      for (const auto& p : f.invariant_factors) {
        Json pj;
        pj["display"] = p.str();
        Json coeffs = Json::array();
        for (const K& c : p.coeffs()) coeffs.push_back(ScalarTraits<K>::str(c));
        pj["coefficients"] = std::move(coeffs);
        factors.push_back(std::move(pj));
      }
      out["invariant_factors"] = std::move(factors);
      out["local_exponents"] = f.local_exponents;
      out["generic_rank"] = static_cast<int>(f.invariant_factors.size());
      return kExitOk;
    }
  }

  if (opts.command == "analyze") {
    RecursionState<K> state = run_until_stabilized(l, k_max);
    out["stabilization"] = stabilization_json(state);
    const StabilizationReport& st = state.require_stabilization();
    state.ensure_steps(std::min(st.k + 3, k_max + 1));
    Json chains = Json::array();
    for (int len = 1; len <= std::min(st.k + 1, state.step_count()); ++len) {
      Json cj;
      cj["length"] = len;
      cj["dim"] = state.jordan_chain_basis(len).cols();
      chains.push_back(std::move(cj));
    }
    out["jordan_chain_dims"] = std::move(chains);
    if (opts.check) {
      auto checks = run_structure_checks(state);
      if constexpr (ScalarTraits<K>::exact) {
        if (l.is_polynomial()) {
          CheckResult c{"oracle-smith", true, ""};
          auto oracle = smith_normal_form(l);
          std::vector<int> expect = oracle.local_exponents;
          std::sort(expect.begin(), expect.end());
          if (chain_exponents(state) != expect) {
            c.pass = false;
            c.detail = "exponent multisets differ";
          }
          checks.push_back(std::move(c));
        }
      }
      out["verification"] = checks_json(checks);
      for (const CheckResult& c : checks)
        if (!c.pass) return kExitVerification;
    }
    return kExitOk;
  }

  // remaining commands all run the full construction
  DiagonalizeOptions dopts;
  dopts.order = opts.order;
  dopts.k_max = k_max;
  Diagonalization<K> diag = diagonalize(l, dopts);
  const int k = diag.delta.k;
  int order = opts.order >= 0 ? opts.order : 2 * k + 6;

  out["stabilization"] = stabilization_json(diag.state);

  if (opts.command == "diagonalize" || opts.command == "ginverse" || opts.command == "solve" ||
      opts.command == "artin") {
    Json t;
    t["phi"] = series_json(diag.phi.series, std::min(order, diag.phi.valid_order));
    t["phi_valid_order"] = diag.phi.valid_order;
    t["psi"] = series_json(diag.psi.series, std::min(order, diag.psi.valid_order));
    t["psi_valid_order"] = diag.psi.valid_order;
    t["dual_path_checked"] = diag.dual_path_checked;
    out["transforms"] = std::move(t);
    out["diagonal"] = series_json(diag.delta.series());
    out["diagonal_identity_verified_through"] = diag.identity_order;
  }

  if (opts.command == "ginverse") {
    auto lp = l_pinv_laurent(diag.phi, diag.delta, diag.psi, order);
    out["delta_pinv"] = laurent_json(delta_pinv(diag.delta));
    out["l_pinv"] = laurent_json(lp);
    auto pf = projection_families(diag.phi, diag.psi, diag.delta, order);
    out["projection_onto_domain_part"] = series_json(pf.onto_domain_part);
    out["projection_onto_range"] = series_json(pf.onto_range);
    auto fams = kernel_range_families(diag.phi, diag.psi, diag.delta);
    out["kernel_family"] = series_json(fams.kernel_family, order);
    out["range_family"] = series_json(fams.range_family, order);
    auto srep = smith_report(diag.state, diag.delta, &diag.psi);
    Json sj;
    sj["exponents"] = srep.exponents;
    sj["rank_limit"] = srep.rank_limit;
    sj["kernel_limit_dim"] = srep.kernel_limit_dim;
    sj["full_smith"] = srep.full_smith;
    sj["degenerate"] = srep.degenerate;
    if (srep.constant_factor) sj["constant_factor"] = mat_json(*srep.constant_factor);
    if (srep.right_factor) sj["right_factor"] = series_json(*srep.right_factor);
    out["smith_report"] = std::move(sj);
  }

  if (opts.command == "solve") {
    auto fb = flat_basis(diag.state, diag.phi);
    Json gens = Json::array();
    for (const auto& g : fb.generators)
      gens.push_back(series_json(g.series, std::min(order, g.series.valid_order())));
    out["flat_basis"] = std::move(gens);
    out["solution_space_note"] =
        "every power-series solution is phi(eps) applied to a limit-kernel coefficient series";
  }

  if (opts.command == "artin") {
    Json table = Json::array();
    for (int ell = 1; ell <= 3; ++ell) {
      Json row;
      row["l"] = ell;
      row["greenberg"] = greenberg(diag.state, ell);
      table.push_back(std::move(row));
    }
    out["greenberg"] = std::move(table);

    auto curve = materialize_curve<K>(doc);
    Json runs = Json::array();
    if (curve) {
      SolutionCurve<K> b{*curve};
      auto res = residual_order(l, b);
      Json run;
      run["source"] = "input-curve";
      run["curve"] = series_json(b.series);
      run["residual_order"] = res ? Json(*res) : Json("exact-through-order");
      if (!res) {
        auto par = parametrize_solution(b, diag.phi, diag.state);
        Json pj = Json::array();
        for (const auto& c : par.coeffs) pj.push_back(mat_json(c));
        run["limit_kernel_coefficients"] = std::move(pj);
      } else if (*res >= k + 1) {
        int ell = *res - k;
        auto bhat = artin_approximate(b, diag.state, diag.phi, ell);
        run["l"] = ell;
        run["exact_solution"] = series_json(bhat.series, std::min(order, bhat.order()));
      } else {
        run["note"] = "curve is not an approximation beyond the stabilization index";
      }
      runs.push_back(std::move(run));
    } else if (diag.delta.kernel_limit.dim() > 0 && ScalarTraits<K>::exact) {
      std::mt19937_64 rng(opts.seed);
      std::uniform_int_distribution<int> num(-2, 2);
      for (int ell = 1; ell <= 2; ++ell) {
        Mat<K> ker = kernel_basis(block_system(l, k + ell));
        if (ker.cols() == 0) continue;
        Mat<K> combo(ker.cols(), 1);
        for (int i = 0; i < ker.cols(); ++i) combo(i, 0) = K(num(rng));
        Mat<K> tuple = ker * combo;
        std::vector<Mat<K>> coeffs(static_cast<size_t>(k + ell), Mat<K>(l.cols(), 1));
        for (int r = 1; r <= k + ell; ++r)
          coeffs[static_cast<size_t>(k + ell - r)] = tuple.block((r - 1) * l.cols(), 0, l.cols(), 1);
        SolutionCurve<K> b{MatSeries<K>::jet(std::move(coeffs))};
        auto bhat = artin_approximate(b, diag.state, diag.phi, ell);
        Json run;
        run["source"] = "sampled";
        run["l"] = ell;
        run["curve"] = series_json(b.series);
        run["exact_solution"] = series_json(bhat.series, std::min(order, bhat.order()));
        bool agree = true;
        for (int t = 0; t < ell; ++t) agree = agree && bhat.series.at(t) == b.series.at(t);
        run["agrees_through"] = ell - 1;
        run["agreement_verified"] = agree;
        runs.push_back(std::move(run));
      }
    }
    out["approximations"] = std::move(runs);
  }

  if (opts.check) {
    auto checks = verification_suite(diag, samples);
    out["verification"] = checks_json(checks);
    for (const CheckResult& c : checks)
      if (!c.pass) return kExitVerification;
  }
  return kExitOk;
}

}  // namespace localsmith::cli
