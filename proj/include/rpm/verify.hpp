#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rpm/io.hpp"
#include "rpm/scgf.hpp"
#include "rpm/stationary.hpp"
#include "rpm/tq_derivatives.hpp"
#include "rpm/xxz.hpp"

namespace rpm::verify {

using io::json;

struct Options {
  long lmax = 10;
  long nmax = 12;
  // Test hook: negates the exact diamond drift before it is compared.
  bool negative_control = false;
};

struct Row {
  std::string key;
  json values;
  bool passed = false;
  std::string detail;
};

inline constexpr double kDerivativeRelTol = 1e-6;
inline constexpr double kScgfOriginTol = 1e-12;
inline constexpr double kStep = 1e-3;

inline std::string padded(const char* prefix, long v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%02ld", prefix, v);
  return buf;
}

inline double rel_err(double got, const Rational& want) {
  const double w = want.get_d();
  return std::abs(got - w) / std::max(1.0, std::abs(w));
}

/// Exact stationary observables against the closed forms, then the SCGF
/// derivatives against those exact values.
inline std::vector<Row> length_rows(long L, const Options& opt) {
  std::vector<Row> rows;
  const exact::StationaryReport rep = exact::stationary_report(L);
  Rational diamond = rep.drifts.diamond;
  if (opt.negative_control) diamond = -diamond;
  {
    Row r;
    r.key = padded("1 stationary L=", L);
    const bool diamond_ok = diamond == exact::diamond_drift_formula(L);
    r.passed = rep.peaks_ok && rep.omega_ok && diamond_ok && rep.global_ok && rep.drifts.tile_balance;
    r.values = {{"expected_peaks", {io::fraction(rep.peaks), io::fraction(exact::peaks_formula(L))}},
                {"prob_omega_global", {io::fraction(rep.omega), io::fraction(exact::omega_formula(L))}},
                {"drift_diamond", {io::fraction(diamond), io::fraction(exact::diamond_drift_formula(L))}},
                {"drift_global", {io::fraction(rep.drifts.global), io::fraction(exact::global_drift_formula(L))}},
                {"tile_balance", rep.drifts.tile_balance}};
    if (!r.passed) r.detail = "exact value differs from closed form";
    rows.push_back(std::move(r));
  }
  {
    Row r;
    r.key = padded("2 scgf L=", L);
    const StateSpace space(L);
    const double origin = scgf::lambda(space, {0.0, 0.0}).lambda;
    const scgf::Derivatives d = scgf::scgf_derivatives(space, kStep);
    const double ea = rel_err(d.d_alpha, rep.drifts.global), eb = rel_err(d.d_beta, diamond);
    r.passed = std::abs(origin) < kScgfOriginTol && ea < kDerivativeRelTol && eb < kDerivativeRelTol;
    r.values = {{"lambda_origin", origin},
                {"d_alpha", d.d_alpha},
                {"d_beta", d.d_beta},
                {"exact_global", io::fraction(rep.drifts.global)},
                {"exact_diamond", io::fraction(diamond)},
                {"rel_err_alpha", ea},
                {"rel_err_beta", eb}};
    if (!r.passed) r.detail = "finite differences disagree with the exact drifts";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Row tq_row(long n) {
  Row r;
  r.key = padded("3 tq N=", n);
  const Report rep = tq::verify_lambdas(n);
  r.passed = rep.passed();
  std::string la, lb;
  for (const auto& [k, v] : rep.values) {
    if (k == "lambda_alpha") la = v;
    if (k == "lambda_beta") lb = v;
  }
  r.values = {{"lambda_alpha", {la, io::fraction(tq::lambda_alpha_formula(n))}},
              {"lambda_beta", {lb, io::fraction(tq::lambda_beta_formula(n))}}};
  const auto f = rep.failures();
  if (!f.empty()) r.detail = f.front();
  return r;
}

inline Row xxz_row(long L) {
  Row r;
  r.key = padded("4 xxz L=", L);
  Report rep = xxz::verify_ground_energy(L);
  if (L <= 8) rep.append(xxz::verify_bridge(L, {-0.1, 0.0, 0.1}, {-0.1, 0.0, 0.1}));
  r.passed = rep.passed();
  r.values = {{"energy", xxz::ground_energy(xxz::combinatorial_point(L))}, {"expected", -0.75 * static_cast<double>(L)},
              {"bridge_points", L <= 8 ? 9 : 0}};
  const auto f = rep.failures();
  if (!f.empty()) r.detail = f.front();
  return r;
}

struct Result {
  std::vector<Row> rows;
  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.passed; });
  }
};

inline Result verify_all(const Options& opt) {
  if (opt.lmax < 2 || opt.lmax % 2 != 0) throw UsageError("--lmax must be even and >= 2");
  if (opt.lmax > exact::kDefaultExactCap) throw ResourceError("--lmax above the exact cap " + std::to_string(exact::kDefaultExactCap));
  if (opt.nmax < 1) throw UsageError("--nmax must be >= 1");
  Result res;
  for (long L = 2; L <= opt.lmax; L += 2) {
    io::log(io::Level::Info, "length rows", {{"L", L}});
    for (auto& r : length_rows(L, opt)) res.rows.push_back(std::move(r));
  }
  for (long n = 1; n <= opt.nmax; ++n) res.rows.push_back(tq_row(n));
  for (long L = 4; L <= std::min<long>(opt.lmax, 14); L += 2) res.rows.push_back(xxz_row(L));
  std::sort(res.rows.begin(), res.rows.end(), [](const Row& a, const Row& b) { return a.key < b.key; });
  return res;
}

inline json to_json(const Result& res) {
  json rows = json::array();
  for (const auto& r : res.rows) {
    json j = {{"row", r.key}, {"pass", r.passed}, {"values", r.values}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    rows.push_back(j);
  }
  return {{"pass", res.passed()}, {"rows", rows}};
}

}  // namespace rpm::verify
