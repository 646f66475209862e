// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rpm/rpm.hpp"

using namespace rpm;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    passed = false;
    if (notes.size() < 12) notes.push_back(why);
  }
  void absorb(const Report& r, const std::string& prefix) {
    for (const auto& f : r.failures()) fail(prefix + f);
  }
};

std::map<long, exact::StationaryReport> g_stationary;

const exact::StationaryReport& stationary(long L) {
  auto it = g_stationary.find(L);
  if (it == g_stationary.end()) it = g_stationary.emplace(L, exact::stationary_report(L)).first;
  return it->second;
}

Outcome criterion1() {
  Outcome o;
  for (long L = 2; L <= 12; L += 2) {
    const auto& r = stationary(L);
    if (!r.peaks_ok) o.fail("L=" + std::to_string(L) + " expected_peaks " + to_fraction_string(r.peaks));
    if (!r.omega_ok) o.fail("L=" + std::to_string(L) + " prob_omega_global " + to_fraction_string(r.omega));
  }
  const auto& r2 = stationary(2);
  const auto& r4 = stationary(4);
  if (r2.peaks != 1 || r2.omega != make_rational(1, 2)) o.fail("L=2 spot values");
  if (r4.peaks != make_rational(8, 5) || r4.omega != make_rational(1, 5)) o.fail("L=4 spot values");
  o.notes.push_back("L=12 peaks " + to_fraction_string(stationary(12).peaks) + ", omega " +
                    to_fraction_string(stationary(12).omega));
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (long L = 2; L <= 12; L += 2) {
    const auto& r = stationary(L);
    if (!r.diamond_ok) o.fail("L=" + std::to_string(L) + " diamond " + to_fraction_string(r.drifts.diamond));
    if (!r.global_ok) o.fail("L=" + std::to_string(L) + " global " + to_fraction_string(r.drifts.global));
    if (r.drifts.diamond + r.peaks != Rational(L)) o.fail("L=" + std::to_string(L) + " tile balance");
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (long n = 1; n <= 20; ++n) {
    const Report r = tq::verify_lambdas(n);
    o.absorb(r, "N=" + std::to_string(n) + " ");
  }
  o.notes.push_back("N=20 alpha " + to_fraction_string(tq::lambda_alpha(20)) + ", beta " +
                    to_fraction_string(tq::lambda_beta(20)));
  return o;
}

Outcome criterion4() {
  Outcome o;
  double worst = 0.0;
  for (long L = 2; L <= 10; L += 2) {
    const StateSpace space(L);
    const double origin = scgf::lambda(space, {0.0, 0.0}).lambda;
    if (!(std::abs(origin) < 1e-12)) o.fail("L=" + std::to_string(L) + " Lambda(0,0)=" + std::to_string(origin));
    const auto d = scgf::scgf_derivatives(space, 1e-3);
    const auto& r = stationary(L);
    const double ea = std::abs(d.d_alpha - r.drifts.global.get_d()) / r.drifts.global.get_d();
    const double eb = std::abs(d.d_beta - r.drifts.diamond.get_d()) / r.drifts.diamond.get_d();
    worst = std::max({worst, ea, eb});
    if (!(ea < 1e-6)) o.fail("L=" + std::to_string(L) + " d_alpha rel err " + std::to_string(ea));
    if (!(eb < 1e-6)) o.fail("L=" + std::to_string(L) + " d_beta rel err " + std::to_string(eb));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst relative error %.2e", worst);
  o.notes.push_back(buf);
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (long n = 1; n <= 20; ++n) {
    const tq::Fsz f(n);
    const std::string tag = "N=" + std::to_string(n) + " ";
    const Check t = tq::verify_tq(f);
    if (!t.passed) o.fail(tag + "tq " + t.detail);
    o.absorb(tq::verify_wronskian(f), tag);  // both Wronskians and T(q)
    o.absorb(tq::verify_boundary(f), tag);   // 12 entries, Leibniz, product condition
    o.absorb(tq::hypergeometric_check(f), tag);
  }
  o.absorb(tq::recurrence_check(30), "recurrences ");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (long L = 4; L <= 14; L += 2) o.absorb(xxz::verify_ground_energy(L), "");
  for (long L : {4L, 6L, 8L}) {
    const long n = L / 2;
    o.absorb(xxz::verify_tl(L, std::polar(1.0, std::numbers::pi / 3.0),
                            std::polar(1.0, std::numbers::pi / (3.0 * static_cast<double>(n)))), "");
    o.absorb(xxz::verify_tl(L, std::polar(1.0, 0.7), std::polar(1.0, 0.3)), "generic ");
    o.absorb(xxz::verify_bridge(L, {-0.1, 0.0, 0.1}, {-0.1, 0.0, 0.1}), "");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  for (long L : {4L, 8L}) {
    kmc::SimConfig c;
    c.length = L;
    c.t_max = 1e5;
    c.seed = 20240601;
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = kmc::simulate(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto z = [&](const std::optional<kmc::Estimate>& e, const Rational& exact, const char* name) {
      if (!e) {
        o.fail("L=" + std::to_string(L) + " " + name + " undefined");
        return 0.0;
      }
      const double zz = (e->value - exact.get_d()) / e->std_error;
      if (!(std::abs(zz) <= 3.0)) o.fail("L=" + std::to_string(L) + " " + name + " z=" + std::to_string(zz));
      return zz;
    };
    const double zd = z(s.drift_diamond, exact::diamond_drift_formula(L), "diamond");
    const double zg = z(s.drift_global, exact::global_drift_formula(L), "global");
    const double zp = z(s.mean_peaks, exact::peaks_formula(L), "peaks");
    if (secs > 120.0) o.fail("L=" + std::to_string(L) + " took " + std::to_string(secs) + " s");
    if (!s.balance_held) o.fail("L=" + std::to_string(L) + " balance broken");
    char buf[128];
    std::snprintf(buf, sizeof buf, "L=%ld z=(%.2f, %.2f, %.2f) %.2fs", L, zd, zg, zp, secs);
    o.notes.push_back(buf);
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (long L = 2; L <= 10; L += 2) o.absorb(verify_pdp_properties(L), "");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact peaks and global-avalanche probability, L=2..12", criterion1},
      {"exact drifts and tile balance (stationary route), L=2..12", criterion2},
      {"exact drifts (T-Q route), N=1..20", criterion3},
      {"SCGF origin and finite-difference drifts, L=2..10", criterion4},
      {"T-Q machinery, N=1..20 (recurrences to 30)", criterion5},
      {"XXZ ground energy, TL relations, spectral bridge", criterion6},
      {"Monte Carlo time averages within 3 sigma, L=4,8", criterion7},
      {"pdp structural properties, L=2..10", criterion8},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("CRITERION %zu: %s  %s  [%.1fs]\n", k + 1, o.passed ? "PASS" : "FAIL", criteria[k].first.c_str(), secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
