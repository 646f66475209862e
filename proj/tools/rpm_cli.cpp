// rpm: command-line front end. Exit codes: 0 pass, 1 verification failure,
// 2 usage error, 3 resource or convergence error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "rpm/rpm.hpp"

namespace {

using rpm::io::json;

struct Common {
  std::string out;
  std::string config;
};

int finish(rpm::io::RunManifest m, json result, bool passed, const Common& c) {
  m.finished = rpm::io::utc_now();
  m.passed = passed;
  rpm::io::emit(rpm::io::document(m, std::move(result)), c.out);
  return passed ? 0 : 1;
}

// --config: a JSON object of option name -> value. Values are appended as
// flags unless the same option already appears on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  if (path.empty()) return args;
  const json cfg = rpm::io::read_config(path);
  if (!cfg.is_object()) throw rpm::UsageError("config must be a JSON object");
  std::set<std::string> present;
  for (const auto& a : args)
    if (a.rfind("--", 0) == 0) present.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  if (args.size() < 2 || args[1].rfind("-", 0) == 0) {
    if (!cfg.contains("subcommand")) throw rpm::UsageError("no subcommand given on the command line or in the config");
    args.insert(args.begin() + 1, cfg["subcommand"].get<std::string>());
  }
  for (const auto& [key, value] : cfg.items()) {
    if (key == "subcommand" || present.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return args;
}

int cmd_simulate(long length, double time, std::uint64_t events, std::uint64_t seed, std::size_t replicas,
                 double report_every, const std::string& log_path, const Common& c, bool time_set, bool events_set) {
  rpm::kmc::SimConfig cfg;
  cfg.length = length;
  if (time_set) cfg.t_max = time;
  if (events_set) cfg.max_events = events;
  cfg.seed = seed;
  cfg.report_every = report_every;
  if (!log_path.empty() && report_every <= 0.0)
    cfg.report_every = time_set ? time / 100.0 : 1.0;
  cfg.validate();
  if (replicas < 1) throw rpm::UsageError("--replicas must be >= 1");

  rpm::io::RunManifest m{"simulate", json::object(), seed, rpm::io::utc_now(), {}, true};
  m.parameters = {{"length", length}, {"replicas", replicas}, {"report_every", cfg.report_every}};
  if (time_set) m.parameters["time"] = time;
  if (events_set) m.parameters["events"] = events;

  const json exact = {{"drift_diamond", rpm::io::fraction(rpm::exact::diamond_drift_formula(length))},
                      {"drift_global", rpm::io::fraction(rpm::exact::global_drift_formula(length))},
                      {"mean_peaks", rpm::io::fraction(rpm::exact::peaks_formula(length))}};
  json result;
  bool balance = true;
  if (replicas == 1) {
    std::ofstream log;
    rpm::kmc::ProgressSink sink;
    if (!log_path.empty()) {
      log.open(log_path);
      if (!log) throw rpm::UsageError("cannot open log file: " + log_path);
      sink = [&](const rpm::kmc::ProgressRecord& r) { log << rpm::io::to_json(r).dump() << '\n'; };
    }
    const auto s = rpm::kmc::simulate(cfg, sink);
    balance = s.balance_held;
    result = {{"summary", rpm::io::to_json(s)}, {"closed_forms", exact}};
  } else {
    if (!log_path.empty()) throw rpm::UsageError("--log is only supported with a single replica");
    const auto runs = rpm::kmc::run_ensemble(cfg, replicas);
    json list = json::array();
    for (const auto& r : runs) {
      list.push_back(rpm::io::to_json(r));
      balance = balance && r.balance_held;
    }
    const auto p = rpm::kmc::pool(runs);
    result = {{"replicas", list},
              {"pooled",
               {{"drift_diamond", rpm::io::to_json(p.drift_diamond)},
                {"drift_global", rpm::io::to_json(p.drift_global)},
                {"mean_peaks", rpm::io::to_json(p.mean_peaks)}}},
              {"closed_forms", exact}};
  }
  return finish(m, result, balance, c);
}

int cmd_stationary(long length, bool integers, const Common& c) {
  rpm::io::RunManifest m{"stationary", {{"length", length}, {"integers", integers}}, std::nullopt, rpm::io::utc_now(), {}, true};
  const auto rep = rpm::exact::stationary_report(length);
  return finish(m, rpm::io::to_json(rep, integers), rep.passed(), c);
}

int cmd_scgf(long length, double alpha, double beta, bool fd_check, double step, const Common& c) {
  rpm::io::RunManifest m{"scgf", {{"length", length}, {"alpha", alpha}, {"beta", beta}}, std::nullopt,
                         rpm::io::utc_now(), {}, true};
  rpm::require_length(length);
  if (length > rpm::scgf::kDefaultCap) throw rpm::ResourceError("L above the SCGF cap " + std::to_string(rpm::scgf::kDefaultCap));
  const rpm::StateSpace space(length);
  const auto r = rpm::scgf::lambda(space, {alpha, beta});
  json result = {{"lambda", r.lambda}, {"residual", r.residual}, {"iterations", r.iterations}, {"dense", r.dense}};
  if (r.gap) result["gap"] = *r.gap;
  bool passed = true;
  if (fd_check) {
    m.parameters["fd_check"] = true;
    m.parameters["step"] = step;
    const auto d = rpm::scgf::scgf_derivatives(space, step);
    const rpm::Rational g = rpm::exact::global_drift_formula(length), dm = rpm::exact::diamond_drift_formula(length);
    const double ea = rpm::verify::rel_err(d.d_alpha, g), eb = rpm::verify::rel_err(d.d_beta, dm);
    const bool ok_a = ea < rpm::verify::kDerivativeRelTol, ok_b = eb < rpm::verify::kDerivativeRelTol;
    result["derivatives"] = {{"d_alpha", d.d_alpha},
                             {"d_beta", d.d_beta},
                             {"exact_global", rpm::io::fraction(g)},
                             {"exact_diamond", rpm::io::fraction(dm)},
                             {"rel_err_alpha", ea},
                             {"rel_err_beta", eb},
                             {"pass_alpha", ok_a},
                             {"pass_beta", ok_b}};
    passed = ok_a && ok_b;
  }
  return finish(m, result, passed, c);
}

rpm::Report tq_report(long n, const std::string& check) {
  using namespace rpm::tq;
  const Fsz f(n);
  rpm::Report r;
  const bool all = check == "all";
  if (all || check == "tq") {
    const rpm::Check t = verify_tq(f);
    r.checks.push_back(t);
    r.append(verify_structure(f));
    r.checks.push_back(verify_product_condition(f));
  }
  if (all || check == "wronskian") r.append(verify_wronskian(f));
  if (all || check == "boundary") {
    r.append(verify_boundary(f));
    r.append(verify_leibniz(f));
  }
  if (all || check == "hyper") r.append(hypergeometric_check(f));
  if (all || check == "recurrences") r.append(recurrence_check(std::max<long>(n, 3)));
  if (all || check == "lambda") r.append(verify_lambdas(n));
  if (all || check == "bethe") r.append(verify_bethe(f));
  return r;
}

int cmd_tq(long n, const std::string& check, const Common& c) {
  rpm::io::RunManifest m{"tq", {{"n", n}, {"check", check}}, std::nullopt, rpm::io::utc_now(), {}, true};
  rpm::tq::require_n(n);
  const rpm::Report r = tq_report(n, check);
  json result = rpm::io::to_json(r);
  result["n"] = n;
  if (check == "lambda" || check == "all") {
    result["alpha"] = rpm::io::fraction(rpm::tq::lambda_alpha(n));
    result["beta"] = rpm::io::fraction(rpm::tq::lambda_beta(n));
  }
  return finish(m, result, r.passed(), c);
}

int cmd_xxz(long length, double alpha, double beta, const Common& c) {
  rpm::io::RunManifest m{"xxz", {{"length", length}, {"alpha", alpha}, {"beta", beta}}, std::nullopt,
                         rpm::io::utc_now(), {}, true};
  const auto p = rpm::xxz::bridge_params(length, alpha, beta);
  const double energy = rpm::xxz::ground_energy(p);
  const double bridge = -std::exp(beta) * energy - 0.75 * static_cast<double>(length);
  json result = {{"energy", energy},
                 {"delta", p.delta},
                 {"twist_arg", std::arg(p.u)},
                 {"lambda_bridge", bridge}};
  bool passed = true;
  if (length <= rpm::xxz::kFullSpaceCap) {
    const long n = length / 2;
    const rpm::Report tl = rpm::xxz::verify_tl(length, std::polar(1.0, std::numbers::pi / 3.0),
                                               std::polar(1.0, std::numbers::pi / (3.0 * static_cast<double>(n))));
    result["tl_checks"] = rpm::io::to_json(tl);
    passed = tl.passed();
  }
  if (length <= rpm::scgf::kDefaultCap) {
    const double pdp = rpm::scgf::lambda(rpm::StateSpace(length), {alpha, beta}).lambda;
    const bool ok = std::abs(pdp - bridge) < rpm::xxz::kBridgeTolerance;
    result["lambda_pdp"] = pdp;
    result["bridge_pass"] = ok;
    passed = passed && ok;
  }
  if (alpha == 0.0 && beta == 0.0) {
    const bool ok = std::abs(energy + 0.75 * static_cast<double>(length)) < rpm::xxz::kGroundTolerance;
    result["energy_pass"] = ok;
    passed = passed && ok;
  }
  return finish(m, result, passed, c);
}

int cmd_verify_all(long lmax, long nmax, bool negative_control, const Common& c) {
  rpm::io::RunManifest m{"verify-all", {{"lmax", lmax}, {"nmax", nmax}}, std::nullopt, rpm::io::utc_now(), {}, true};
  if (negative_control) m.parameters["negative_control"] = true;
  const auto res = rpm::verify::verify_all({lmax, nmax, negative_control});
  for (const auto& r : res.rows)
    if (!r.passed) std::cerr << "FAILED ROW: " << r.key << (r.detail.empty() ? "" : " (" + r.detail + ")") << '\n';
  return finish(m, rpm::verify::to_json(res), res.passed(), c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raise and Peel model: simulation and exact verification"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "write JSON here instead of stdout");
    sub->add_option("--config", common.config, "JSON file of option values");
  };

  long length = 0;
  double time = 0.0, report_every = 0.0;
  std::uint64_t events = 0, seed = 0;
  std::size_t replicas = 1;
  std::string log_path;
  auto* sim = app.add_subcommand("simulate", "continuous-time Monte Carlo run");
  sim->add_option("--length", length, "system size L (even)")->required();
  auto* t_opt = sim->add_option("--time", time, "time horizon");
  auto* e_opt = sim->add_option("--events", events, "event budget");
  t_opt->excludes(e_opt);
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--replicas", replicas, "independent replicas (seeds seed, seed+1, ...)");
  sim->add_option("--report-every", report_every, "progress record interval");
  sim->add_option("--log", log_path, "JSON-lines progress log");
  add_common(sim);

  bool integers = false;
  auto* st = app.add_subcommand("stationary", "exact stationary distribution");
  st->add_option("--length", length, "system size L (even)")->required();
  st->add_flag("--integers", integers, "include the integer normalization");
  add_common(st);

  double alpha = 0.0, beta = 0.0, step = 1e-3;
  bool fd_check = false;
  auto* sc = app.add_subcommand("scgf", "largest eigenvalue of the deformed generator");
  sc->add_option("--length", length, "system size L (even)")->required();
  sc->add_option("--alpha", alpha, "global avalanche counting field");
  sc->add_option("--beta", beta, "desorbed tile counting field");
  sc->add_flag("--fd-check", fd_check, "finite-difference derivatives at the origin");
  sc->add_option("--step", step, "finite-difference step (<= 1e-3)");
  add_common(sc);

  long n = 1;
  std::string check = "all";
  auto* tq = app.add_subcommand("tq", "exact T-Q verification");
  tq->add_option("--n", n, "N = L/2")->required();
  tq->add_option("--check", check, "which checks")
      ->check(CLI::IsMember({"all", "tq", "wronskian", "boundary", "lambda", "hyper", "recurrences", "bethe"}));
  add_common(tq);

  auto* xx = app.add_subcommand("xxz", "XXZ ground state and the spectral bridge");
  xx->add_option("--length", length, "chain length L (even)")->required();
  xx->add_option("--alpha", alpha, "global avalanche counting field");
  xx->add_option("--beta", beta, "desorbed tile counting field");
  add_common(xx);

  long lmax = 10, nmax = 12;
  bool negative_control = false;
  auto* va = app.add_subcommand("verify-all", "full cross-module verification table");
  va->add_option("--lmax", lmax, "largest L for the exact rows");
  va->add_option("--nmax", nmax, "largest N for the T-Q rows");
  va->add_flag("--negative-control", negative_control, "flip the sign of one exact value (harness check)")
      ->group("");
  add_common(va);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(args);
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const rpm::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(length, time, events, seed, replicas, report_every, log_path, common, t_opt->count() > 0,
                                  e_opt->count() > 0);
    if (*st) return cmd_stationary(length, integers, common);
    if (*sc) return cmd_scgf(length, alpha, beta, fd_check, step, common);
    if (*tq) return cmd_tq(n, check, common);
    if (*xx) return cmd_xxz(length, alpha, beta, common);
    if (*va) return cmd_verify_all(lmax, nmax, negative_control, common);
  } catch (const rpm::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const rpm::VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << '\n';
    return 1;
  } catch (const rpm::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const rpm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
