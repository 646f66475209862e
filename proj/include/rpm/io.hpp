#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "rpm/error.hpp"
#include "rpm/kmc.hpp"
#include "rpm/pdp.hpp"
#include "rpm/rational.hpp"
#include "rpm/report.hpp"
#include "rpm/stationary.hpp"

namespace rpm::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Exact values are always fraction strings.
inline json fraction(const Rational& r) { return to_fraction_string(r); }

inline json to_json(const HeightProfile& h) { return h.vec(); }

inline json to_json(const TransitionRecord& t) {
  return {{"site", t.site},         {"class", std::string(to_string(t.move_class))},
          {"target", t.target.vec()}, {"dDiamond", t.delta_diamond},
          {"dGlobal", t.delta_global}, {"dPeak", t.delta_peak},
          {"dTiles", t.delta_tiles}};
}

inline json to_json(const EventCounters& c) {
  return {{"N", c.n_total}, {"N_peak", c.n_peak}, {"N_diamond", c.n_diamond}, {"N_global", c.n_global},
          {"n_tiles", c.n_tiles}};
}

inline json to_json(const std::optional<kmc::Estimate>& e) {
  if (!e) return nullptr;
  return {{"value", e->value}, {"std_error", e->std_error}};
}

inline json to_json(const kmc::TrajectorySummary& s) {
  return {{"length", s.length},
          {"seed", s.seed},
          {"elapsed_time", s.elapsed_time},
          {"counters", to_json(s.counters)},
          {"drift_diamond", to_json(s.drift_diamond)},
          {"drift_global", to_json(s.drift_global)},
          {"mean_peaks", to_json(s.mean_peaks)},
          {"batches", s.batches},
          {"balance_held", s.balance_held}};
}

inline json to_json(const kmc::ProgressRecord& r) {
  return {{"time", r.time},
          {"counters", to_json(r.counters)},
          {"drift_diamond", r.drift_diamond},
          {"drift_global", r.drift_global},
          {"mean_peaks", r.mean_peaks}};
}

inline json to_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.passed}, {"detail", c.detail}});
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  return {{"pass", r.passed()}, {"checks", checks}, {"values", values}};
}

inline json to_json(const exact::StationaryReport& r, bool integers) {
  json states = json::array();
  for (std::size_t k = 0; k < r.sv.states.size(); ++k)
    states.push_back({{"profile", r.sv.states[k].vec()}, {"pi", fraction(r.sv.probabilities[k])}});
  json j = {
      {"length", r.length},
      {"states", states},
      {"observables",
       {{"expected_peaks", fraction(r.peaks)},
        {"prob_omega_global", fraction(r.omega)},
        {"drift_diamond", fraction(r.drifts.diamond)},
        {"drift_global", fraction(r.drifts.global)}}},
      {"formulas",
       {{"expected_peaks", fraction(exact::peaks_formula(r.length))},
        {"prob_omega_global", fraction(exact::omega_formula(r.length))},
        {"drift_diamond", fraction(exact::diamond_drift_formula(r.length))},
        {"drift_global", fraction(exact::global_drift_formula(r.length))}}},
      {"checks",
       {{"expected_peaks", r.peaks_ok},
        {"prob_omega_global", r.omega_ok},
        {"drift_diamond", r.diamond_ok},
        {"drift_global", r.global_ok},
        {"tile_balance", r.drifts.tile_balance}}},
      {"pass", r.passed()}};
  if (integers) {
    json ints = json::array();
    for (const auto& v : r.sv.integer_form) ints.push_back(v.get_str());
    j["integer_form"] = ints;
    j["integer_sum"] = r.sv.integer_sum.get_str();
    j["integer_min"] = r.sv.integer_min.get_str();
    j["half_turn_symmetric_asm"] = r.asm_count.get_str();
    j["integer_sum_equals_asm"] = r.sum_matches_asm;
    j["double_integer_sum_equals_asm"] = r.doubled_sum_matches_asm;
  }
  return j;
}

/// Embedded in every output document.
struct RunManifest {
  std::string subcommand;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::string started;
  std::string finished;
  bool passed = true;
};

inline json to_json(const RunManifest& m) {
  json j = {{"subcommand", m.subcommand},   {"parameters", m.parameters}, {"tool_version", kToolVersion},
            {"started", m.started},         {"finished", m.finished},     {"pass", m.passed}};
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return j;
}

inline json document(const RunManifest& m, json result) { return {{"manifest", to_json(m)}, {"result", std::move(result)}}; }

/// Writes to `path`, or to stdout when the path is empty.
inline void emit(const json& doc, const std::string& path) {
  if (path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << doc.dump(2) << '\n';
}

inline json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
}

// JSON-lines logging to stderr, level from RPM_LOG (error|warn|info|debug; default warn).
enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level log_level() {
  static const Level level = [] {
    const char* v = std::getenv("RPM_LOG");
    if (!v) return Level::Warn;
    const std::string s(v);
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline void log(Level level, const std::string& msg, json fields = json::object()) {
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  fields["level"] = names[static_cast<int>(level)];
  fields["msg"] = msg;
  std::cerr << fields.dump() << '\n';
}

}  // namespace rpm::io
