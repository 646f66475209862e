#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "rpm/error.hpp"
#include "rpm/pdp.hpp"

namespace rpm::kmc {

// Continuous-time simulation. All L clocks ring at rate 1, so the superposed
// process has Exp(L) waiting times and a uniformly chosen site. Each replica
// draws from one std::mt19937_64 stream seeded with (seed + replica index);
// uniforms are the top 53 bits of a draw and the site is rejection-sampled,
// so the event sequence depends only on the seed.

struct SimConfig {
  long length = 2;
  std::optional<double> t_max;
  std::optional<std::uint64_t> max_events;
  std::uint64_t seed = 0;
  double report_every = 0.0;  // <= 0 disables progress records

  void validate() const {
    require_length(length);
    if (t_max.has_value() == max_events.has_value())
      throw UsageError("exactly one of t_max / max_events must be set");
    if (t_max && !(*t_max >= 0.0 && std::isfinite(*t_max))) throw UsageError("t_max must be finite and >= 0");
    if (!std::isfinite(report_every)) throw UsageError("report_every must be finite");
  }
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct TrajectorySummary {
  long length = 0;
  std::uint64_t seed = 0;
  double elapsed_time = 0.0;
  EventCounters counters;
  double peak_time_integral = 0.0;
  // Empty when nothing happened (no elapsed time or too few batches).
  std::optional<Estimate> drift_diamond;
  std::optional<Estimate> drift_global;
  std::optional<Estimate> mean_peaks;
  std::size_t batches = 0;
  bool balance_held = true;  // N = N^peak + N^diamond + n_t after every event
};

struct ProgressRecord {
  double time = 0.0;
  EventCounters counters;
  double drift_diamond = 0.0;
  double drift_global = 0.0;
  double mean_peaks = 0.0;
};

using ProgressSink = std::function<void(const ProgressRecord&)>;

inline constexpr std::size_t kBatches = 32;
inline constexpr double kBurnInFraction = 0.05;

namespace detail {

inline double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_site(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

/// Batch-means accumulator over a fixed grid of batch boundaries in "clock"
/// units (time for time-limited runs, event count for event-limited runs).
struct BatchMeans {
  struct Batch {
    double duration = 0.0;
    double diamond = 0.0;
    double global = 0.0;
    double peak_integral = 0.0;
  };
  std::vector<Batch> batches;

  static Estimate summarize(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
  }

  std::optional<Estimate> stderr_of(double Batch::*field, double overall) const {
    std::vector<double> xs;
    for (const auto& b : batches)
      if (b.duration > 0.0) xs.push_back(b.*field / b.duration);
    if (xs.size() < 2) return std::nullopt;
    return Estimate{overall, summarize(xs).std_error};
  }
};

}  // namespace detail

/// One exact continuous-time realization. Starts from the substrate.
inline TrajectorySummary simulate(const SimConfig& cfg, const ProgressSink& progress = {}) {
  cfg.validate();
  const auto n = static_cast<std::uint64_t>(cfg.length);
  std::vector<int> h = substrate(cfg.length).vec();
  std::mt19937_64 rng(cfg.seed);

  TrajectorySummary s;
  s.length = cfg.length;
  s.seed = cfg.seed;

  const bool by_time = cfg.t_max.has_value();
  const double horizon = by_time ? *cfg.t_max : static_cast<double>(*cfg.max_events);
  const double burn_in = kBurnInFraction * horizon;
  const double batch_len = (horizon - burn_in) / static_cast<double>(kBatches);
  detail::BatchMeans bm;
  bm.batches.resize(kBatches);

  auto batch_index = [&](double clock) -> std::optional<std::size_t> {
    if (clock < burn_in || batch_len <= 0.0) return std::nullopt;
    auto k = static_cast<std::size_t>((clock - burn_in) / batch_len);
    return std::min(k, kBatches - 1);
  };

  // Integrates the (piecewise constant) peak count over [t0, t1) and splits the
  // contribution across batch boundaries for time-limited runs.
  auto integrate = [&](double t0, double t1, long peaks) {
    s.peak_time_integral += static_cast<double>(peaks) * (t1 - t0);
    if (!by_time) return;
    double a = std::max(t0, burn_in);
    while (a < t1) {
      auto k = *batch_index(a);
      double end = (k + 1 == kBatches) ? t1 : std::min(t1, burn_in + static_cast<double>(k + 1) * batch_len);
      if (end <= a) break;
      bm.batches[k].duration += end - a;
      bm.batches[k].peak_integral += static_cast<double>(peaks) * (end - a);
      a = end;
    }
  };

  double t = 0.0;
  double next_report = cfg.report_every > 0.0 ? cfg.report_every : std::numeric_limits<double>::infinity();
  long peaks = count_peaks(h);

  auto emit_reports_until = [&](double limit) {
    while (next_report <= limit) {
      if (progress) {
        ProgressRecord r{next_report, s.counters, 0.0, 0.0, 0.0};
        double integral = s.peak_time_integral + static_cast<double>(peaks) * (next_report - t);
        r.drift_diamond = static_cast<double>(s.counters.n_diamond) / next_report;
        r.drift_global = static_cast<double>(s.counters.n_global) / next_report;
        r.mean_peaks = integral / next_report;
        progress(r);
      }
      next_report += cfg.report_every;
    }
  };

  std::uint64_t events = 0;
  for (;;) {
    if (!by_time && events >= *cfg.max_events) break;
    const double wait = -std::log1p(-detail::uniform53(rng)) / static_cast<double>(n);
    const double t_next = t + wait;
    if (by_time && t_next > *cfg.t_max) {
      emit_reports_until(*cfg.t_max);
      integrate(t, *cfg.t_max, peaks);
      t = *cfg.t_max;
      break;
    }
    emit_reports_until(t_next);
    integrate(t, t_next, peaks);
    if (!by_time) {
      if (auto k = batch_index(static_cast<double>(events))) {
        bm.batches[*k].duration += t_next - t;
        bm.batches[*k].peak_integral += static_cast<double>(peaks) * (t_next - t);
      }
    }
    t = t_next;

    const std::size_t site = detail::uniform_site(rng, n);
    const MoveDeltas d = rpm::detail::apply_inplace(h, site);
    s.counters.record(d);
    ++events;
    if (!s.counters.balanced()) s.balance_held = false;
    if (d.move_class != MoveClass::Reflection) peaks = count_peaks(h);

    auto k = by_time ? batch_index(t) : batch_index(static_cast<double>(events - 1));
    if (k) {
      bm.batches[*k].diamond += d.delta_diamond;
      bm.batches[*k].global += d.delta_global;
    }
  }

  s.elapsed_time = t;
  s.batches = kBatches;
  if (t > 0.0) {
    const double dd = static_cast<double>(s.counters.n_diamond) / t;
    const double dg = static_cast<double>(s.counters.n_global) / t;
    const double mp = s.peak_time_integral / t;
    s.drift_diamond = bm.stderr_of(&detail::BatchMeans::Batch::diamond, dd);
    s.drift_global = bm.stderr_of(&detail::BatchMeans::Batch::global, dg);
    s.mean_peaks = bm.stderr_of(&detail::BatchMeans::Batch::peak_integral, mp);
  }
  return s;
}

/// Time-weighted average of the peak count, with its batch-means error.
inline std::optional<Estimate> mean_peaks_time_average(const SimConfig& cfg) { return simulate(cfg).mean_peaks; }

/// Independent replicas with seeds seed, seed+1, ...; results in replica order.
inline std::vector<TrajectorySummary> run_ensemble(const SimConfig& cfg, std::size_t n_replicas,
                                                   unsigned max_threads = std::thread::hardware_concurrency()) {
  cfg.validate();
  if (n_replicas < 1) throw UsageError("n_replicas must be >= 1");
  std::vector<TrajectorySummary> out(n_replicas);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(max_threads, n_replicas));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t k = w; k < n_replicas; k += workers) {
        SimConfig c = cfg;
        c.seed = cfg.seed + k;
        out[k] = simulate(c);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

/// Pools replica estimates: mean of per-replica values, error = sd / sqrt(n).
/// With a single replica the replica's own batch-means error is kept.
struct PooledEstimates {
  std::optional<Estimate> drift_diamond;
  std::optional<Estimate> drift_global;
  std::optional<Estimate> mean_peaks;
};

inline PooledEstimates pool(const std::vector<TrajectorySummary>& runs) {
  auto fold = [&](std::optional<Estimate> TrajectorySummary::*field) -> std::optional<Estimate> {
    std::vector<double> xs;
    for (const auto& r : runs)
      if ((r.*field).has_value()) xs.push_back((r.*field)->value);
    if (xs.empty()) return std::nullopt;
    if (xs.size() == 1) return runs.front().*field;
    return detail::BatchMeans::summarize(xs);
  };
  return {fold(&TrajectorySummary::drift_diamond), fold(&TrajectorySummary::drift_global),
          fold(&TrajectorySummary::mean_peaks)};
}

}  // namespace rpm::kmc
