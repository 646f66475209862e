#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rpm/error.hpp"
#include "rpm/pdp.hpp"
#include "rpm/rational.hpp"
#include "rpm/state_space.hpp"

namespace rpm::exact {

inline constexpr long kDefaultExactCap = 12;

/// Sparse matrix with exact rational entries.
class SparseRationalMatrix {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  explicit SparseRationalMatrix(std::size_t dimension = 0) : dim_(dimension) {}

  std::size_t dimension() const { return dim_; }
  std::size_t nonzeros() const { return entries_.size(); }
  const std::map<Key, Rational>& entries() const { return entries_; }

  void add(std::size_t row, std::size_t col, const Rational& v) {
    if (row >= dim_ || col >= dim_) throw std::out_of_range("SparseRationalMatrix: index out of range");
    auto& e = entries_[{row, col}];
    e += v;
    if (e == 0) entries_.erase({row, col});
  }

  Rational at(std::size_t row, std::size_t col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? Rational(0) : it->second;
  }

  std::vector<Rational> column_sums() const {
    std::vector<Rational> s(dim_);
    for (const auto& [k, v] : entries_) s[k.second] += v;
    return s;
  }

  std::vector<Rational> row_sums() const {
    std::vector<Rational> s(dim_);
    for (const auto& [k, v] : entries_) s[k.first] += v;
    return s;
  }

  std::vector<Rational> multiply(const std::vector<Rational>& x) const {
    std::vector<Rational> y(dim_);
    for (const auto& [k, v] : entries_) y[k.first] += v * x[k.second];
    return y;
  }

 private:
  std::size_t dim_;
  std::map<Key, Rational> entries_;
};

inline void require_exact_cap(long length, long cap) {
  require_length(length);
  if (length > cap)
    throw ResourceError("exact elimination cap exceeded: L=" + std::to_string(length) + " > " +
                        std::to_string(cap));
}

/// Forward generator: entry (C, C') counts sites moving C' -> C; the diagonal
/// holds minus the number of non-reflecting sites. Reflections are omitted
/// (gain and loss cancel), so every column sums to zero.
inline SparseRationalMatrix build_generator(const StateSpace& space) {
  SparseRationalMatrix g(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) {
    for (const auto& m : space.moves(s)) {
      if (m.deltas.move_class == MoveClass::Reflection) continue;
      g.add(m.target, s, Rational(1));
      g.add(s, s, Rational(-1));
    }
  }
  return g;
}

inline SparseRationalMatrix build_generator(long length, long cap = kDefaultExactCap) {
  require_exact_cap(length, cap);
  return build_generator(StateSpace(length));
}

struct KernelResult {
  std::vector<Rational> vector;  // kernel vector scaled so the free coordinate is 1
  std::size_t rank = 0;
  std::size_t pivots_with_fill = 0;
};

/// Exact right kernel of a square matrix by sparse fraction-free elimination.
///
/// Rows are kept as primitive integer vectors: a row update is
/// r_j <- p * r_j - a_jc * r_piv followed by division by the content, which
/// keeps every intermediate an exact integer. Pivot columns are chosen with
/// the fewest active entries (ties to the lowest index), pivot rows with the
/// fewest nonzeros. Throws VerificationError unless the kernel is
/// one-dimensional.
inline KernelResult one_dimensional_kernel(const SparseRationalMatrix& m) {
  const std::size_t n = m.dimension();
  using Row = std::vector<std::pair<std::size_t, BigInt>>;
  std::vector<Row> rows(n);
  {
    std::vector<std::vector<std::pair<std::size_t, Rational>>> tmp(n);
    for (const auto& [k, v] : m.entries()) tmp[k.first].emplace_back(k.second, v);
    for (std::size_t r = 0; r < n; ++r) {
      BigInt lcm = 1;
      for (auto& [c, v] : tmp[r]) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
      for (auto& [c, v] : tmp[r]) rows[r].emplace_back(c, BigInt(v.get_num() * (lcm / v.get_den())));
      std::sort(rows[r].begin(), rows[r].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }
  }
  std::vector<std::set<std::size_t>> col_rows(n);
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& [c, v] : rows[r]) col_rows[c].insert(r);

  auto make_primitive = [](Row& row) {
    BigInt g = 0;
    for (const auto& [c, v] : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g > 1)
      for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  };

  auto coeff = [](const Row& row, std::size_t col) -> const BigInt* {
    auto it = std::lower_bound(row.begin(), row.end(), col, [](const auto& e, std::size_t c) { return e.first < c; });
    return (it != row.end() && it->first == col) ? &it->second : nullptr;
  };

  std::vector<bool> col_done(n, false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col) in elimination order
  KernelResult result;

  for (;;) {
    std::size_t best_col = n, best_count = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (col_done[c] || col_rows[c].empty()) continue;
      if (best_col == n || col_rows[c].size() < best_count) {
        best_col = c;
        best_count = col_rows[c].size();
      }
    }
    if (best_col == n) break;
    const std::size_t c = best_col;
    std::size_t pr = *col_rows[c].begin();
    for (std::size_t r : col_rows[c])
      if (rows[r].size() < rows[pr].size()) pr = r;

    const Row& prow = rows[pr];
    const BigInt pval = *coeff(prow, c);
    for (const auto& [cc, v] : prow) col_rows[cc].erase(pr);
    std::vector<std::size_t> targets(col_rows[c].begin(), col_rows[c].end());
    if (!targets.empty()) ++result.pivots_with_fill;

    for (std::size_t j : targets) {
      Row& row = rows[j];
      const BigInt f = *coeff(row, c);
      for (const auto& [cc, v] : row) col_rows[cc].erase(j);
      Row merged;
      merged.reserve(row.size() + prow.size());
      std::size_t a = 0, b = 0;
      while (a < row.size() || b < prow.size()) {
        if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
          merged.emplace_back(row[a].first, BigInt(pval * row[a].second));
          ++a;
        } else if (a == row.size() || prow[b].first < row[a].first) {
          merged.emplace_back(prow[b].first, BigInt(-f * prow[b].second));
          ++b;
        } else {
          BigInt v = pval * row[a].second - f * prow[b].second;
          if (v != 0) merged.emplace_back(row[a].first, std::move(v));
          ++a;
          ++b;
        }
      }
      make_primitive(merged);
      row = std::move(merged);
      for (const auto& [cc, v] : row) col_rows[cc].insert(j);
    }
    col_done[c] = true;
    pivots.emplace_back(pr, c);
  }

  result.rank = pivots.size();
  if (result.rank + 1 != n)
    throw VerificationError("kernel dimension is " + std::to_string(n - result.rank) + ", expected 1");

  std::size_t free_col = n;
  for (std::size_t c = 0; c < n; ++c)
    if (!col_done[c]) free_col = c;

  std::vector<Rational> x(n);
  x[free_col] = 1;
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [r, c] = *it;
    Rational acc = 0;
    BigInt diag = 0;
    for (const auto& [cc, v] : rows[r]) {
      if (cc == c)
        diag = v;
      else
        acc += Rational(v) * x[cc];
    }
    x[c] = -acc / Rational(diag);
  }
  result.vector = std::move(x);
  return result;
}

struct StationaryVector {
  std::vector<HeightProfile> states;
  std::vector<Rational> probabilities;
  std::vector<BigInt> integer_form;  // coprime positive integers proportional to pi
  BigInt integer_sum;
  BigInt integer_min;
};

inline StationaryVector stationary_distribution(const StateSpace& space) {
  const SparseRationalMatrix g = build_generator(space);
  KernelResult k = one_dimensional_kernel(g);

  StationaryVector sv;
  sv.states = space.states();
  Rational total = 0;
  for (const auto& v : k.vector) total += v;
  sv.probabilities.reserve(k.vector.size());
  for (const auto& v : k.vector) sv.probabilities.push_back(v / total);

  BigInt lcm = 1;
  for (const auto& p : sv.probabilities) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
  BigInt g_all = 0;
  for (const auto& p : sv.probabilities) {
    BigInt v = p.get_num() * (lcm / p.get_den());
    if (v <= 0) throw VerificationError("stationary vector has a non-positive component");
    mpz_gcd(g_all.get_mpz_t(), g_all.get_mpz_t(), v.get_mpz_t());
    sv.integer_form.push_back(std::move(v));
  }
  sv.integer_sum = 0;
  for (auto& v : sv.integer_form) {
    v /= g_all;
    sv.integer_sum += v;
  }
  sv.integer_min = *std::min_element(sv.integer_form.begin(), sv.integer_form.end());

  // Exact residual check: G pi = 0.
  for (const auto& r : g.multiply(sv.probabilities))
    if (r != 0) throw VerificationError("stationary residual is nonzero");
  return sv;
}

inline StationaryVector stationary_distribution(long length, long cap = kDefaultExactCap) {
  require_exact_cap(length, cap);
  return stationary_distribution(StateSpace(length));
}

inline Rational expected_peaks(const StationaryVector& sv) {
  Rational e = 0;
  for (std::size_t k = 0; k < sv.states.size(); ++k) e += sv.probabilities[k] * count_peaks(sv.states[k]);
  return e;
}

inline Rational prob_omega_global(const StationaryVector& sv) {
  Rational p = 0;
  for (std::size_t k = 0; k < sv.states.size(); ++k)
    if (in_omega_global(sv.states[k])) p += sv.probabilities[k];
  return p;
}

struct Drifts {
  Rational diamond;  // J^diamond = sum_C pi(C) sum_i dN^diamond(C, i)
  Rational global;   // J^global
  bool tile_balance = false;  // J^diamond + E[n^peak] == L
};

inline Drifts exact_drifts(const StateSpace& space, const StationaryVector& sv) {
  Drifts d;
  for (std::size_t k = 0; k < space.size(); ++k) {
    long sd = 0, sg = 0;
    for (const auto& m : space.moves(k)) {
      sd += m.deltas.delta_diamond;
      sg += m.deltas.delta_global;
    }
    d.diamond += sv.probabilities[k] * sd;
    d.global += sv.probabilities[k] * sg;
  }
  d.tile_balance = (d.diamond + expected_peaks(sv) == Rational(space.length()));
  return d;
}

// Closed forms the exact values are compared against.
inline Rational peaks_formula(long L) { return make_rational(3 * L * L * L, 8 * (L * L - 1)); }
inline Rational omega_formula(long L) { return make_rational(3 * L, 4 * (L * L - 1)); }
inline Rational diamond_drift_formula(long L) { return make_rational(L * (5 * L * L - 8), 8 * (L * L - 1)); }
inline Rational global_drift_formula(long L) { return omega_formula(L); }

/// Number of half-turn symmetric alternating sign matrices of order 2n:
/// prod_{i<n} (3i)! (3i+2)! / ((n+i)!)^2.
inline BigInt half_turn_symmetric_asm_count(unsigned n) {
  Rational r = 1;
  for (unsigned i = 0; i < n; ++i) {
    Rational f = factorial(n + i);
    r *= factorial(3 * i) * factorial(3 * i + 2) / (f * f);
  }
  if (r.get_den() != 1) throw std::logic_error("A_HT product is not an integer");
  return r.get_num();
}

/// Everything the `stationary` subcommand reports for one L.
struct StationaryReport {
  long length = 0;
  StationaryVector sv;
  Rational peaks;
  Rational omega;
  Drifts drifts;
  BigInt asm_count;
  bool peaks_ok = false;
  bool omega_ok = false;
  bool diamond_ok = false;
  bool global_ok = false;
  bool smallest_is_one = false;
  bool sum_matches_asm = false;
  bool doubled_sum_matches_asm = false;
  bool passed() const { return peaks_ok && omega_ok && diamond_ok && global_ok && drifts.tile_balance; }
};

inline StationaryReport stationary_report(long length, long cap = kDefaultExactCap) {
  require_exact_cap(length, cap);
  StateSpace space(length);
  StationaryReport r;
  r.length = length;
  r.sv = stationary_distribution(space);
  r.peaks = expected_peaks(r.sv);
  r.omega = prob_omega_global(r.sv);
  r.drifts = exact_drifts(space, r.sv);
  r.asm_count = half_turn_symmetric_asm_count(static_cast<unsigned>(length / 2));
  r.peaks_ok = r.peaks == peaks_formula(length);
  r.omega_ok = r.omega == omega_formula(length);
  r.diamond_ok = r.drifts.diamond == diamond_drift_formula(length);
  r.global_ok = r.drifts.global == global_drift_formula(length);
  r.smallest_is_one = r.sv.integer_min == 1;
  r.sum_matches_asm = r.sv.integer_sum == r.asm_count;
  r.doubled_sum_matches_asm = 2 * r.sv.integer_sum == r.asm_count;
  return r;
}

}  // namespace rpm::exact
