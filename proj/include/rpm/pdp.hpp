#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpm/error.hpp"

namespace rpm {

// Configuration mechanics of the Raise and Peel model on a ring of L sites.
//
// Chart: heights[i] lives on integer position i (cyclic), consecutive heights
// differ by exactly one, heights[i] has the parity of i (anchored by the
// substrate 0,1,0,1,...), and the minimum height is at most 1. A tile
// arriving at site i either reflects (peak), adsorbs (valley), triggers a
// local avalanche (slope) or completes two full layers and triggers a global
// avalanche.

/// Periodic Dyck path; construction validates every invariant.
class HeightProfile {
 public:
  explicit HeightProfile(std::vector<int> heights) : h_(std::move(heights)) {
    if (auto why = violation(h_); !why.empty()) throw UsageError("invalid height profile: " + why);
  }

  /// Empty string when valid, otherwise the first violated invariant.
  static std::string violation(std::span<const int> h) {
    const auto n = h.size();
    if (n < 2 || n % 2 != 0) return "length must be even and >= 2";
    int lo = h[0];
    for (std::size_t i = 0; i < n; ++i) {
      if (h[i] < 0) return "negative height at " + std::to_string(i);
      if ((h[i] - static_cast<int>(i)) % 2 != 0) return "parity broken at " + std::to_string(i);
      int step = h[(i + 1) % n] - h[i];
      if (step != 1 && step != -1) return "non-unit step at " + std::to_string(i);
      lo = std::min(lo, h[i]);
    }
    if (lo > 1) return "minimum height exceeds 1";
    return {};
  }

  std::size_t size() const { return h_.size(); }
  int operator[](std::size_t i) const { return h_[i]; }
  /// Cyclic access.
  int at(long i) const {
    const long n = static_cast<long>(h_.size());
    return h_[static_cast<std::size_t>(((i % n) + n) % n)];
  }
  std::span<const int> heights() const { return h_; }
  const std::vector<int>& vec() const { return h_; }

  auto operator<=>(const HeightProfile&) const = default;
  bool operator==(const HeightProfile&) const = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < h_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(h_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> h_;
};

enum class MoveClass { Reflection, Adsorption, LocalAvalanche, GlobalAvalanche };

inline std::string_view to_string(MoveClass c) {
  switch (c) {
    case MoveClass::Reflection: return "Reflection";
    case MoveClass::Adsorption: return "Adsorption";
    case MoveClass::LocalAvalanche: return "LocalAvalanche";
    case MoveClass::GlobalAvalanche: return "GlobalAvalanche";
  }
  return "?";
}

/// Current increments produced by one tile arrival.
struct MoveDeltas {
  MoveClass move_class = MoveClass::Reflection;
  int delta_diamond = 0;  // tiles removed by an avalanche, arrived tile included
  int delta_global = 0;
  int delta_peak = 0;
  int delta_tiles = 0;  // change of the tile count n_t
};

struct TransitionRecord {
  std::size_t site = 0;
  MoveClass move_class = MoveClass::Reflection;
  HeightProfile target;
  int delta_diamond = 0;
  int delta_global = 0;
  int delta_peak = 0;
  int delta_tiles = 0;
};

/// Cumulative trajectory counters N, N^peak, N^diamond, N^global and n_t.
struct EventCounters {
  std::uint64_t n_total = 0;
  std::uint64_t n_peak = 0;
  std::uint64_t n_diamond = 0;
  std::uint64_t n_global = 0;
  std::uint64_t n_tiles = 0;

  void record(const MoveDeltas& d) {
    ++n_total;
    n_peak += static_cast<std::uint64_t>(d.delta_peak);
    n_diamond += static_cast<std::uint64_t>(d.delta_diamond);
    n_global += static_cast<std::uint64_t>(d.delta_global);
    n_tiles = static_cast<std::uint64_t>(static_cast<std::int64_t>(n_tiles) + d.delta_tiles);
  }

  bool balanced() const { return n_total == n_peak + n_diamond + n_tiles; }
  bool operator==(const EventCounters&) const = default;
};

inline void require_length(long length) {
  if (length < 2 || length % 2 != 0)
    throw UsageError("system length must be even and >= 2 (got " + std::to_string(length) + ")");
}

inline HeightProfile substrate(long length) {
  require_length(length);
  std::vector<int> h(static_cast<std::size_t>(length));
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = static_cast<int>(i % 2);
  return HeightProfile(std::move(h));
}

inline long tile_count(std::span<const int> h) {
  long twice = 0;
  for (std::size_t i = 0; i < h.size(); ++i) twice += h[i] - static_cast<int>(i % 2);
  return twice / 2;
}
inline long tile_count(const HeightProfile& h) { return tile_count(h.heights()); }

namespace detail {

inline std::size_t left_of(std::size_t i, std::size_t n) { return (i + n - 1) % n; }
inline std::size_t right_of(std::size_t i, std::size_t n) { return (i + 1) % n; }

inline MoveClass classify(std::span<const int> h, std::size_t i) {
  const std::size_t n = h.size();
  const int hi = h[i];
  const int l = h[left_of(i, n)];
  const int r = h[right_of(i, n)];
  if (l < hi && r < hi) return MoveClass::Reflection;
  if (l > hi && r > hi) {
    // Valley: the fill completes two layers iff every other site is already >= 2.
    for (std::size_t k = 0; k < n; ++k)
      if (k != i && h[k] < 2) return MoveClass::Adsorption;
    return MoveClass::GlobalAvalanche;
  }
  return MoveClass::LocalAvalanche;
}

/// Applies the move in place and returns the increments. No allocation.
inline MoveDeltas apply_inplace(std::span<int> h, std::size_t i) {
  const std::size_t n = h.size();
  MoveDeltas d;
  d.move_class = classify(h, i);
  switch (d.move_class) {
    case MoveClass::Reflection:
      d.delta_peak = 1;
      return d;
    case MoveClass::Adsorption:
      h[i] += 2;
      d.delta_tiles = 1;
      return d;
    case MoveClass::GlobalAvalanche:
      h[i] += 2;
      for (auto& v : h) v -= 2;
      d.delta_global = 1;
      d.delta_diamond = static_cast<int>(n);
      d.delta_tiles = 1 - static_cast<int>(n);
      return d;
    case MoveClass::LocalAvalanche: break;
  }
  // Slope: peel one layer from the arrival level up the mountain to the
  // opposite slope at the same level. Ascending to the right scans right.
  const int hi = h[i];
  const bool ascending_right = h[right_of(i, n)] > hi;
  int removed = 0;
  std::size_t k = ascending_right ? right_of(i, n) : left_of(i, n);
  while (h[k] != hi) {
    h[k] -= 2;
    ++removed;
    k = ascending_right ? right_of(k, n) : left_of(k, n);
  }
  // Each lowered site removes one tile; plus the arrived tile.
  d.delta_diamond = removed + 1;
  d.delta_tiles = -removed;
  return d;
}

}  // namespace detail

inline void require_site(const HeightProfile& h, std::size_t i) {
  if (i >= h.size())
    throw UsageError("site " + std::to_string(i) + " out of range for L=" + std::to_string(h.size()));
}

inline MoveClass classify_move(const HeightProfile& h, std::size_t i) {
  require_site(h, i);
  return detail::classify(h.heights(), i);
}

inline TransitionRecord apply_move(const HeightProfile& h, std::size_t i) {
  require_site(h, i);
  std::vector<int> t = h.vec();
  MoveDeltas d = detail::apply_inplace(t, i);
  if (auto why = HeightProfile::violation(t); !why.empty())
    throw std::logic_error("apply_move produced an invalid profile from " + h.to_string() + ": " + why);
  return TransitionRecord{i, d.move_class, HeightProfile(std::move(t)), d.delta_diamond, d.delta_global,
                          d.delta_peak, d.delta_tiles};
}

inline long count_peaks(std::span<const int> h) {
  const std::size_t n = h.size();
  long c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (h[detail::left_of(i, n)] < h[i] && h[detail::right_of(i, n)] < h[i]) ++c;
  return c;
}
inline long count_peaks(const HeightProfile& h) { return count_peaks(h.heights()); }

inline long count_valleys(const HeightProfile& h) {
  const auto s = h.heights();
  const std::size_t n = s.size();
  long c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (s[detail::left_of(i, n)] > s[i] && s[detail::right_of(i, n)] > s[i]) ++c;
  return c;
}

/// No valley at level 0 and exactly one valley at level 1.
inline bool in_omega_global(std::span<const int> h) {
  const std::size_t n = h.size();
  int level1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[detail::left_of(i, n)] > h[i] && h[detail::right_of(i, n)] > h[i])) continue;
    if (h[i] == 0) return false;
    if (h[i] == 1) ++level1;
  }
  return level1 == 1;
}
inline bool in_omega_global(const HeightProfile& h) { return in_omega_global(h.heights()); }

inline constexpr long kDefaultEnumerationCap = 16;

/// All valid profiles of length L in lexicographic order; there are C(L, L/2).
inline std::vector<HeightProfile> enumerate_states(long length, long cap = kDefaultEnumerationCap) {
  require_length(length);
  if (length > cap)
    throw ResourceError("enumeration cap exceeded: L=" + std::to_string(length) + " > " + std::to_string(cap));
  const auto n = static_cast<std::size_t>(length);
  std::vector<HeightProfile> out;
  std::vector<int> h(n);
  // Depth-first with steps tried downward first yields lexicographic order.
  std::function<void(std::size_t, int)> extend = [&](std::size_t pos, int lo) {
    if (pos == n) {
      if (std::abs(h[n - 1] - h[0]) == 1 && lo <= 1) out.emplace_back(h);
      return;
    }
    for (int step : {-1, 1}) {
      int v = h[pos - 1] + step;
      if (v < 0) continue;
      // Must be able to return to h[0] in the remaining steps.
      if (std::abs(v - h[0]) > static_cast<int>(n - pos)) continue;
      h[pos] = v;
      extend(pos + 1, std::min(lo, v));
    }
  };
  for (int h0 = 0; h0 <= static_cast<int>(n) / 2 + 1; h0 += 2) {
    h[0] = h0;
    extend(1, h0);
  }
  return out;
}

}  // namespace rpm
