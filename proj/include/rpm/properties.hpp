#pragma once

#include <bit>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "rpm/pdp.hpp"
#include "rpm/report.hpp"
#include "rpm/state_space.hpp"

namespace rpm {

/// Profiles from every +-1 step pattern that closes, every even starting
/// height, kept when nonnegative with minimum <= 1. Independent of enumerate_states.
inline std::set<std::vector<int>> brute_force_states(long length) {
  require_length(length);
  const auto n = static_cast<std::size_t>(length);
  std::set<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != static_cast<int>(n / 2)) continue;
    for (int h0 = 0; h0 <= static_cast<int>(n); h0 += 2) {
      std::vector<int> h(n);
      h[0] = h0;
      for (std::size_t i = 1; i < n; ++i) h[i] = h[i - 1] + (((mask >> (i - 1)) & 1u) ? 1 : -1);
      if (HeightProfile::violation(h).empty()) out.insert(h);
    }
  }
  return out;
}

/// Exhaustive structural checks over every profile and site of length L.
inline Report verify_pdp_properties(long length) {
  const StateSpace space(length);
  const std::string tag = "L=" + std::to_string(length) + " ";
  Report r;

  const auto brute = brute_force_states(length);
  std::set<std::vector<int>> listed;
  for (const auto& s : space.states()) listed.insert(s.vec());
  r.check(tag + "enumeration matches brute force", brute == listed && listed.size() == space.size(),
          std::to_string(space.size()) + " vs " + std::to_string(brute.size()));

  bool closure = true, balance = true, deltas = true, trigger = true, peaks_valleys = true;
  std::string first;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && first.empty()) first = what;
    flag = false;
  };
  for (std::size_t k = 0; k < space.size(); ++k) {
    const HeightProfile& h = space.state(k);
    if (count_peaks(h) != count_valleys(h)) fail(peaks_valleys, "peaks != valleys at " + h.to_string());
    const bool omega = in_omega_global(h);
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::vector<int> t = h.vec();
      const MoveDeltas d = detail::apply_inplace(t, i);
      const std::string where = h.to_string() + " site " + std::to_string(i);
      if (!HeightProfile::violation(t).empty()) fail(closure, "closure " + where);
      if (d.delta_peak + d.delta_diamond + d.delta_tiles != 1) fail(balance, "balance " + where);
      switch (d.move_class) {
        case MoveClass::Reflection:
        case MoveClass::Adsorption:
          if (d.delta_diamond != 0) fail(deltas, "diamond increment " + where);
          break;
        case MoveClass::LocalAvalanche:
          if (d.delta_diamond < 2) fail(deltas, "diamond increment " + where);
          break;
        case MoveClass::GlobalAvalanche:
          if (d.delta_diamond != length || d.delta_global != 1) fail(deltas, "global increments " + where);
          break;
      }
      const bool level1_valley = h[i] == 1 && h.at(static_cast<long>(i) - 1) == 2 && h.at(static_cast<long>(i) + 1) == 2;
      if ((d.move_class == MoveClass::GlobalAvalanche) != (omega && level1_valley)) fail(trigger, "trigger " + where);
    }
  }
  r.check(tag + "closure", closure);
  r.check(tag + "single-move balance", balance);
  r.check(tag + "increment ranges", deltas);
  r.check(tag + "global trigger equivalence", trigger);
  r.check(tag + "peaks = valleys", peaks_valleys);
  if (!first.empty()) r.value(tag + "first failure", first);

  // Strong connectivity: everything reachable from state 0 forward and backward.
  auto reach = [&](bool forward) {
    std::vector<std::vector<std::size_t>> adj(space.size());
    for (std::size_t k = 0; k < space.size(); ++k)
      for (const auto& m : space.moves(k)) {
        if (forward) adj[k].push_back(m.target);
        else adj[m.target].push_back(k);
      }
    std::vector<bool> seen(space.size(), false);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!todo.empty()) {
      const std::size_t v = todo.front();
      todo.pop();
      for (std::size_t w : adj[v])
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          todo.push(w);
        }
    }
    return count;
  };
  const std::size_t fwd = reach(true), bwd = reach(false);
  r.check(tag + "irreducible", fwd == space.size() && bwd == space.size(),
          std::to_string(fwd) + "/" + std::to_string(bwd) + " of " + std::to_string(space.size()));
  return r;
}

}  // namespace rpm
