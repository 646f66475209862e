#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rpm/error.hpp"
#include "rpm/pdp.hpp"

namespace rpm {

/// Enumerated configurations with an index lookup and, for every state and
/// site, the target index and current increments of the move.
class StateSpace {
 public:
  struct Move {
    std::size_t target = 0;
    MoveDeltas deltas;
  };

  explicit StateSpace(long length, long cap = kDefaultEnumerationCap)
      : length_(length), states_(enumerate_states(length, cap)) {
    for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k].vec(), k);
    moves_.resize(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) {
      moves_[k].reserve(static_cast<std::size_t>(length));
      for (std::size_t i = 0; i < static_cast<std::size_t>(length); ++i) {
        std::vector<int> t = states_[k].vec();
        MoveDeltas d = detail::apply_inplace(t, i);
        moves_[k].push_back({index_of(t), d});
      }
    }
  }

  long length() const { return length_; }
  std::size_t size() const { return states_.size(); }
  const std::vector<HeightProfile>& states() const { return states_; }
  const HeightProfile& state(std::size_t k) const { return states_[k]; }
  /// moves(k)[i] is the outcome of a tile arriving at site i of state k.
  const std::vector<Move>& moves(std::size_t k) const { return moves_[k]; }

  std::size_t index_of(const std::vector<int>& h) const {
    auto it = index_.find(h);
    if (it == index_.end()) throw std::logic_error("profile outside the enumerated state space");
    return it->second;
  }
  std::size_t index_of(const HeightProfile& h) const { return index_of(h.vec()); }

 private:
  long length_;
  std::vector<HeightProfile> states_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<std::vector<Move>> moves_;
};

}  // namespace rpm
