#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>

#include "pepsblend/errors.hpp"

namespace pepsblend {

// Majority vote over exact values with a sound early stop: the vote closes
// once the leader beats every rival by more than the repeats still
// outstanding, which can neither change the winner nor mask a tie.
template <typename V>
class MajorityVote {
 public:
  explicit MajorityVote(std::size_t total) : remaining_(total) {}

  void add(const V& v) {
    consume();
    ++tally_[v];
  }
  void add_failure() { consume(); }

  bool settled() const {
    if (tally_.empty()) return false;
    std::size_t best = 0, second = 0;
    for (const auto& [v, c] : tally_) {
      if (c > best) {
        second = best;
        best = c;
      } else if (c > second) {
        second = c;
      }
    }
    return best > second + remaining_;
  }

  // Winner plus tie flag; throws when no repeat produced a candidate.
  std::pair<V, bool> winner() const {
    if (tally_.empty()) throw AllRepeatsFailedDecoding("no repeat produced a candidate value");
    std::size_t best = 0;
    for (const auto& [v, c] : tally_) best = std::max(best, c);
    std::optional<V> win;
    bool tie = false;
    for (const auto& [v, c] : tally_) {
      if (c == best) {
        if (win) tie = true;
        else win = v;
      }
    }
    return {*win, tie};
  }

 private:
  void consume() {
    if (remaining_ > 0) --remaining_;
  }
  std::map<V, std::size_t> tally_;
  std::size_t remaining_;
};

}  // namespace pepsblend
