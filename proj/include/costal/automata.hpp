#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "costal/formula.hpp"
#include "costal/trace.hpp"

namespace costal {

using LetterMask = std::uint64_t;

/// Ordered proposition universe; letters are bitmasks over it (at most 64 propositions).
class Universe {
 public:
  Universe() = default;
  explicit Universe(const std::set<std::string>& props);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& p) const;
  bool contains(const std::string& p) const { return index(p) >= 0; }
  /// Propositions outside the universe are ignored.
  LetterMask mask(const Letter& l) const;
  Letter letter(LetterMask m) const;
  LetterMask all_letters_bound() const { return size() == 64 ? ~LetterMask{0} : (LetterMask{1} << size()) - 1; }

  friend bool operator==(const Universe& a, const Universe& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
};

/// Conjunction of literals over the universe.
struct Guard {
  LetterMask pos = 0;
  LetterMask neg = 0;
  bool matches(LetterMask l) const { return (l & pos) == pos && (l & neg) == 0; }
  friend bool operator==(const Guard&, const Guard&) = default;
  friend auto operator<=>(const Guard&, const Guard&) = default;
};

struct NbaEdge {
  Guard guard;
  int target;
  friend bool operator==(const NbaEdge&, const NbaEdge&) = default;
  friend auto operator<=>(const NbaEdge&, const NbaEdge&) = default;
};

/// State-based Buchi automaton with guarded edges. The observable transition
/// relation is per letter: successors(q, letter).
struct BuchiAutomaton {
  Universe universe;
  int initial = 0;
  std::vector<std::vector<NbaEdge>> edges;
  std::vector<bool> accepting;

  std::size_t size() const { return edges.size(); }
  std::vector<int> successors(int q, LetterMask letter) const;
};

class StateLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tableau translation of a variable-free NNF formula. Throws std::invalid_argument
/// if the formula has parameterized operators or propositions outside the universe.
BuchiAutomaton ltl_to_nba(const Formula& f, const Universe& u, std::size_t max_states = 1000000);

/// Automaton for the intersection of two languages over the same universe, trimmed
/// and reduced by bisimulation.
BuchiAutomaton intersect_nba(const BuchiAutomaton& a, const BuchiAutomaton& b, std::size_t max_states = 1000000);

/// Translates each top-level conjunct of f separately over u and intersects the results.
BuchiAutomaton conjunction_to_nba(const Formula& f, const Universe& u, std::size_t max_states = 1000000);

bool nba_accepts_lasso(const BuchiAutomaton& a, const CostTrace& w);
bool nba_is_empty(const BuchiAutomaton& a);

/// Hanoi Omega-Automata text.
std::string to_hoa(const BuchiAutomaton& a, const std::string& name = "");

}  // namespace costal
