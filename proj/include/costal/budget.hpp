#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "costal/formula.hpp"
#include "costal/system.hpp"
#include "costal/trace.hpp"

namespace costal {

struct BudgetOptions {
  std::size_t max_states = 1000000;
  std::uint64_t max_alpha = std::uint64_t{1} << 16;
};

/// Tableau for a formula at a fixed valuation. A state is the set of obligations
/// for the current position; parameterized obligations carry the cost budget still
/// available. The automaton reads a letter together with the cost of the step
/// leaving that position.
class BudgetTableau {
 public:
  struct Obligation {
    int node;
    std::uint64_t budget;
    friend bool operator==(const Obligation&, const Obligation&) = default;
    friend auto operator<=>(const Obligation&, const Obligation&) = default;
  };
  struct Pending {
    int node;
    std::uint64_t budget;
    bool continuation;  // budget is reduced by the step cost
    friend bool operator==(const Pending&, const Pending&) = default;
    friend auto operator<=>(const Pending&, const Pending&) = default;
  };
  struct Cover {
    std::vector<Pending> next;
    std::uint64_t postponed = 0;  // eventualities left open
    friend bool operator==(const Cover&, const Cover&) = default;
    friend auto operator<=>(const Cover&, const Cover&) = default;
  };

  BudgetTableau(const Formula& f, const Valuation& alpha, int dimension, const BudgetOptions& opt = {});

  int initial() const { return 0; }
  std::size_t size() const { return states_.size(); }
  int eventualities() const { return static_cast<int>(eventuality_nodes_.size()); }
  std::uint64_t all_marks() const;

  std::uint64_t letter_mask(const Letter& l) const;
  const std::vector<Cover>& expand(int state, std::uint64_t letter);
  /// Successor state after taking a step of cost c, or nullopt if the cover cannot
  /// afford it.
  std::optional<int> advance(const Cover& cover, const CostVec& c);

  std::string describe(int state) const;

 private:
  struct VecHash {
    std::size_t operator()(const std::vector<Obligation>& v) const;
  };
  struct Node {
    Op op;
    int atom = -1;
    int coord = 0;
    std::uint64_t bound = 0;
    int mark = -1;
    std::vector<int> kids;
    std::string text;
  };

  int intern(std::vector<Obligation> o);
  std::uint64_t fresh_budget(int node) const;
  void expand_rec(std::vector<Obligation> todo, std::vector<Obligation> done, Cover cur,
                  std::uint64_t letter, std::vector<Cover>& out);

  std::vector<Node> nodes_;
  std::map<std::string, int> atom_index_;
  std::vector<int> eventuality_nodes_;
  BudgetOptions opt_;
  std::vector<std::vector<Obligation>> states_;
  std::unordered_map<std::vector<Obligation>, int, VecHash> ids_;
  std::map<std::pair<int, std::uint64_t>, std::vector<Cover>> expand_cache_;
};

struct FixedCheckResult {
  bool holds = true;
  /// A violating path of the system when !holds.
  std::vector<int> stem, loop;
  std::size_t product_states = 0;
};

/// Does every path of the system satisfy phi at alpha? Decided on the product of the
/// system with the budget tableau of negate(phi).
FixedCheckResult fixed_valuation_check(const TransitionSystem& s, const Formula& phi, const Valuation& alpha,
                                       const BudgetOptions& opt = {});

/// State-based Buchi automaton obtained from the budget tableau over an explicit
/// symbol list of (letter, step cost) pairs. States are built on demand; size()
/// is the state cap, explored() the number built so far.
class BudgetBuchi {
 public:
  struct Symbol {
    Letter letter;
    CostVec cost;
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
  };

  BudgetBuchi(const Formula& f, const Valuation& alpha, int dimension, std::vector<Symbol> symbols,
              const BudgetOptions& opt = {});

  std::size_t size() const { return opt_.max_states; }
  std::size_t explored() const { return states_.size(); }
  int initial() const { return 0; }
  bool accepting(int q) const { return states_[q].second == m_; }
  const std::vector<int>& successors(int q, int sym) const;
  const std::vector<Symbol>& symbols() const { return symbols_; }

 private:
  int state(int q, int j) const;

  std::vector<Symbol> symbols_;
  BudgetOptions opt_;
  mutable BudgetTableau tableau_;
  int m_ = 0;
  std::uint64_t all_ = 0;
  std::vector<std::uint64_t> letters_;
  mutable std::vector<std::pair<int, int>> states_;  // (tableau state, counter)
  mutable std::map<std::pair<int, int>, int> index_;
  mutable std::deque<std::vector<std::optional<std::vector<int>>>> succ_;
};

struct FixedGameResult {
  bool player0_wins = false;
  /// Winning strategy for Player 0 when she wins.
  std::optional<Strategy> strategy;
  std::size_t product_states = 0;
};

/// Parity game of the arena with the determinized budget automaton of phi.
FixedGameResult fixed_valuation_game(const Arena& a, const Formula& phi, const Valuation& alpha,
                                     const BudgetOptions& opt = {});

/// Same arena with the players exchanged.
Arena swap_players(const Arena& a);

}  // namespace costal
