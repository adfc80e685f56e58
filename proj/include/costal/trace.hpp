#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "costal/formula.hpp"

namespace costal {

using CostVec = std::vector<std::uint64_t>;
using Letter = std::set<std::string>;

inline constexpr std::uint64_t kInfiniteCost = std::numeric_limits<std::uint64_t>::max();
/// Largest variable value the oracle accepts.
inline constexpr std::uint64_t kOracleAlphaCap = std::uint64_t{1} << 20;

/// One trace position: its letter and the cost of the step to the next position.
struct Step {
  Letter letter;
  CostVec cost;
};

/// Ultimately periodic cost-trace: prefix followed by the cycle repeated forever.
struct CostTrace {
  int dimension = 1;
  std::vector<Step> prefix;
  std::vector<Step> cycle;

  std::size_t lasso_length() const { return prefix.size() + cycle.size(); }
  /// Position folded onto the lasso, in [0, lasso_length()).
  std::size_t fold(std::size_t n) const {
    if (n < prefix.size()) return n;
    return prefix.size() + (n - prefix.size()) % cycle.size();
  }
  const Step& at(std::size_t n) const {
    std::size_t f = fold(n);
    return f < prefix.size() ? prefix[f] : cycle[f - prefix.size()];
  }
  std::size_t successor(std::size_t folded) const {
    return folded + 1 < lasso_length() ? folded + 1 : prefix.size();
  }
};

struct TraceViolation {
  std::size_t position;  // position whose letter is inconsistent
  int coord;
  std::string message;
};

/// Checks kappa-consistency at every position, including the cycle wrap.
std::optional<TraceViolation> validate_trace(const CostTrace& w);

/// Sum of step costs for steps from..to-1.
CostVec infix_cost(const CostTrace& w, std::size_t from, std::size_t to);

/// Total cost per coordinate; kInfiniteCost where the cycle cost is positive.
CostVec trace_cost(const CostTrace& w);

class UnboundVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact truth of phi at position n under alpha.
bool evaluate(const CostTrace& w, std::size_t n, const Valuation& alpha, const Formula& phi);

/// Truth of phi at every folded lasso position.
std::vector<bool> evaluate_all(const CostTrace& w, const Valuation& alpha, const Formula& phi);

/// `trace d=<nat>; prefix: <step>*; cycle: <step>+;`
CostTrace parse_trace(const std::string& text);
std::string format_trace(const CostTrace& w);

}  // namespace costal
