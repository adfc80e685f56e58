#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "costal/budget.hpp"
#include "costal/formula.hpp"
#include "costal/system.hpp"

namespace costal {

/// minmin, minmax (eventually-variables) and maxmin, maxmax (always-variables).
struct Objective {
  bool maximize = false;
  bool aggregate_max = false;
};
Objective parse_objective(const std::string& text);
std::string to_string(Objective o);

enum class OptStatus { value, infeasible, universal, unbounded, unknown };
std::string to_string(OptStatus s);

struct OptResult {
  OptStatus status = OptStatus::infeasible;
  std::uint64_t value = 0;
  /// An optimal valuation when status is value.
  Valuation valuation;
  bool no_variables = false;
  /// The search window was cut at the configured cap.
  bool truncated = false;
  std::uint64_t ceiling = 0;
  std::optional<Strategy> strategy;
  std::size_t decisions = 0;
};

enum class SearchDirection { least, greatest };

/// Least (or greatest) v in [lo, hi] with decide(v), for decide monotone in the
/// matching direction. Throws std::logic_error if the endpoints contradict monotonicity.
std::optional<std::uint64_t> binary_search(const std::function<bool(std::uint64_t)>& decide, std::uint64_t lo,
                                           std::uint64_t hi, SearchDirection dir = SearchDirection::least,
                                           std::size_t* calls = nullptr);

/// Same result as binary_search, probing lo, lo + 1, lo + 3, ... before bisecting,
/// so small answers never query values near hi.
std::optional<std::uint64_t> galloping_search(const std::function<bool(std::uint64_t)>& decide, std::uint64_t lo,
                                              std::uint64_t hi, SearchDirection dir = SearchDirection::least,
                                              std::size_t* calls = nullptr);

struct OptOptions {
  BudgetOptions budget;
  std::size_t max_states = 1000000;
};

/// Optimum over valuations under which every path of the system satisfies phi.
OptResult mc_optimize(const TransitionSystem& s, const Formula& phi, Objective obj, const OptOptions& opt = {});

/// Optimum over valuations for which Player 0 wins.
OptResult game_optimize(const Arena& a, const Formula& phi, Objective obj, const OptOptions& opt = {});

}  // namespace costal
