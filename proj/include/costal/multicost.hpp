#pragma once

#include <string>
#include <utility>
#include <vector>

#include "costal/formula.hpp"
#include "costal/games.hpp"
#include "costal/modelcheck.hpp"

namespace costal {

struct MultRelativized {
  Formula relativized;
  Formula chi;
};

/// Per-coordinate relativization of an F-fragment formula together with the
/// matching chi. Throws std::invalid_argument on a coordinate above the dimension.
MultRelativized mult_relativize(const Formula& f, int dimension);

/// Model checking in any dimension; blocks are certified per coordinate by the
/// marker search.
McResult mult_model_check(const TransitionSystem& s, const Formula& phi, std::size_t max_states = 1000000);

/// Game solving in any dimension over the 2^d-fold extended arena.
GameResult mult_solve_game(const Arena& a, const Formula& phi, std::size_t max_states = 1000000);

/// FG of the conjunction of (Q_i -> F[<=x@i] P_i), one coordinate per pair.
Formula streett_cost_formula(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::string& var = "x");

/// Parses "Q1:P1,Q2:P2".
std::vector<std::pair<std::string, std::string>> parse_streett_pairs(const std::string& text);

}  // namespace costal
