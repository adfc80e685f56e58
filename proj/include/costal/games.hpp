#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "costal/budget.hpp"
#include "costal/formula.hpp"
#include "costal/system.hpp"

namespace costal {

/// Arena in which every move is split in two: the mover picks an edge, then
/// Player 0 picks the color set of the target copy. Vertex (v, C) has id
/// v * 2^d + C; the choice vertex of edge e has id |V| * 2^d + e.
struct ExtendedArena {
  Arena arena;
  std::vector<bool> choice;
  std::size_t base_vertices = 0;
  int dimension = 1;

  int copy(int v, unsigned colors) const { return static_cast<int>((static_cast<std::size_t>(v) << dimension) | colors); }
  int choice_vertex(int edge) const { return static_cast<int>((base_vertices << dimension) + edge); }
  int base(int u) const { return static_cast<int>(static_cast<std::size_t>(u) >> dimension); }
  unsigned colors(int u) const { return static_cast<unsigned>(u) & ((1u << dimension) - 1); }
};

ExtendedArena expand_arena(const Arena& a);

struct BlinkingResult {
  int winner = 0;
  /// Winning strategy on the extended arena (memory = automaton states).
  Strategy strategy;
  std::size_t automaton_states = 0;
  std::size_t product_vertices = 0;
};

/// Game on an extended arena whose variable-free winning condition is read on
/// non-choice vertices only.
BlinkingResult solve_blinking_ltl_game(const ExtendedArena& a, const Formula& phi,
                                       std::size_t max_states = 1000000);

struct PulledBackStrategy {
  Strategy strategy;
  /// Original-arena vertex stored in each memory state.
  std::vector<int> memory_vertex;
};

/// Simulates a strategy of the extended arena on the original arena. Memory states
/// are ((v, C), m') pairs.
PulledBackStrategy pull_back_strategy(const Arena& a, const ExtendedArena& ext, const Strategy& s);

/// Number of reachable (vertex, memory) pairs where the next move falls back to the
/// branch that simulation never uses; always zero for pulled-back strategies.
std::size_t pull_back_fallbacks(const Arena& a, const PulledBackStrategy& p);

/// Keeps only the memory states reachable in plays consistent with the strategy.
Strategy trim_strategy(const Arena& a, const Strategy& s);

/// Plays consistent with the strategy as a transition system over (vertex, memory).
struct InducedSystem {
  TransitionSystem system;
  std::vector<std::pair<int, int>> origin;  // (vertex, memory) per state
};
InducedSystem induced_system(const Arena& a, const Strategy& s);

struct GameOptions {
  std::size_t max_states = 1000000;
};

struct GameResult {
  bool win = false;
  Valuation valuation;
  Strategy strategy;  // on the original arena, trimmed
  std::uint64_t k = 0;
  std::size_t automaton_states = 0;
  std::size_t extended_vertices = 0;
  std::size_t product_vertices = 0;
  std::size_t fallbacks = 0;
};

GameResult solve_game(const Arena& a, const Formula& phi, const GameOptions& opt = {});

struct VerifyResult {
  bool ok = true;
  /// Decided on the finite product of arena and memory; false if the state cap forced
  /// a fallback that could not decide.
  bool exact = true;
  std::string method;
  /// The bounded lasso enumeration stopped before covering every simple lasso.
  bool partial = false;
  std::size_t lassos_checked = 0;
  std::optional<CostTrace> counterexample;
};

/// Checks every play consistent with the strategy against phi at alpha, and
/// enumerates consistent simple lassos of length at most depth through the oracle.
VerifyResult verify_strategy(const Arena& a, const Strategy& s, const Formula& phi, const Valuation& alpha,
                             std::size_t depth, const BudgetOptions& opt = {});

}  // namespace costal
