#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "costal/automata.hpp"
#include "costal/formula.hpp"
#include "costal/system.hpp"

namespace costal {

/// Product of a system with a Buchi automaton whose letters carry color
/// propositions. Vertex (s, q, C) has id (s * |Q| + q) * 2^d + C.
struct ColoredProduct {
  int dimension = 1;
  std::size_t system_states = 0;
  std::size_t automaton_states = 0;
  int initial = 0;
  std::vector<std::vector<std::pair<int, int>>> succ;  // (target, system edge)
  std::vector<bool> accepting;
  std::vector<CostVec> edge_cost;  // by system edge

  std::size_t size() const { return succ.size(); }
  int id(int s, int q, unsigned colors) const {
    return static_cast<int>((static_cast<std::size_t>(s) * automaton_states + q) << dimension | colors);
  }
  int state(int v) const { return static_cast<int>((static_cast<std::size_t>(v) >> dimension) / automaton_states); }
  int automaton_state(int v) const {
    return static_cast<int>((static_cast<std::size_t>(v) >> dimension) % automaton_states);
  }
  unsigned colors(int v) const { return static_cast<unsigned>(v) & ((1u << dimension) - 1); }
  bool color(int v, int coord) const { return colors(v) >> (coord - 1) & 1; }
  /// Cost of the product edge v -> w, which must exist.
  const CostVec& cost(int v, int w) const;
};

/// Throws std::invalid_argument if the automaton mentions colors of another dimension.
ColoredProduct build_product(const TransitionSystem& s, const BuchiAutomaton& a);

/// Product vertices of a path stem followed by loop repeated forever.
struct Lasso {
  std::vector<int> stem;
  std::vector<int> loop;
  std::size_t length() const { return stem.size() + loop.size(); }
};

/// Vertices carry one bit per coordinate recording whether the current block
/// already contains a repetition with positive cost. Exact in dimension one; in
/// higher dimensions a miss falls back to the marker search.
std::optional<Lasso> find_pumpable_fair_path(const ColoredProduct& g, std::size_t max_states = 1000000);

/// Search for any dimension: per coordinate, the current block is uncertified,
/// certified, or tracks a guessed vertex that is to be repeated.
std::optional<Lasso> find_pumpable_fair_path_markers(const ColoredProduct& g, std::size_t max_states = 1000000);

struct AuditResult {
  bool ok = true;
  std::string reason;
};

/// Standalone check of the pumpable fair path conditions on a lasso.
AuditResult audit_pumpable_lasso(const ColoredProduct& g, const Lasso& l);

/// 4 n^2 for a product with n vertices.
std::uint64_t lasso_length_bound(const ColoredProduct& g);

struct McOptions {
  std::size_t max_states = 1000000;
  /// Use the marker search in every dimension.
  bool markers = false;
};

struct McResult {
  bool sat = false;
  /// Witness valuation for SAT: 2k on eventually-variables, 0 on always-variables.
  Valuation valuation;
  /// Counterexample for UNSAT: the product lasso and its projection to the system.
  std::optional<Lasso> lasso;
  std::vector<int> stem_states, loop_states;
  std::uint64_t bound = 0;
  std::size_t automaton_states = 0;
  std::size_t product_vertices = 0;
};

/// The automaton for negate(rel(phi)) & chi over its own propositions, where phi has
/// had its parameterized always-operators eliminated.
BuchiAutomaton counterexample_automaton(const Formula& phi, int dimension, std::size_t max_states = 1000000);

McResult model_check(const TransitionSystem& s, const Formula& phi, const McOptions& opt = {});

/// 2 (|S| |Q| 2^(d-1) + 3) W.
std::uint64_t mc_bound_value(std::uint64_t system_states, std::uint64_t automaton_states, std::uint64_t max_cost,
                             int dimension = 1);
std::uint64_t mc_bound(const TransitionSystem& s, const Formula& phi);

/// (4 |A| |S| + 2) W.
std::uint64_t g_fragment_bound_value(std::uint64_t automaton_states, std::uint64_t system_states,
                                     std::uint64_t max_cost);
/// k* for the automaton of rel(negate(phi)) & chi. Throws on non-G-fragment input.
std::uint64_t g_fragment_bound(const TransitionSystem& s, const Formula& phi);

}  // namespace costal
