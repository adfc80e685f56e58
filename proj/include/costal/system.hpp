#pragma once

#include <optional>
#include <string>
#include <vector>

#include "costal/trace.hpp"

namespace costal {

struct SystemEdge {
  int from;
  int to;
  CostVec cost;
};

/// Finite graph with labeled states and cost-vector edges. With owners it doubles
/// as a two-player arena; plain systems have every state owned by Player 0.
struct TransitionSystem {
  int dimension = 1;
  bool arena = false;
  std::vector<std::string> names;
  std::vector<Letter> labels;
  std::vector<int> owner;
  int initial = 0;
  std::vector<SystemEdge> edges;
  std::vector<std::vector<int>> out;  // edge ids per source state, input order

  std::size_t size() const { return names.size(); }
  int add_state(const std::string& name, Letter label, int owner_of = 0);
  int add_edge(int from, int to, CostVec cost);
  /// State index by name, -1 if absent.
  int find(const std::string& name) const;
  /// Edge id from `from` to `to`, -1 if absent.
  int edge_between(int from, int to) const;
  /// Largest edge cost over all coordinates.
  std::uint64_t max_cost() const;
};

using Arena = TransitionSystem;

struct SystemViolation {
  std::string message;
  int state = -1;
  int edge = -1;
};

/// Successor totality, kappa-consistency of every edge, no parallel edges, and
/// well-formed owners and cost dimensions.
std::optional<SystemViolation> validate_system(const TransitionSystem& s);

/// `system d=<nat>;` or `arena d=<nat>;` followed by
/// `state <id> labels {..} [owner 0|1] [initial];` and `edge <id> -> <id> cost (c,..);`.
TransitionSystem parse_system(const std::string& text);
std::string format_system(const TransitionSystem& s);

/// Finite-memory strategy. The memory is not updated on the first vertex of a play:
/// m_0 = initial_memory, m_{n+1} = update[m_n][v_{n+1}], and the move at a vertex v_n
/// of the strategy's player is next[m_n][v_n].
struct Strategy {
  int player = 0;
  int initial_memory = 0;
  std::vector<std::vector<int>> update;  // [memory][vertex] -> memory
  std::vector<std::vector<int>> next;    // [memory][vertex] -> successor, -1 elsewhere

  std::size_t size() const { return update.size(); }
};

/// `(memory, vertex) -> (successor, next-memory)` table, one line per defined move.
std::string format_strategy(const TransitionSystem& a, const Strategy& s);

/// Trace of the path stem + loop^omega (state indices). An empty loop is not allowed;
/// the last stem state must reach loop[0], and the loop must close.
CostTrace trace_of_path(const TransitionSystem& s, const std::vector<int>& stem,
                        const std::vector<int>& loop);

}  // namespace costal
