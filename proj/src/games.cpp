#include "costal/games.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "costal/altcolor.hpp"
#include "costal/automata.hpp"
#include "costal/determinize.hpp"
#include "costal/modelcheck.hpp"
#include "costal/parity.hpp"

namespace costal {

ExtendedArena expand_arena(const Arena& a) {
  int d = a.dimension;
  if (d > 8) throw std::invalid_argument("dimension too large for the extended arena");
  unsigned ncol = 1u << d;
  ExtendedArena x;
  x.dimension = d;
  x.base_vertices = a.size();
  x.arena.dimension = d;
  x.arena.arena = true;
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (unsigned c = 0; c < ncol; ++c) {
      Letter l = a.labels[v];
      for (int i = 1; i <= d; ++i) {
        if (c >> (i - 1) & 1) l.insert(color_name(i, d));
      }
      x.arena.add_state(a.names[v] + "#" + std::to_string(c), std::move(l), a.owner[v]);
      x.choice.push_back(false);
    }
  }
  for (const auto& e : a.edges) {
    x.arena.add_state(a.names[e.from] + "->" + a.names[e.to], {}, 0);
    x.choice.push_back(true);
  }
  CostVec zero(d, 0);
  for (std::size_t e = 0; e < a.edges.size(); ++e) {
    const auto& ed = a.edges[e];
    int ce = x.choice_vertex(static_cast<int>(e));
    for (unsigned c = 0; c < ncol; ++c) x.arena.add_edge(x.copy(ed.from, c), ce, ed.cost);
    for (unsigned c = 0; c < ncol; ++c) x.arena.add_edge(ce, x.copy(ed.to, c), zero);
  }
  x.arena.initial = x.copy(a.initial, 0);
  return x;
}

namespace {

struct NbaSource {
  const BuchiAutomaton& a;
  std::size_t size() const { return a.size(); }
  int initial() const { return a.initial; }
  bool accepting(int q) const { return a.accepting[q]; }
  std::vector<int> successors(int q, LetterMask l) const { return a.successors(q, l); }
};

int first_successor(const Arena& a, int v) { return a.edges[a.out[v].front()].to; }

}  // namespace

BlinkingResult solve_blinking_ltl_game(const ExtendedArena& x, const Formula& phi, std::size_t max_states) {
  if (!variables(phi).all().empty()) throw std::invalid_argument("blinking game needs a variable-free formula");
  const Arena& a = x.arena;
  Universe u(atoms(phi));
  BuchiAutomaton nba = x.dimension == 1 ? ltl_to_nba(phi, u, max_states) : conjunction_to_nba(phi, u, max_states);
  NbaSource src{nba};
  SafraDeterminizer<NbaSource, LetterMask> dpa(src, max_states);
  std::vector<LetterMask> masks;
  for (const auto& l : a.labels) masks.push_back(u.mask(l));

  std::vector<std::pair<int, int>> verts;
  std::map<std::pair<int, int>, int> index;
  ParityGame game;
  auto vertex = [&](int v, int d) {
    auto [it, fresh] = index.emplace(std::make_pair(v, d), static_cast<int>(verts.size()));
    if (fresh) {
      if (verts.size() >= max_states) throw StateLimitExceeded("blinking game state limit exceeded");
      verts.push_back({v, d});
      game.owner.push_back(a.owner[v]);
      game.priority.push_back(x.choice[v] ? 0 : dpa.priority(d));
      game.succ.emplace_back();
    }
    return it->second;
  };
  auto advance = [&](int d, int v) { return x.choice[v] ? d : dpa.step(d, masks[v]); };
  vertex(a.initial, advance(dpa.initial(), a.initial));
  for (std::size_t i = 0; i < verts.size(); ++i) {
    auto [v, d] = verts[i];
    for (int e : a.out[v]) {
      int w = a.edges[e].to;
      int j = vertex(w, advance(d, w));
      game.succ[i].push_back(j);
    }
  }
  ParitySolution sol = solve_parity(game);

  BlinkingResult r;
  r.winner = sol.winner[0];
  r.automaton_states = dpa.size();
  r.product_vertices = verts.size();
  std::map<int, int> memory;  // dpa state -> memory index
  for (auto [v, d] : verts) memory.emplace(d, 0);
  int m = 0;
  for (auto& [d, idx] : memory) idx = m++;
  Strategy& s = r.strategy;
  s.player = r.winner;
  s.initial_memory = memory.at(verts[0].second);
  s.update.assign(m, std::vector<int>(a.size()));
  s.next.assign(m, std::vector<int>(a.size(), -1));
  for (int k = 0; k < m; ++k) {
    for (std::size_t v = 0; v < a.size(); ++v) {
      s.update[k][v] = k;
      if (a.owner[v] == s.player) s.next[k][v] = first_successor(a, static_cast<int>(v));
    }
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    auto [v, d] = verts[i];
    int k = memory.at(d);
    for (int j : game.succ[i]) s.update[k][verts[j].first] = memory.at(verts[j].second);
    if (a.owner[v] == s.player && sol.strategy[i] >= 0) s.next[k][v] = verts[sol.strategy[i]].first;
  }
  return r;
}

PulledBackStrategy pull_back_strategy(const Arena& a, const ExtendedArena& x, const Strategy& sx) {
  if (sx.player != 0) throw std::invalid_argument("pull_back_strategy: expected a Player-0 strategy");
  std::size_t ncol = std::size_t{1} << x.dimension;
  std::size_t mx = sx.size();
  std::size_t total = a.size() * ncol * mx;
  auto idx = [&](int v, unsigned c, int m) { return static_cast<int>((v * ncol + c) * mx + m); };
  PulledBackStrategy p;
  Strategy& s = p.strategy;
  s.player = 0;
  s.initial_memory = idx(a.initial, 0, sx.initial_memory);
  s.update.assign(total, std::vector<int>(a.size()));
  s.next.assign(total, std::vector<int>(a.size(), -1));
  p.memory_vertex.resize(total);
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (unsigned c = 0; c < ncol; ++c) {
      for (std::size_t m = 0; m < mx; ++m) {
        int vi = static_cast<int>(v);
        int mi = static_cast<int>(m);
        int cur = idx(vi, c, mi);
        p.memory_vertex[cur] = vi;
        for (std::size_t w = 0; w < a.size(); ++w) {
          s.update[cur][w] = cur;
          if (a.owner[w] == 0) s.next[cur][w] = first_successor(a, static_cast<int>(w));
        }
        for (int e : a.out[v]) {
          int ce = x.choice_vertex(e);
          int m1 = sx.update[m][ce];
          int target = sx.next[m1][ce];
          if (x.base(target) != a.edges[e].to) throw std::logic_error("pull_back_strategy: inconsistent color move");
          int m2 = sx.update[m1][target];
          s.update[cur][a.edges[e].to] = idx(a.edges[e].to, x.colors(target), m2);
        }
        if (a.owner[v] == 0) {
          int t = sx.next[m][x.copy(vi, c)];
          if (t < 0 || !x.choice[t]) throw std::logic_error("pull_back_strategy: move is not to a choice vertex");
          s.next[cur][v] = a.edges[t - x.choice_vertex(0)].to;
        }
      }
    }
  }
  return p;
}

namespace {

template <class Visit>
void explore(const Arena& a, const Strategy& s, Visit visit) {
  std::map<std::pair<int, int>, bool> seen;
  std::deque<std::pair<int, int>> q{{a.initial, s.initial_memory}};
  seen[q.front()] = true;
  while (!q.empty()) {
    auto [v, m] = q.front();
    q.pop_front();
    visit(v, m);
    std::vector<int> moves;
    if (a.owner[v] == s.player) {
      moves.push_back(s.next[m][v]);
    } else {
      for (int e : a.out[v]) moves.push_back(a.edges[e].to);
    }
    for (int w : moves) {
      std::pair<int, int> nxt{w, s.update[m][w]};
      if (seen.emplace(nxt, true).second) q.push_back(nxt);
    }
  }
}

}  // namespace

std::size_t pull_back_fallbacks(const Arena& a, const PulledBackStrategy& p) {
  std::size_t bad = 0;
  explore(a, p.strategy, [&](int v, int m) {
    if (p.memory_vertex[m] != v) ++bad;
  });
  return bad;
}

Strategy trim_strategy(const Arena& a, const Strategy& s) {
  std::map<int, int> renum;
  std::vector<int> order;
  auto add = [&](int m) {
    if (renum.emplace(m, static_cast<int>(order.size())).second) order.push_back(m);
  };
  add(s.initial_memory);
  explore(a, s, [&](int v, int m) {
    (void)v;
    add(m);
  });
  // Successor memories of reachable pairs are reached as well, so every entry maps.
  Strategy t;
  t.player = s.player;
  t.initial_memory = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int m = order[k];
    std::vector<int> up(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) {
      auto it = renum.find(s.update[m][v]);
      up[v] = it == renum.end() ? static_cast<int>(k) : it->second;
    }
    t.update.push_back(std::move(up));
    t.next.push_back(s.next[m]);
  }
  return t;
}

InducedSystem induced_system(const Arena& a, const Strategy& s) {
  InducedSystem r;
  r.system.dimension = a.dimension;
  std::map<std::pair<int, int>, int> id;
  explore(a, s, [&](int v, int m) {
    id[{v, m}] = static_cast<int>(r.origin.size());
    r.origin.push_back({v, m});
    r.system.add_state(a.names[v] + "#" + std::to_string(m), a.labels[v]);
  });
  for (std::size_t i = 0; i < r.origin.size(); ++i) {
    auto [v, m] = r.origin[i];
    for (int e : a.out[v]) {
      int w = a.edges[e].to;
      if (a.owner[v] == s.player && s.next[m][v] != w) continue;
      r.system.add_edge(static_cast<int>(i), id.at({w, s.update[m][w]}), a.edges[e].cost);
    }
  }
  r.system.initial = 0;
  return r;
}

GameResult solve_game(const Arena& a, const Formula& phi, const GameOptions& opt) {
  if (auto v = validate_system(a)) throw std::invalid_argument("invalid arena: " + v->message);
  if (!is_well_formed(phi)) throw std::invalid_argument("formula is not well-formed");
  if (max_coord(phi) > a.dimension) throw std::invalid_argument("formula uses a coordinate above the dimension");
  int d = a.dimension;
  Formula f = eliminate_param_always(phi, d);
  Formula psi = Formula::conj(relativize(f, d), build_chi(d));
  ExtendedArena x = expand_arena(a);
  BlinkingResult b = solve_blinking_ltl_game(x, psi, opt.max_states);
  GameResult r;
  r.automaton_states = b.automaton_states;
  r.extended_vertices = x.arena.size();
  r.product_vertices = b.product_vertices;
  if (b.winner != 0) return r;
  r.win = true;
  PulledBackStrategy p = pull_back_strategy(a, x, b.strategy);
  r.fallbacks = pull_back_fallbacks(a, p);
  if (r.fallbacks != 0) throw std::logic_error("pulled-back strategy left the simulated play");
  r.strategy = trim_strategy(a, p.strategy);
  std::uint64_t core = static_cast<std::uint64_t>(a.size()) * r.strategy.size() + 3;
  std::uint64_t w = a.max_cost();
  if (w != 0 && core > kInfiniteCost / 2 / w) throw std::overflow_error("bound overflows 64 bits");
  r.k = core * w;
  VariableSets vars = variables(phi);
  for (const auto& xv : vars.eventually) r.valuation[xv] = 2 * r.k;
  for (const auto& yv : vars.always) r.valuation[yv] = 0;
  return r;
}

VerifyResult verify_strategy(const Arena& a, const Strategy& s, const Formula& phi, const Valuation& alpha,
                             std::size_t depth, const BudgetOptions& opt) {
  VerifyResult r;
  InducedSystem ind = induced_system(a, s);
  const TransitionSystem& g = ind.system;
  try {
    FixedCheckResult c = fixed_valuation_check(g, phi, alpha, opt);
    r.method = "fixed-valuation product";
    if (!c.holds) {
      r.ok = false;
      r.counterexample = trace_of_path(g, c.stem, c.loop);
    }
  } catch (const StateLimitExceeded&) {
    // Monotone shortcut: if the plays satisfy phi at the model-checking witness and
    // alpha dominates it, they satisfy phi at alpha.
    r.method = "model checking with monotone shortcut";
    McOptions mo;
    mo.max_states = opt.max_states;
    McResult mc = model_check(g, phi, mo);
    if (!mc.sat) {
      r.ok = false;
      r.counterexample = trace_of_path(g, mc.stem_states, mc.loop_states);
    } else {
      VariableSets vars = variables(phi);
      bool dominated = true;
      for (const auto& x : vars.eventually) dominated = dominated && alpha.at(x) >= mc.valuation.at(x);
      for (const auto& y : vars.always) dominated = dominated && alpha.at(y) == 0;
      r.exact = dominated;
      r.ok = dominated;
    }
  }
  if (r.counterexample && evaluate(*r.counterexample, 0, alpha, phi)) {
    throw std::logic_error("verify_strategy: counterexample satisfies the formula");
  }

  // Bounded enumeration of simple lassos through the oracle.
  bool decided_ok = r.ok && r.exact;
  const std::size_t max_lassos = 200000;
  r.partial = depth < g.size();
  std::vector<int> path{g.initial};
  std::vector<bool> on(g.size(), false);
  on[g.initial] = true;
  std::vector<std::size_t> cursor{0};
  while (!path.empty() && !r.counterexample) {
    int v = path.back();
    std::size_t& i = cursor.back();
    if (i == 0) {
      // Close every lasso ending at v.
      for (int e : g.out[v]) {
        int w = g.edges[e].to;
        auto it = std::find(path.begin(), path.end(), w);
        if (it == path.end()) continue;
        if (r.lassos_checked >= max_lassos) {
          r.partial = true;
          break;
        }
        std::vector<int> stem(path.begin(), it), loop(it, path.end());
        CostTrace t = trace_of_path(g, stem, loop);
        ++r.lassos_checked;
        if (!evaluate(t, 0, alpha, phi)) {
          if (decided_ok) throw std::logic_error("verify_strategy: oracle refutes the product check");
          r.ok = false;
          r.counterexample = t;
          break;
        }
      }
    }
    if (r.lassos_checked >= max_lassos) {
      r.partial = true;
      break;
    }
    if (i < g.out[v].size() && path.size() < depth) {
      int w = g.edges[g.out[v][i++]].to;
      if (on[w]) continue;
      on[w] = true;
      path.push_back(w);
      cursor.push_back(0);
      continue;
    }
    on[v] = false;
    path.pop_back();
    cursor.pop_back();
  }
  return r;
}

}  // namespace costal
