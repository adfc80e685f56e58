#include "costal/modelcheck.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "costal/altcolor.hpp"
#include "costal/graph.hpp"

namespace costal {

namespace {

bool positive_anywhere(const CostVec& c) {
  return std::any_of(c.begin(), c.end(), [](std::uint64_t x) { return x > 0; });
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kInfiniteCost / a) throw std::overflow_error("bound overflows 64 bits");
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (b > kInfiniteCost - a) throw std::overflow_error("bound overflows 64 bits");
  return a + b;
}

}  // namespace

const CostVec& ColoredProduct::cost(int v, int w) const {
  for (auto [t, e] : succ[v]) {
    if (t == w) return edge_cost[e];
  }
  throw std::invalid_argument("not a product edge");
}

ColoredProduct build_product(const TransitionSystem& s, const BuchiAutomaton& a) {
  int d = s.dimension;
  if (d > 16) throw std::invalid_argument("dimension too large for the colored product");
  std::vector<int> color_bit(d);
  for (const auto& p : a.universe.names()) {
    if (p.rfind("@color", 0) != 0) continue;
    bool known = false;
    for (int i = 1; i <= d; ++i) known = known || p == color_name(i, d);
    if (!known) throw std::invalid_argument("automaton proposition " + p + " is not a color of dimension " +
                                            std::to_string(d));
  }
  ColoredProduct g;
  g.dimension = d;
  g.system_states = s.size();
  g.automaton_states = a.size();
  unsigned ncol = 1u << d;
  std::size_t n = s.size() * a.size() * ncol;
  g.succ.resize(n);
  g.accepting.resize(n);
  for (const auto& e : s.edges) g.edge_cost.push_back(e.cost);
  std::vector<LetterMask> color_mask(ncol, 0);
  for (unsigned c = 0; c < ncol; ++c) {
    for (int i = 1; i <= d; ++i) {
      int k = a.universe.index(color_name(i, d));
      if ((c >> (i - 1) & 1) && k >= 0) color_mask[c] |= LetterMask{1} << k;
    }
  }
  for (std::size_t st = 0; st < s.size(); ++st) {
    LetterMask base = a.universe.mask(s.labels[st]);
    for (std::size_t q = 0; q < a.size(); ++q) {
      for (unsigned c = 0; c < ncol; ++c) {
        int v = g.id(static_cast<int>(st), static_cast<int>(q), c);
        g.accepting[v] = a.accepting[q];
        std::vector<int> next = a.successors(static_cast<int>(q), base | color_mask[c]);
        for (int e : s.out[st]) {
          for (int q2 : next) {
            for (unsigned c2 = 0; c2 < ncol; ++c2) g.succ[v].push_back({g.id(s.edges[e].to, q2, c2), e});
          }
        }
      }
    }
  }
  g.initial = g.id(s.initial, a.initial, 0);
  return g;
}

std::uint64_t lasso_length_bound(const ColoredProduct& g) {
  std::uint64_t n = g.size();
  return 4 * n * n;
}

// ---------------------------------------------------------------------------
// Certification search

namespace {

struct Pumps {
  std::vector<int> comp;
  std::vector<std::vector<bool>> has_cost;  // per coordinate, per component
};

Pumps same_color_components(const ColoredProduct& g) {
  Adjacency h(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto [w, e] : g.succ[v]) {
      if (g.colors(static_cast<int>(v)) == g.colors(w)) h[v].push_back(w);
    }
  }
  SccResult scc = strongly_connected(h);
  Pumps p{scc.comp, std::vector<std::vector<bool>>(g.dimension, std::vector<bool>(scc.count, false))};
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (auto [w, e] : g.succ[v]) {
      if (scc.comp[v] != scc.comp[w]) continue;
      for (int i = 0; i < g.dimension; ++i) {
        if (g.edge_cost[e][i] > 0) p.has_cost[i][scc.comp[v]] = true;
      }
    }
  }
  return p;
}

/// Closed walk from v through an edge of its same-color component that is
/// positive in coordinate i, excluding the leading v.
std::vector<int> pump_walk(const ColoredProduct& g, const Pumps& p, int v, int i) {
  int c = p.comp[v];
  Adjacency h(g.size());
  std::vector<bool> alive(g.size(), false);
  for (std::size_t u = 0; u < g.size(); ++u) alive[u] = p.comp[u] == c;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (!alive[u]) continue;
    for (auto [w, e] : g.succ[u]) {
      if (alive[w]) h[u].push_back(w);
    }
  }
  auto exit_edge = [&](int u) -> int {
    for (auto [w, e] : g.succ[u]) {
      if (alive[w] && g.edge_cost[e][i] > 0) return w;
    }
    return -1;
  };
  std::vector<int> to = shortest_path(h, {v}, [&](int u) { return exit_edge(u) >= 0; }, &alive);
  int y = exit_edge(to.back());
  std::vector<int> back = shortest_path(h, {y}, [&](int u) { return u == v; }, &alive);
  std::vector<int> walk(to.begin() + 1, to.end());
  walk.insert(walk.end(), back.begin(), back.end());
  return walk;
}

/// Lasso search where a block of coordinate i is certified by a positive cycle
/// that keeps every color fixed. Exact for one coordinate, sound in general.
std::optional<Lasso> find_certified_fair_path(const ColoredProduct& g, std::size_t max_states) {
  int d = g.dimension;
  std::size_t n = g.size();
  std::size_t m = n << d;
  if (m > max_states) throw StateLimitExceeded("pumpable search state limit exceeded");
  Pumps pumps = same_color_components(g);
  unsigned full = (1u << d) - 1;
  // Vertex (v << d) | b: product vertex v, b = coordinates whose current block is certified.
  auto node = [&](int v, unsigned b) { return static_cast<int>((static_cast<std::size_t>(v) << d) | b); };
  Adjacency h(m);
  for (std::size_t v = 0; v < n; ++v) {
    int vi = static_cast<int>(v);
    for (unsigned b = 0; b <= full; ++b) {
      auto& out = h[node(vi, b)];
      for (int i = 0; i < d; ++i) {
        if (!(b >> i & 1) && pumps.has_cost[i][pumps.comp[v]]) out.push_back(node(vi, b | 1u << i));
      }
      for (auto [w, e] : g.succ[v]) {
        unsigned change = g.colors(vi) ^ g.colors(w);
        if ((change & b) == change) out.push_back(node(w, b & ~change));
      }
    }
  }
  int start = node(g.initial, 0);
  std::vector<bool> reach = reachable(h, {start});
  SccResult scc = strongly_connected(h, &reach);
  auto target = [&](int x) { return g.accepting[x >> d] && scc.nontrivial[scc.comp[x]]; };
  std::vector<int> stem = shortest_path(h, {start}, target, &reach);
  if (stem.empty()) return std::nullopt;
  int t = stem.back();
  std::vector<bool> same(m, false);
  for (std::size_t x = 0; x < m; ++x) same[x] = reach[x] && scc.comp[x] == scc.comp[t];
  std::vector<int> starts;
  for (int x : h[t]) {
    if (same[x]) starts.push_back(x);
  }
  std::vector<int> cycle = shortest_path(h, starts, [&](int y) { return y == t; }, &same);
  cycle.insert(cycle.begin(), t);  // t ... t

  auto expand = [&](const std::vector<int>& path) {
    std::vector<int> out{path.front() >> d};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      int a = path[k], b = path[k + 1];
      if (a >> d == b >> d && a != b) {
        int i = std::countr_zero(static_cast<unsigned>(a ^ b));
        std::vector<int> walk = pump_walk(g, pumps, a >> d, i);
        out.insert(out.end(), walk.begin(), walk.end());
      } else {
        out.push_back(b >> d);
      }
    }
    return out;
  };
  Lasso l;
  l.stem = expand(stem);
  l.stem.pop_back();
  l.loop = expand(cycle);
  l.loop.pop_back();
  return l;
}

}  // namespace

std::optional<Lasso> find_pumpable_fair_path(const ColoredProduct& g, std::size_t max_states) {
  if (g.dimension == 1) return find_certified_fair_path(g, max_states);
  if (std::optional<Lasso> l = find_certified_fair_path(g, max_states)) return l;
  return find_pumpable_fair_path_markers(g, max_states);
}

// ---------------------------------------------------------------------------
// Marker search

namespace {

// Per-coordinate status: 0 uncertified, 1 certified, 2 + 2u + f marker at u with
// f = positive cost seen since u.
struct MarkerKey {
  std::vector<int> data;  // vertex, then one status per coordinate
  friend bool operator==(const MarkerKey&, const MarkerKey&) = default;
};
struct MarkerHash {
  std::size_t operator()(const MarkerKey& k) const {
    std::size_t h = 0;
    for (int x : k.data) h = h * 1000003u ^ static_cast<std::size_t>(x);
    return h;
  }
};

}  // namespace

std::optional<Lasso> find_pumpable_fair_path_markers(const ColoredProduct& g, std::size_t max_states) {
  int d = g.dimension;
  std::size_t gn = g.size();
  // Per coordinate: components of the color-preserving subgraph, and whether a
  // component carries a positive-cost cycle in that coordinate.
  std::vector<std::vector<int>> comp(d);
  std::vector<std::vector<bool>> good(d);
  for (int i = 0; i < d; ++i) {
    Adjacency c(gn);
    for (std::size_t v = 0; v < gn; ++v) {
      for (auto [w, e] : g.succ[v]) {
        if (g.color(static_cast<int>(v), i + 1) == g.color(w, i + 1)) c[v].push_back(w);
      }
    }
    SccResult scc = strongly_connected(c);
    comp[i] = scc.comp;
    std::vector<bool> pos(gn, false);
    for (std::size_t v = 0; v < gn; ++v) {
      for (auto [w, e] : g.succ[v]) {
        if (scc.comp[v] == scc.comp[w] && g.color(static_cast<int>(v), i + 1) == g.color(w, i + 1) &&
            g.edge_cost[e][i] > 0) {
          pos[scc.comp[v]] = true;
        }
      }
    }
    good[i].assign(gn, false);
    for (std::size_t v = 0; v < gn; ++v) good[i][v] = pos[scc.comp[v]];
  }
  // Product vertices that can still reach an accepting cycle.
  std::vector<bool> useful;
  {
    Adjacency full(gn), rev(gn);
    for (std::size_t v = 0; v < gn; ++v) {
      for (auto [w, e] : g.succ[v]) {
        full[v].push_back(w);
        rev[w].push_back(static_cast<int>(v));
      }
    }
    SccResult scc = strongly_connected(full);
    std::vector<int> fair;
    for (std::size_t v = 0; v < gn; ++v) {
      if (g.accepting[v] && scc.nontrivial[scc.comp[v]]) fair.push_back(static_cast<int>(v));
    }
    useful = reachable(rev, fair);
  }
  if (!useful[g.initial]) return std::nullopt;
  std::vector<MarkerKey> states;
  std::unordered_map<MarkerKey, int, MarkerHash> ids;
  Adjacency h;
  auto intern = [&](MarkerKey k) {
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    if (states.size() >= max_states) throw StateLimitExceeded("pumpable search state limit exceeded");
    int id = static_cast<int>(states.size());
    ids.emplace(k, id);
    states.push_back(std::move(k));
    h.emplace_back();
    return id;
  };
  // Optionally start a marker at v for every uncertified coordinate.
  auto with_markers = [&](const MarkerKey& base, std::vector<int>& out) {
    std::vector<int> free;
    for (int i = 0; i < d; ++i) {
      if (base.data[1 + i] == 0 && good[i][base.data[0]]) free.push_back(i);
    }
    for (unsigned sub = 0; sub < (1u << free.size()); ++sub) {
      MarkerKey k = base;
      for (std::size_t j = 0; j < free.size(); ++j) {
        if (sub >> j & 1) k.data[1 + free[j]] = 2 + 2 * base.data[0];
      }
      out.push_back(intern(std::move(k)));
    }
  };
  std::vector<int> roots;
  {
    MarkerKey k;
    k.data.assign(1 + d, 0);
    k.data[0] = g.initial;
    with_markers(k, roots);
  }
  for (std::size_t x = 0; x < states.size(); ++x) {
    MarkerKey cur = states[x];
    int v = cur.data[0];
    std::vector<int> out;
    for (auto [w, e] : g.succ[v]) {
      if (!useful[w]) continue;
      MarkerKey k = cur;
      k.data[0] = w;
      bool ok = true;
      for (int i = 0; i < d && ok; ++i) {
        int& st = k.data[1 + i];
        if (g.color(v, i + 1) != g.color(w, i + 1)) {
          if (st != 1) ok = false;
          st = 0;
          continue;
        }
        if (st >= 2) {
          int u = (st - 2) / 2;
          bool f = (st - 2) % 2 == 1 || g.edge_cost[e][i] > 0;
          st = (u == w && f) ? 1 : 2 + 2 * u + (f ? 1 : 0);
          if (st != 1 && comp[i][u] != comp[i][w]) ok = false;
        }
      }
      if (ok) with_markers(k, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    h[x] = std::move(out);
  }
  std::size_t n = states.size();
  std::vector<bool> all(n, true);
  SccResult scc = strongly_connected(h, &all);
  auto target = [&](int x) { return g.accepting[states[x].data[0]] && scc.nontrivial[scc.comp[x]]; };
  std::vector<int> stem = shortest_path(h, roots, target);
  if (stem.empty()) return std::nullopt;
  int t = stem.back();
  std::vector<bool> same(n, false);
  for (std::size_t x = 0; x < n; ++x) same[x] = scc.comp[x] == scc.comp[t];
  std::vector<int> starts;
  for (int y : h[t]) {
    if (same[y]) starts.push_back(y);
  }
  std::vector<int> back = shortest_path(h, starts, [&](int y) { return y == t; }, &same);
  Lasso l;
  for (std::size_t i = 0; i + 1 < stem.size(); ++i) l.stem.push_back(states[stem[i]].data[0]);
  l.loop.push_back(states[t].data[0]);
  for (std::size_t i = 0; i + 1 < back.size(); ++i) l.loop.push_back(states[back[i]].data[0]);
  return l;
}

// ---------------------------------------------------------------------------
// Audit

AuditResult audit_pumpable_lasso(const ColoredProduct& g, const Lasso& l) {
  auto fail = [](std::string why) { return AuditResult{false, std::move(why)}; };
  if (l.loop.empty()) return fail("empty loop");
  std::vector<int> seq = l.stem;
  seq.insert(seq.end(), l.loop.begin(), l.loop.end());
  if (seq.front() != g.initial) return fail("does not start at the initial vertex");
  auto edge = [&](int v, int w) -> const CostVec* {
    for (auto [t, e] : g.succ[v]) {
      if (t == w) return &g.edge_cost[e];
    }
    return nullptr;
  };
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int w = i + 1 < seq.size() ? seq[i + 1] : l.loop.front();
    if (!edge(seq[i], w)) return fail("missing edge at position " + std::to_string(i));
  }
  if (std::none_of(l.loop.begin(), l.loop.end(), [&](int v) { return g.accepting[v]; })) {
    return fail("loop has no accepting vertex");
  }
  std::vector<int> run = l.stem;
  for (int k = 0; k < 3; ++k) run.insert(run.end(), l.loop.begin(), l.loop.end());
  std::size_t window = l.stem.size() + l.loop.size();
  for (int i = 1; i <= g.dimension; ++i) {
    std::size_t begin = 0;
    for (std::size_t p = 1; p < run.size() && begin < window; ++p) {
      if (g.color(run[p], i) == g.color(run[p - 1], i)) continue;
      // Complete block [begin, p - 1].
      bool found = false;
      for (std::size_t a = begin; a < p && !found; ++a) {
        std::uint64_t cost = 0;
        for (std::size_t b = a + 1; b < p && !found; ++b) {
          cost += (*edge(run[b - 1], run[b]))[i - 1];
          if (run[b] == run[a] && cost > 0) found = true;
        }
      }
      if (!found) {
        return fail("block [" + std::to_string(begin) + ", " + std::to_string(p - 1) + "] of coordinate " +
                    std::to_string(i) + " has no repetition with positive cost");
      }
      begin = p;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Model checking

BuchiAutomaton counterexample_automaton(const Formula& phi, int dimension, std::size_t max_states) {
  Formula psi = Formula::conj(negate(relativize(phi, dimension)), build_chi(dimension));
  if (dimension == 1) return ltl_to_nba(psi, Universe(atoms(psi)), max_states);
  return conjunction_to_nba(psi, Universe(atoms(psi)), max_states);
}

std::uint64_t mc_bound_value(std::uint64_t system_states, std::uint64_t automaton_states, std::uint64_t max_cost,
                             int dimension) {
  std::uint64_t core = checked_mul(system_states, automaton_states);
  core = checked_mul(core, std::uint64_t{1} << (dimension - 1));
  return checked_mul(2, checked_mul(checked_add(core, 3), max_cost));
}

std::uint64_t g_fragment_bound_value(std::uint64_t automaton_states, std::uint64_t system_states,
                                     std::uint64_t max_cost) {
  std::uint64_t core = checked_mul(4, checked_mul(automaton_states, system_states));
  return checked_mul(checked_add(core, 2), max_cost);
}

namespace {

void check_inputs(const TransitionSystem& s, const Formula& phi) {
  if (auto v = validate_system(s)) throw std::invalid_argument("invalid system: " + v->message);
  if (!is_well_formed(phi)) throw std::invalid_argument("formula is not well-formed");
  if (max_coord(phi) > s.dimension) throw std::invalid_argument("formula uses a coordinate above the dimension");
}

}  // namespace

std::uint64_t mc_bound(const TransitionSystem& s, const Formula& phi) {
  check_inputs(s, phi);
  BuchiAutomaton a = counterexample_automaton(eliminate_param_always(phi, s.dimension), s.dimension);
  return mc_bound_value(s.size(), a.size(), s.max_cost(), s.dimension);
}

std::uint64_t g_fragment_bound(const TransitionSystem& s, const Formula& phi) {
  check_inputs(s, phi);
  if (!is_g_fragment(phi)) throw std::invalid_argument("formula is not in the G-fragment");
  Formula psi = Formula::conj(relativize(negate(phi), s.dimension), build_chi(s.dimension));
  BuchiAutomaton a = s.dimension == 1 ? ltl_to_nba(psi, Universe(atoms(psi)))
                                      : conjunction_to_nba(psi, Universe(atoms(psi)));
  return g_fragment_bound_value(a.size(), s.size(), s.max_cost());
}

McResult model_check(const TransitionSystem& s, const Formula& phi, const McOptions& opt) {
  check_inputs(s, phi);
  Formula f = eliminate_param_always(phi, s.dimension);
  BuchiAutomaton a = counterexample_automaton(f, s.dimension, opt.max_states);
  if (s.size() * a.size() * (std::size_t{1} << s.dimension) > opt.max_states) {
    throw StateLimitExceeded("product state limit exceeded");
  }
  ColoredProduct g = build_product(s, a);
  McResult r;
  r.automaton_states = a.size();
  r.product_vertices = g.size();
  r.bound = mc_bound_value(s.size(), a.size(), s.max_cost(), s.dimension);
  std::optional<Lasso> l = opt.markers ? find_pumpable_fair_path_markers(g, opt.max_states)
                                       : find_pumpable_fair_path(g, opt.max_states);
  if (l) {
    r.sat = false;
    for (int v : l->stem) r.stem_states.push_back(g.state(v));
    for (int v : l->loop) r.loop_states.push_back(g.state(v));
    r.lasso = std::move(l);
    return r;
  }
  r.sat = true;
  VariableSets vars = variables(phi);
  for (const auto& x : vars.eventually) r.valuation[x] = r.bound;
  for (const auto& y : vars.always) r.valuation[y] = 0;
  return r;
}

}  // namespace costal
