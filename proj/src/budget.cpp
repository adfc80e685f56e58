#include "costal/budget.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "costal/automata.hpp"
#include "costal/determinize.hpp"
#include "costal/graph.hpp"
#include "costal/parity.hpp"

namespace costal {

// ---------------------------------------------------------------------------
// Tableau

std::size_t BudgetTableau::VecHash::operator()(const std::vector<Obligation>& v) const {
  std::size_t h = v.size();
  for (const auto& o : v) {
    h = h * 1000003u ^ static_cast<std::size_t>(o.node);
    h = h * 1000003u ^ static_cast<std::size_t>(o.budget);
  }
  return h;
}

BudgetTableau::BudgetTableau(const Formula& f, const Valuation& alpha, int dimension, const BudgetOptions& opt)
    : opt_(opt) {
  std::set<Formula> cl = closure(f);
  std::vector<Formula> order(cl.begin(), cl.end());
  std::map<Formula, int> id;
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  for (const auto& p : atoms(f)) {
    int k = static_cast<int>(atom_index_.size());
    atom_index_[p] = k;
  }
  if (atom_index_.size() > 64) throw std::invalid_argument("budget tableau: more than 64 propositions");
  nodes_.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Formula& g = order[i];
    Node& n = nodes_[i];
    n.op = g.op();
    n.text = g.to_string();
    n.coord = g.coord();
    for (const auto& k : g.children()) n.kids.push_back(id.at(k));
    if (g.is_literal()) n.atom = atom_index_.at(g.name());
    if (g.is_parameterized()) {
      if (g.coord() > dimension) throw std::invalid_argument("budget tableau: coordinate out of range");
      auto it = alpha.find(g.name());
      if (it == alpha.end()) throw UnboundVariable("variable " + g.name() + " has no value");
      if (it->second > opt_.max_alpha) throw std::invalid_argument("valuation exceeds the configured cap");
      n.bound = it->second;
    }
    if (g.op() == Op::until || g.op() == Op::param_eventually) {
      n.mark = static_cast<int>(eventuality_nodes_.size());
      eventuality_nodes_.push_back(static_cast<int>(i));
    }
  }
  if (eventuality_nodes_.size() > 64) throw std::invalid_argument("budget tableau: more than 64 eventualities");
  int root = id.at(f);
  intern({{root, fresh_budget(root)}});
}

std::uint64_t BudgetTableau::all_marks() const {
  int m = eventualities();
  return m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

std::uint64_t BudgetTableau::fresh_budget(int node) const {
  const Node& n = nodes_[node];
  return (n.op == Op::param_eventually || n.op == Op::param_always) ? n.bound : 0;
}

std::uint64_t BudgetTableau::letter_mask(const Letter& l) const {
  std::uint64_t m = 0;
  for (const auto& p : l) {
    auto it = atom_index_.find(p);
    if (it != atom_index_.end()) m |= std::uint64_t{1} << it->second;
  }
  return m;
}

int BudgetTableau::intern(std::vector<Obligation> o) {
  std::sort(o.begin(), o.end());
  std::vector<Obligation> norm;
  for (const auto& x : o) {
    if (!norm.empty() && norm.back().node == x.node) {
      // Keep the strongest budget: the smallest for eventualities, the largest for always.
      if (nodes_[x.node].op == Op::param_always) norm.back().budget = std::max(norm.back().budget, x.budget);
      continue;
    }
    norm.push_back(x);
  }
  auto it = ids_.find(norm);
  if (it != ids_.end()) return it->second;
  if (states_.size() >= opt_.max_states) throw StateLimitExceeded("budget tableau state limit exceeded");
  int id = static_cast<int>(states_.size());
  states_.push_back(norm);
  ids_.emplace(std::move(norm), id);
  return id;
}

void BudgetTableau::expand_rec(std::vector<Obligation> todo, std::vector<Obligation> done, Cover cur,
                               std::uint64_t letter, std::vector<Cover>& out) {
  while (!todo.empty()) {
    Obligation o = todo.back();
    todo.pop_back();
    if (std::find(done.begin(), done.end(), o) != done.end()) continue;
    done.push_back(o);
    const Node& n = nodes_[o.node];
    switch (n.op) {
      case Op::atom:
        if (!(letter >> n.atom & 1)) return;
        break;
      case Op::neg_atom:
        if (letter >> n.atom & 1) return;
        break;
      case Op::conj:
        todo.push_back({n.kids[0], fresh_budget(n.kids[0])});
        todo.push_back({n.kids[1], fresh_budget(n.kids[1])});
        break;
      case Op::disj: {
        auto alt = todo;
        alt.push_back({n.kids[1], fresh_budget(n.kids[1])});
        expand_rec(std::move(alt), done, cur, letter, out);
        todo.push_back({n.kids[0], fresh_budget(n.kids[0])});
        break;
      }
      case Op::next:
        cur.next.push_back({n.kids[0], fresh_budget(n.kids[0]), false});
        break;
      case Op::until: {
        auto alt = todo;
        alt.push_back({n.kids[0], fresh_budget(n.kids[0])});
        Cover c2 = cur;
        c2.next.push_back({o.node, 0, false});
        c2.postponed |= std::uint64_t{1} << n.mark;
        expand_rec(std::move(alt), done, std::move(c2), letter, out);
        todo.push_back({n.kids[1], fresh_budget(n.kids[1])});
        break;
      }
      case Op::release: {
        auto alt = todo;
        alt.push_back({n.kids[1], fresh_budget(n.kids[1])});
        Cover c2 = cur;
        c2.next.push_back({o.node, 0, false});
        expand_rec(std::move(alt), done, std::move(c2), letter, out);
        todo.push_back({n.kids[0], fresh_budget(n.kids[0])});
        todo.push_back({n.kids[1], fresh_budget(n.kids[1])});
        break;
      }
      case Op::param_eventually: {
        Cover c2 = cur;
        c2.next.push_back({o.node, o.budget, true});
        c2.postponed |= std::uint64_t{1} << n.mark;
        expand_rec(todo, done, std::move(c2), letter, out);
        todo.push_back({n.kids[0], fresh_budget(n.kids[0])});
        break;
      }
      case Op::param_always:
        cur.next.push_back({o.node, o.budget, true});
        todo.push_back({n.kids[0], fresh_budget(n.kids[0])});
        break;
    }
  }
  std::sort(cur.next.begin(), cur.next.end());
  cur.next.erase(std::unique(cur.next.begin(), cur.next.end()), cur.next.end());
  out.push_back(std::move(cur));
}

const std::vector<BudgetTableau::Cover>& BudgetTableau::expand(int state, std::uint64_t letter) {
  auto key = std::make_pair(state, letter);
  auto it = expand_cache_.find(key);
  if (it != expand_cache_.end()) return it->second;
  std::vector<Cover> out;
  expand_rec(states_[state], {}, Cover{}, letter, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return expand_cache_.emplace(key, std::move(out)).first->second;
}

std::optional<int> BudgetTableau::advance(const Cover& cover, const CostVec& c) {
  std::vector<Obligation> next;
  for (const auto& p : cover.next) {
    if (!p.continuation) {
      next.push_back({p.node, p.budget});
      continue;
    }
    const Node& n = nodes_[p.node];
    std::uint64_t step = c.at(n.coord - 1);
    if (step > p.budget) {
      if (n.op == Op::param_eventually) return std::nullopt;
      continue;
    }
    next.push_back({p.node, p.budget - step});
  }
  return intern(std::move(next));
}

std::string BudgetTableau::describe(int state) const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& o : states_[state]) {
    os << (first ? "" : ", ") << nodes_[o.node].text;
    const Node& n = nodes_[o.node];
    if (n.op == Op::param_eventually || n.op == Op::param_always) os << " [" << o.budget << ']';
    first = false;
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// Fixed-valuation model checking

namespace {

struct MarkedEdge {
  int target;
  std::uint64_t marks;
};

std::vector<int> bfs_path(const std::vector<std::vector<MarkedEdge>>& g, int from, const std::vector<bool>& alive,
                          const std::function<bool(int)>& goal) {
  std::vector<int> parent(g.size(), -2);
  std::deque<int> q{from};
  parent[from] = -1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (goal(v)) {
      std::vector<int> path;
      for (int x = v; x != -1; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& e : g[v]) {
      if (!alive[e.target] || parent[e.target] != -2) continue;
      parent[e.target] = v;
      q.push_back(e.target);
    }
  }
  return {};
}

}  // namespace

FixedCheckResult fixed_valuation_check(const TransitionSystem& s, const Formula& phi, const Valuation& alpha,
                                       const BudgetOptions& opt) {
  BudgetTableau t(negate(phi), alpha, s.dimension, opt);
  std::vector<std::uint64_t> letters;
  for (const auto& l : s.labels) letters.push_back(t.letter_mask(l));

  std::vector<std::pair<int, int>> nodes;  // (state, tableau state)
  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<MarkedEdge>> g;
  auto node = [&](int st, int q) {
    auto [it, fresh] = index.emplace(std::make_pair(st, q), static_cast<int>(nodes.size()));
    if (fresh) {
      if (nodes.size() >= opt.max_states) throw StateLimitExceeded("fixed-valuation product state limit exceeded");
      nodes.push_back({st, q});
      g.emplace_back();
    }
    return it->second;
  };
  node(s.initial, t.initial());
  std::uint64_t all = t.all_marks();
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    auto [st, q] = nodes[v];
    std::map<int, std::uint64_t> out;
    std::vector<BudgetTableau::Cover> covers = t.expand(q, letters[st]);
    for (const auto& c : covers) {
      for (int e : s.out[st]) {
        auto q2 = t.advance(c, s.edges[e].cost);
        if (!q2) continue;
        int w = node(s.edges[e].to, *q2);
        out[w] |= all & ~c.postponed;
      }
    }
    for (auto [w, m] : out) g[v].push_back({w, m});
  }

  // Fair core: nodes with a path visiting every mark infinitely often.
  std::size_t n = nodes.size();
  Adjacency rev(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : g[v]) rev[e.target].push_back(static_cast<int>(v));
  }
  std::vector<bool> in(n, true);
  int m = t.eventualities();
  for (;;) {
    std::size_t before = std::count(in.begin(), in.end(), true);
    for (int k = 0; k < std::max(m, 1); ++k) {
      std::vector<bool> keep(n, false);
      std::deque<int> q;
      for (std::size_t v = 0; v < n; ++v) {
        if (!in[v]) continue;
        for (const auto& e : g[v]) {
          if (in[e.target] && (m == 0 || (e.marks >> k & 1))) {
            keep[v] = true;
            q.push_back(static_cast<int>(v));
            break;
          }
        }
      }
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : rev[v]) {
          if (in[u] && !keep[u]) {
            keep[u] = true;
            q.push_back(u);
          }
        }
      }
      for (std::size_t v = 0; v < n; ++v) in[v] = in[v] && keep[v];
    }
    if (static_cast<std::size_t>(std::count(in.begin(), in.end(), true)) == before) break;
  }

  FixedCheckResult r;
  r.product_states = n;
  if (std::find(in.begin(), in.end(), true) == in.end()) return r;
  r.holds = false;

  // A bottom component of the fair core carries every mark.
  Adjacency plain(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : g[v]) plain[v].push_back(e.target);
  }
  SccResult scc = strongly_connected(plain, &in);
  int bottom = 0;
  std::vector<bool> comp(n, false);
  for (std::size_t v = 0; v < n; ++v) comp[v] = in[v] && scc.comp[v] == bottom;
  std::vector<bool> everywhere(n, true);
  std::vector<int> stem = bfs_path(g, 0, everywhere, [&](int v) { return comp[v]; });
  int anchor = stem.back();
  std::vector<int> cycle{anchor};
  int at = anchor;
  for (int k = 0; k < std::max(m, 1); ++k) {
    std::vector<int> p = bfs_path(g, at, comp, [&](int v) {
      for (const auto& e : g[v]) {
        if (comp[e.target] && (m == 0 || (e.marks >> k & 1))) return true;
      }
      return false;
    });
    cycle.insert(cycle.end(), p.begin() + 1, p.end());
    for (const auto& e : g[p.back()]) {
      if (comp[e.target] && (m == 0 || (e.marks >> k & 1))) {
        cycle.push_back(e.target);
        at = e.target;
        break;
      }
    }
  }
  std::vector<int> back = bfs_path(g, at, comp, [&](int v) { return v == anchor; });
  cycle.insert(cycle.end(), back.begin() + 1, back.end());
  cycle.pop_back();
  for (std::size_t i = 0; i + 1 < stem.size(); ++i) r.stem.push_back(nodes[stem[i]].first);
  for (int v : cycle) r.loop.push_back(nodes[v].first);
  return r;
}

// ---------------------------------------------------------------------------
// Degeneralized automaton and fixed-valuation games

BudgetBuchi::BudgetBuchi(const Formula& f, const Valuation& alpha, int dimension, std::vector<Symbol> symbols,
                         const BudgetOptions& opt)
    : symbols_(std::move(symbols)), opt_(opt), tableau_(f, alpha, dimension, opt) {
  m_ = tableau_.eventualities();
  all_ = tableau_.all_marks();
  for (const auto& s : symbols_) letters_.push_back(tableau_.letter_mask(s.letter));
  state(tableau_.initial(), 0);
}

int BudgetBuchi::state(int q, int j) const {
  auto [it, fresh] = index_.emplace(std::make_pair(q, j), static_cast<int>(states_.size()));
  if (fresh) {
    if (states_.size() >= opt_.max_states) throw StateLimitExceeded("budget automaton state limit exceeded");
    states_.push_back({q, j});
    succ_.emplace_back(symbols_.size());
  }
  return it->second;
}

const std::vector<int>& BudgetBuchi::successors(int i, int sym) const {
  if (succ_[i][sym]) return *succ_[i][sym];
  auto [q, j] = states_[i];
  std::vector<int> out;
  std::vector<BudgetTableau::Cover> covers = tableau_.expand(q, letters_[sym]);
  for (const auto& c : covers) {
    auto q2 = tableau_.advance(c, symbols_[sym].cost);
    if (!q2) continue;
    std::uint64_t marks = all_ & ~c.postponed;
    int j2 = j == m_ ? 0 : j;
    while (j2 < m_ && (marks >> j2 & 1)) ++j2;
    out.push_back(state(*q2, j2));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  succ_[i][sym] = std::move(out);
  return *succ_[i][sym];
}

Arena swap_players(const Arena& a) {
  Arena b = a;
  for (auto& o : b.owner) o = 1 - o;
  return b;
}

FixedGameResult fixed_valuation_game(const Arena& a, const Formula& phi, const Valuation& alpha,
                                     const BudgetOptions& opt) {
  std::vector<BudgetBuchi::Symbol> symbols;
  std::vector<int> edge_symbol(a.edges.size());
  {
    std::map<BudgetBuchi::Symbol, int> ids;
    for (std::size_t e = 0; e < a.edges.size(); ++e) {
      BudgetBuchi::Symbol s{a.labels[a.edges[e].from], a.edges[e].cost};
      auto [it, fresh] = ids.emplace(s, static_cast<int>(symbols.size()));
      if (fresh) symbols.push_back(s);
      edge_symbol[e] = it->second;
    }
  }
  BudgetBuchi nba(phi, alpha, a.dimension, symbols, opt);
  SafraDeterminizer<BudgetBuchi, int> dpa(nba, opt.max_states);

  std::vector<std::pair<int, int>> verts;  // (arena vertex, dpa state)
  std::map<std::pair<int, int>, int> index;
  ParityGame game;
  auto vertex = [&](int v, int d) {
    auto [it, fresh] = index.emplace(std::make_pair(v, d), static_cast<int>(verts.size()));
    if (fresh) {
      if (verts.size() >= opt.max_states) throw StateLimitExceeded("fixed-valuation game state limit exceeded");
      verts.push_back({v, d});
      game.owner.push_back(a.owner[v]);
      game.priority.push_back(dpa.priority(d));
      game.succ.emplace_back();
    }
    return it->second;
  };
  vertex(a.initial, dpa.initial());
  for (std::size_t i = 0; i < verts.size(); ++i) {
    auto [v, d] = verts[i];
    for (int e : a.out[v]) {
      int w = vertex(a.edges[e].to, dpa.step(d, edge_symbol[e]));
      game.succ[i].push_back(w);
    }
  }
  game.initial = 0;
  ParitySolution sol = solve_parity(game);

  FixedGameResult r;
  r.product_states = verts.size();
  r.player0_wins = sol.winner[0] == 0;
  if (!r.player0_wins) return r;
  Strategy st;
  std::size_t n = verts.size();
  st.initial_memory = 0;
  st.update.assign(n, std::vector<int>(a.size(), 0));
  st.next.assign(n, std::vector<int>(a.size(), -1));
  for (std::size_t i = 0; i < n; ++i) {
    auto [v, d] = verts[i];
    for (std::size_t u = 0; u < a.size(); ++u) {
      st.update[i][u] = static_cast<int>(i);
      if (a.owner[u] == 0) st.next[i][u] = a.edges[a.out[u].front()].to;
    }
    for (std::size_t k = 0; k < a.out[v].size(); ++k) {
      int to = a.edges[a.out[v][k]].to;
      st.update[i][to] = game.succ[i][k];
    }
    if (a.owner[v] == 0 && sol.strategy[i] >= 0) st.next[i][v] = verts[sol.strategy[i]].first;
  }
  r.strategy = std::move(st);
  return r;
}

}  // namespace costal
