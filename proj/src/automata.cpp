#include "costal/automata.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "costal/graph.hpp"

namespace costal {

Universe::Universe(const std::set<std::string>& props) : names_(props.begin(), props.end()) {
  if (names_.size() > 64) throw std::invalid_argument("universe has more than 64 propositions");
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<int>(i);
}

int Universe::index(const std::string& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

LetterMask Universe::mask(const Letter& l) const {
  LetterMask m = 0;
  for (const auto& p : l) {
    int i = index(p);
    if (i >= 0) m |= LetterMask{1} << i;
  }
  return m;
}

Letter Universe::letter(LetterMask m) const {
  Letter l;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (m >> i & 1) l.insert(names_[i]);
  }
  return l;
}

std::vector<int> BuchiAutomaton::successors(int q, LetterMask letter) const {
  std::vector<int> out;
  for (const auto& e : edges[q]) {
    if (e.guard.matches(letter)) out.push_back(e.target);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Tableau

namespace {

struct TNode {
  Op op;
  int a = -1, b = -1;
  int bit = -1;       // universe index for literals, -1 for the reserved false atom
  int until = -1;     // index among until nodes
};

struct Cover {
  Guard guard;
  std::vector<int> next;  // sorted obligation ids
  std::uint64_t postponed = 0;
  friend bool operator==(const Cover&, const Cover&) = default;
  friend auto operator<=>(const Cover&, const Cover&) = default;
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
    return h;
  }
};

class Tableau {
 public:
  Tableau(const Formula& f, const Universe& u) {
    for (const auto& p : atoms(f)) {
      if (p != kFalseAtom && !u.contains(p)) {
        throw std::invalid_argument("universe is missing proposition '" + p + "'");
      }
    }
    root_ = intern(f, u);
    if (untils_ > 64) throw std::invalid_argument("formula has more than 64 until operators");
  }

  int root() const { return root_; }
  int untils() const { return untils_; }

  std::vector<Cover> expand(const std::vector<int>& state) {
    std::vector<Cover> out;
    std::vector<char> done(nodes_.size(), 0), next(nodes_.size(), 0);
    go(state, done, Guard{}, next, 0, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    // Drop covers with a stronger guard, more obligations and more postponed untils than another.
    auto dominates = [](const Cover& a, const Cover& b) {
      return (a.guard.pos & ~b.guard.pos) == 0 && (a.guard.neg & ~b.guard.neg) == 0 &&
             (a.postponed & ~b.postponed) == 0 && std::includes(b.next.begin(), b.next.end(), a.next.begin(), a.next.end());
    };
    std::vector<Cover> kept;
    for (std::size_t i = 0; i < out.size(); ++i) {
      bool drop = false;
      for (std::size_t j = 0; j < out.size() && !drop; ++j) drop = j != i && dominates(out[j], out[i]);
      if (!drop) kept.push_back(out[i]);
    }
    return kept;
  }

 private:
  int intern(const Formula& f, const Universe& u) {
    auto it = ids_.find(f.to_string());
    if (it != ids_.end()) return it->second;
    TNode n;
    n.op = f.op();
    switch (f.op()) {
      case Op::atom:
      case Op::neg_atom:
        n.bit = f.name() == kFalseAtom ? -1 : u.index(f.name());
        break;
      case Op::next:
        n.a = intern(f.lhs(), u);
        break;
      case Op::conj:
      case Op::disj:
      case Op::until:
      case Op::release:
        n.a = intern(f.lhs(), u);
        n.b = intern(f.rhs(), u);
        if (f.op() == Op::until) n.until = untils_++;
        break;
      case Op::param_eventually:
      case Op::param_always:
        throw std::invalid_argument("ltl_to_nba: formula has parameterized operators");
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    ids_.emplace(f.to_string(), id);
    return id;
  }

  void go(std::vector<int> todo, std::vector<char> done, Guard g, std::vector<char> next,
          std::uint64_t postponed, std::vector<Cover>& out) {
    while (!todo.empty()) {
      int f = todo.back();
      todo.pop_back();
      if (done[f]) continue;
      done[f] = 1;
      const TNode& n = nodes_[f];
      switch (n.op) {
        case Op::atom:
          if (n.bit < 0) return;
          g.pos |= LetterMask{1} << n.bit;
          if (g.pos & g.neg) return;
          break;
        case Op::neg_atom:
          if (n.bit < 0) break;
          g.neg |= LetterMask{1} << n.bit;
          if (g.pos & g.neg) return;
          break;
        case Op::conj:
          todo.push_back(n.b);
          todo.push_back(n.a);
          break;
        case Op::disj: {
          if (done[n.a] || done[n.b]) break;
          auto t1 = todo;
          t1.push_back(n.a);
          go(std::move(t1), done, g, next, postponed, out);
          todo.push_back(n.b);
          break;
        }
        case Op::next:
          next[n.a] = 1;
          break;
        case Op::until: {
          if (done[n.b]) break;
          auto t1 = todo;
          t1.push_back(n.b);
          go(std::move(t1), done, g, next, postponed, out);
          todo.push_back(n.a);
          next[f] = 1;
          postponed |= std::uint64_t{1} << n.until;
          break;
        }
        case Op::release: {
          auto t1 = todo;
          t1.push_back(n.b);
          t1.push_back(n.a);
          go(std::move(t1), done, g, next, postponed, out);
          todo.push_back(n.b);
          next[f] = 1;
          break;
        }
        default:
          throw std::logic_error("tableau: unexpected node");
      }
    }
    Cover c;
    c.guard = g;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (next[i]) c.next.push_back(static_cast<int>(i));
    }
    c.postponed = postponed;
    out.push_back(std::move(c));
  }

  std::vector<TNode> nodes_;
  std::unordered_map<std::string, int> ids_;
  int root_ = -1;
  int untils_ = 0;
};

BuchiAutomaton trim(const BuchiAutomaton& a) {
  std::size_t n = a.size();
  Adjacency g(n);
  for (std::size_t q = 0; q < n; ++q) {
    for (const auto& e : a.edges[q]) g[q].push_back(e.target);
  }
  std::vector<bool> live = reachable(g, {a.initial});
  SccResult scc = strongly_connected(g, &live);
  std::vector<bool> good_comp(scc.count, false);
  for (std::size_t q = 0; q < n; ++q) {
    if (live[q] && a.accepting[q] && scc.nontrivial[scc.comp[q]]) good_comp[scc.comp[q]] = true;
  }
  std::vector<int> seeds;
  for (std::size_t q = 0; q < n; ++q) {
    if (live[q] && good_comp[scc.comp[q]]) seeds.push_back(static_cast<int>(q));
  }
  std::vector<bool> productive = reachable(reverse(g), seeds, &live);

  BuchiAutomaton out;
  out.universe = a.universe;
  std::vector<int> rename(n, -1);
  if (!productive[a.initial]) {
    out.initial = 0;
    out.edges.resize(1);
    out.accepting.assign(1, false);
    return out;
  }
  // Keep the initial state first and the rest in BFS order for stable numbering.
  std::vector<int> order{a.initial};
  rename[a.initial] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& e : a.edges[order[i]]) {
      if (productive[e.target] && rename[e.target] < 0) {
        rename[e.target] = static_cast<int>(order.size());
        order.push_back(e.target);
      }
    }
  }
  out.initial = 0;
  out.edges.resize(order.size());
  out.accepting.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.accepting[i] = a.accepting[order[i]];
    for (const auto& e : a.edges[order[i]]) {
      if (rename[e.target] >= 0) out.edges[i].push_back({e.guard, rename[e.target]});
    }
    std::sort(out.edges[i].begin(), out.edges[i].end());
    out.edges[i].erase(std::unique(out.edges[i].begin(), out.edges[i].end()), out.edges[i].end());
  }
  return out;
}

BuchiAutomaton bisimulation_quotient(const BuchiAutomaton& a) {
  std::size_t n = a.size();
  std::vector<int> block(n);
  for (std::size_t q = 0; q < n; ++q) block[q] = a.accepting[q] ? 1 : 0;
  int blocks = -1;
  for (;;) {
    std::map<std::pair<int, std::vector<std::pair<Guard, int>>>, int> sig;
    std::vector<int> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::pair<Guard, int>> s;
      for (const auto& e : a.edges[q]) s.push_back({e.guard, block[e.target]});
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      auto key = std::make_pair(block[q], std::move(s));
      auto it = sig.find(key);
      if (it == sig.end()) it = sig.emplace(std::move(key), static_cast<int>(sig.size())).first;
      next[q] = it->second;
    }
    block = std::move(next);
    if (static_cast<int>(sig.size()) == blocks) break;
    blocks = static_cast<int>(sig.size());
  }
  // Renumber blocks so the initial state's block is 0 and the rest follow first occurrence.
  std::vector<int> rename(blocks, -1);
  int count = 0;
  rename[block[a.initial]] = count++;
  for (std::size_t q = 0; q < n; ++q) {
    if (rename[block[q]] < 0) rename[block[q]] = count++;
  }
  BuchiAutomaton out;
  out.universe = a.universe;
  out.initial = 0;
  out.edges.resize(count);
  out.accepting.resize(count);
  for (std::size_t q = 0; q < n; ++q) {
    int b = rename[block[q]];
    out.accepting[b] = a.accepting[q];
    for (const auto& e : a.edges[q]) out.edges[b].push_back({e.guard, rename[block[e.target]]});
  }
  for (auto& es : out.edges) {
    std::sort(es.begin(), es.end());
    es.erase(std::unique(es.begin(), es.end()), es.end());
  }
  return out;
}

}  // namespace

BuchiAutomaton ltl_to_nba(const Formula& f, const Universe& u, std::size_t max_states) {
  Tableau t(f, u);
  int m = t.untils();

  // Obligation sets, degeneralized on the fly with a counter j in [0, m]; j == m
  // marks acceptance.
  std::vector<std::vector<int>> sets{{t.root()}};
  std::unordered_map<std::vector<int>, int, VecHash> set_ids{{sets[0], 0}};
  std::vector<std::vector<Cover>> covers{t.expand(sets[0])};
  std::vector<std::pair<int, int>> states{{0, 0}};
  std::map<std::pair<int, int>, int> ids{{states[0], 0}};
  BuchiAutomaton raw;
  raw.universe = u;
  raw.initial = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [sid, j] = states[i];
    raw.accepting.push_back(j == m);
    int j0 = j == m ? 0 : j;
    std::vector<NbaEdge> out;
    for (std::size_t ci = 0; ci < covers[sid].size(); ++ci) {
      Cover c = covers[sid][ci];
      auto [sit, fresh_set] = set_ids.emplace(c.next, static_cast<int>(sets.size()));
      if (fresh_set) {
        sets.push_back(c.next);
        covers.push_back(t.expand(sets.back()));
      }
      int k = j0;
      while (k < m && !(c.postponed >> k & 1)) ++k;
      auto [it, fresh] = ids.emplace(std::make_pair(sit->second, k), static_cast<int>(states.size()));
      if (fresh) {
        if (states.size() >= max_states) throw StateLimitExceeded("ltl_to_nba: state limit exceeded");
        states.emplace_back(sit->second, k);
      }
      out.push_back({c.guard, it->second});
    }
    raw.edges.push_back(std::move(out));
  }
  return bisimulation_quotient(trim(raw));
}

BuchiAutomaton intersect_nba(const BuchiAutomaton& a, const BuchiAutomaton& b, std::size_t max_states) {
  if (!(a.universe == b.universe)) throw std::invalid_argument("intersect_nba: universes differ");
  // (qa, qb, phase): phase 0 waits for an accepting state of a, phase 1 for one of b.
  std::vector<std::array<int, 3>> states{{a.initial, b.initial, 0}};
  std::map<std::array<int, 3>, int> ids{{states[0], 0}};
  BuchiAutomaton raw;
  raw.universe = a.universe;
  raw.initial = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [p, q, phase] = states[i];
    int next_phase = phase == 0 ? (a.accepting[p] ? 1 : 0) : (b.accepting[q] ? 0 : 1);
    raw.accepting.push_back(phase == 1 && b.accepting[q]);
    std::vector<NbaEdge> out;
    for (const auto& ea : a.edges[p]) {
      for (const auto& eb : b.edges[q]) {
        Guard g{ea.guard.pos | eb.guard.pos, ea.guard.neg | eb.guard.neg};
        if (g.pos & g.neg) continue;
        std::array<int, 3> t{ea.target, eb.target, next_phase};
        auto [it, fresh] = ids.emplace(t, static_cast<int>(states.size()));
        if (fresh) {
          if (states.size() >= max_states) throw StateLimitExceeded("intersect_nba: state limit exceeded");
          states.push_back(t);
        }
        out.push_back({g, it->second});
      }
    }
    raw.edges.push_back(std::move(out));
  }
  return bisimulation_quotient(trim(raw));
}

BuchiAutomaton conjunction_to_nba(const Formula& f, const Universe& u, std::size_t max_states) {
  std::vector<Formula> parts, todo{f};
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (g.op() == Op::conj) {
      todo.push_back(g.lhs());
      todo.push_back(g.rhs());
    } else {
      parts.push_back(g);
    }
  }
  BuchiAutomaton acc = ltl_to_nba(parts.back(), u, max_states);
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = intersect_nba(ltl_to_nba(parts[i], u, max_states), acc, max_states);
  return acc;
}

bool nba_accepts_lasso(const BuchiAutomaton& a, const CostTrace& w) {
  std::size_t L = w.lasso_length();
  std::size_t n = a.size() * L;
  Adjacency g(n);
  for (std::size_t q = 0; q < a.size(); ++q) {
    for (std::size_t p = 0; p < L; ++p) {
      LetterMask l = a.universe.mask(w.at(p).letter);
      for (int t : a.successors(static_cast<int>(q), l)) {
        g[q * L + p].push_back(static_cast<int>(t * L + w.successor(p)));
      }
    }
  }
  std::vector<bool> live = reachable(g, {static_cast<int>(a.initial * L)});
  SccResult scc = strongly_connected(g, &live);
  for (std::size_t v = 0; v < n; ++v) {
    if (live[v] && a.accepting[v / L] && scc.nontrivial[scc.comp[v]]) return true;
  }
  return false;
}

bool nba_is_empty(const BuchiAutomaton& a) {
  Adjacency g(a.size());
  for (std::size_t q = 0; q < a.size(); ++q) {
    for (const auto& e : a.edges[q]) g[q].push_back(e.target);
  }
  std::vector<bool> live = reachable(g, {a.initial});
  SccResult scc = strongly_connected(g, &live);
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (live[q] && a.accepting[q] && scc.nontrivial[scc.comp[q]]) return false;
  }
  return true;
}

std::string to_hoa(const BuchiAutomaton& a, const std::string& name) {
  std::ostringstream os;
  os << "HOA: v1\n";
  if (!name.empty()) os << "name: \"" << name << "\"\n";
  os << "States: " << a.size() << "\n";
  os << "Start: " << a.initial << "\n";
  os << "AP: " << a.universe.size();
  for (const auto& p : a.universe.names()) os << " \"" << p << "\"";
  os << "\nacc-name: Buchi\nAcceptance: 1 Inf(0)\n";
  os << "properties: trans-labels explicit-labels state-acc\n--BODY--\n";
  for (std::size_t q = 0; q < a.size(); ++q) {
    os << "State: " << q;
    if (a.accepting[q]) os << " {0}";
    os << "\n";
    for (const auto& e : a.edges[q]) {
      std::string label;
      for (std::size_t i = 0; i < a.universe.size(); ++i) {
        if (e.guard.pos >> i & 1) label += (label.empty() ? "" : "&") + std::to_string(i);
        if (e.guard.neg >> i & 1) label += (label.empty() ? "!" : "&!") + std::to_string(i);
      }
      os << "[" << (label.empty() ? "t" : label) << "] " << e.target << "\n";
    }
  }
  os << "--END--\n";
  return os.str();
}

}  // namespace costal
