#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "costal/automata.hpp"

namespace costal {

/// Deterministic parity automaton over an explicit symbol list, state-based
/// priorities, max-even acceptance.
struct ParityAutomaton {
  std::vector<LetterMask> alphabet;  // symbol index -> letter
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state][symbol]
  std::vector<int> priority;

  std::size_t size() const { return delta.size(); }
  int symbol(LetterMask l) const;
};

/// Safra-tree determinization producing state-based max-even priorities.
///
/// `Source` provides size(), initial(), accepting(q) and successors(q, sym), the
/// latter returning the sorted successor list for a symbol of type `Sym`. States are
/// generated lazily by step(); each state's priority reflects the events of the step
/// that produced it.
template <class Source, class Sym>
class SafraDeterminizer {
 public:
  explicit SafraDeterminizer(const Source& src, std::size_t max_states = 1000000)
      : src_(src), n_(static_cast<int>(src.size())), max_states_(max_states) {
    Tree t;
    t.nodes.push_back({-1, {src_.initial()}});
    initial_ = intern(t, 1);
  }

  int initial() const { return initial_; }
  std::size_t size() const { return trees_.size(); }
  int priority(int d) const { return priorities_[d]; }
  int max_priority() const { return 2 * n_ + 1; }

  int step(int d, const Sym& sym) {
    auto key = std::make_pair(d, sym);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    int pr = 1;
    Tree t = advance(trees_[d], sym, pr);
    int r = intern(t, pr);
    cache_.emplace(key, r);
    return r;
  }

 private:
  struct Node {
    int parent;
    std::vector<int> label;  // sorted
  };
  struct Tree {
    std::vector<Node> nodes;  // age order: index is rank, parent < index
  };
  struct PairHash {
    std::size_t operator()(const std::pair<int, Sym>& p) const {
      return std::hash<int>()(p.first) * 1000003u ^ std::hash<Sym>()(p.second);
    }
  };
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::size_t h = v.size();
      for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
      return h;
    }
  };

  static std::vector<int> encode(const Tree& t, int pr) {
    std::vector<int> k{pr, static_cast<int>(t.nodes.size())};
    for (const auto& n : t.nodes) {
      k.push_back(n.parent);
      k.push_back(static_cast<int>(n.label.size()));
      k.insert(k.end(), n.label.begin(), n.label.end());
    }
    return k;
  }

  int intern(const Tree& t, int pr) {
    std::vector<int> k = encode(t, pr);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    if (trees_.size() >= max_states_) throw StateLimitExceeded("determinization state limit exceeded");
    int id = static_cast<int>(trees_.size());
    trees_.push_back(t);
    priorities_.push_back(pr);
    ids_.emplace(std::move(k), id);
    return id;
  }

  Tree advance(const Tree& old, const Sym& sym, int& pr) {
    int old_n = static_cast<int>(old.nodes.size());
    std::vector<Node> nodes = old.nodes;
    // Spawn a youngest child holding the accepting states of each node.
    for (int i = 0; i < old_n; ++i) {
      std::vector<int> acc;
      for (int q : nodes[i].label) {
        if (src_.accepting(q)) acc.push_back(q);
      }
      if (!acc.empty()) nodes.push_back({i, std::move(acc)});
    }
    // Successors.
    for (auto& n : nodes) {
      std::vector<int> next;
      for (int q : n.label) {
        const auto& s = src_.successors(q, sym);
        next.insert(next.end(), s.begin(), s.end());
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      n.label = std::move(next);
    }
    int total = static_cast<int>(nodes.size());
    std::vector<std::vector<int>> children(total);
    for (int i = 1; i < total; ++i) children[nodes[i].parent].push_back(i);
    // Horizontal merge: a state stays only in the oldest branch holding it.
    std::vector<bool> removed(total, false);
    std::function<void(int, const std::vector<int>&)> restrict = [&](int v, const std::vector<int>& allowed) {
      std::vector<int> kept;
      std::set_intersection(nodes[v].label.begin(), nodes[v].label.end(), allowed.begin(), allowed.end(),
                            std::back_inserter(kept));
      nodes[v].label = std::move(kept);
      std::vector<int> used;
      for (int c : children[v]) {
        std::vector<int> avail;
        std::set_difference(nodes[v].label.begin(), nodes[v].label.end(), used.begin(), used.end(),
                            std::back_inserter(avail));
        restrict(c, avail);
        std::vector<int> u2;
        std::set_union(used.begin(), used.end(), nodes[c].label.begin(), nodes[c].label.end(),
                       std::back_inserter(u2));
        used = std::move(u2);
      }
    };
    if (total > 0) restrict(0, nodes[0].label);
    for (int i = 0; i < total; ++i) {
      if (nodes[i].label.empty()) removed[i] = true;
    }
    // Vertical merge: a node whose children cover its label flashes and loses its subtree.
    std::vector<bool> flashed(total, false);
    std::function<void(int)> remove_subtree = [&](int v) {
      for (int c : children[v]) {
        removed[c] = true;
        remove_subtree(c);
      }
    };
    std::function<void(int)> vertical = [&](int v) {
      if (removed[v]) return;
      std::vector<int> cover;
      bool any = false;
      for (int c : children[v]) {
        if (removed[c]) continue;
        any = true;
        cover.insert(cover.end(), nodes[c].label.begin(), nodes[c].label.end());
      }
      std::sort(cover.begin(), cover.end());
      cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
      if (any && cover == nodes[v].label) {
        flashed[v] = true;
        remove_subtree(v);
        return;
      }
      for (int c : children[v]) vertical(c);
    };
    if (total > 0) vertical(0);

    pr = 1;
    for (int i = 0; i < old_n; ++i) {
      if (removed[i]) pr = std::max(pr, 2 * (n_ - i) + 1);
      else if (flashed[i]) pr = std::max(pr, 2 * (n_ - i));
    }
    Tree out;
    std::vector<int> rename(total, -1);
    for (int i = 0; i < total; ++i) {
      if (removed[i]) continue;
      rename[i] = static_cast<int>(out.nodes.size());
      out.nodes.push_back({i == 0 ? -1 : rename[nodes[i].parent], nodes[i].label});
    }
    return out;
  }

  const Source& src_;
  int n_;
  std::size_t max_states_;
  int initial_ = 0;
  std::vector<Tree> trees_;
  std::vector<int> priorities_;
  std::unordered_map<std::vector<int>, int, VecHash> ids_;
  std::unordered_map<std::pair<int, Sym>, int, PairHash> cache_;
};

/// Explicit determinization over every letter of the universe.
ParityAutomaton determinize(const BuchiAutomaton& a, std::size_t max_states = 1000000);

bool dpa_accepts_lasso(const ParityAutomaton& d, const CostTrace& w, const Universe& u);

}  // namespace costal
