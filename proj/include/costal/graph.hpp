#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

namespace costal {

using Adjacency = std::vector<std::vector<int>>;

/// Strongly connected components (iterative Tarjan). comp[v] numbers components in
/// reverse topological order; `nontrivial[c]` is true iff c contains a cycle.
struct SccResult {
  std::vector<int> comp;
  std::vector<bool> nontrivial;
  int count = 0;
};

inline SccResult strongly_connected(const Adjacency& g, const std::vector<bool>* alive = nullptr) {
  int n = static_cast<int>(g.size());
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<int, std::size_t>> work;
  int counter = 0;
  auto ok = [&](int v) { return !alive || (*alive)[v]; };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1 || !ok(root)) continue;
    work.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!work.empty()) {
      auto& [v, i] = work.back();
      if (i < g[v].size()) {
        int w = g[v][i++];
        if (!ok(w)) continue;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      int done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
      if (low[done] == index[done]) {
        int c = r.count++;
        bool self = false;
        int size = 0;
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          r.comp[w] = c;
          ++size;
          if (w == done) break;
        }
        for (int w : g[done]) self = self || w == done;
        r.nontrivial.push_back(size > 1 || self);
      }
    }
  }
  return r;
}

/// Vertices reachable from the sources (BFS), optionally restricted to `alive`.
inline std::vector<bool> reachable(const Adjacency& g, const std::vector<int>& sources,
                                   const std::vector<bool>* alive = nullptr) {
  std::vector<bool> seen(g.size(), false);
  std::deque<int> q;
  for (int s : sources) {
    if (alive && !(*alive)[s]) continue;
    if (!seen[s]) {
      seen[s] = true;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int w : g[v]) {
      if (seen[w] || (alive && !(*alive)[w])) continue;
      seen[w] = true;
      q.push_back(w);
    }
  }
  return seen;
}

inline Adjacency reverse(const Adjacency& g) {
  Adjacency r(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (int w : g[v]) r[w].push_back(static_cast<int>(v));
  }
  return r;
}

/// Shortest path from any source to a target satisfying `is_target` (BFS, inclusive
/// of both ends). Empty if none.
template <class Pred>
std::vector<int> shortest_path(const Adjacency& g, const std::vector<int>& sources, Pred is_target,
                               const std::vector<bool>* alive = nullptr) {
  std::vector<int> parent(g.size(), -2);
  std::deque<int> q;
  for (int s : sources) {
    if (alive && !(*alive)[s]) continue;
    if (parent[s] == -2) {
      parent[s] = -1;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (is_target(v)) {
      std::vector<int> path;
      for (int x = v; x != -1; x = parent[x]) path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int w : g[v]) {
      if (parent[w] != -2 || (alive && !(*alive)[w])) continue;
      parent[w] = v;
      q.push_back(w);
    }
  }
  return {};
}

}  // namespace costal
