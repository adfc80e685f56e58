#include "costal/parity.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace costal {

namespace {

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()) {
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (g.succ[v].empty()) throw std::invalid_argument("parity game vertex without successor");
      for (int w : g.succ[v]) pred_[w].push_back(static_cast<int>(v));
    }
    strategy_.assign(g.size(), -1);
  }

  ParitySolution run() {
    std::vector<char> all(g_.size(), 1);
    auto [w0, w1] = solve(all);
    ParitySolution s;
    s.winner.assign(g_.size(), -1);
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (w0[v] == w1[v]) throw std::logic_error("parity solver: regions do not partition the vertices");
      s.winner[v] = w0[v] ? 0 : 1;
      if (g_.owner[v] != s.winner[v]) strategy_[v] = -1;
    }
    s.strategy = strategy_;
    return s;
  }

 private:
  // Attractor of `target` for `player` inside `game`; records attractor moves.
  std::vector<char> attractor(const std::vector<char>& game, const std::vector<char>& target, int player) {
    std::vector<char> attr = target;
    std::vector<int> count(g_.size(), 0);
    std::deque<int> q;
    for (std::size_t v = 0; v < g_.size(); ++v) {
      if (!game[v]) continue;
      if (attr[v]) q.push_back(static_cast<int>(v));
      for (int w : g_.succ[v]) count[v] += game[w] ? 1 : 0;
    }
    while (!q.empty()) {
      int w = q.front();
      q.pop_front();
      for (int v : pred_[w]) {
        if (!game[v] || attr[v]) continue;
        if (g_.owner[v] == player) {
          attr[v] = 1;
          strategy_[v] = w;
          q.push_back(v);
        } else if (--count[v] == 0) {
          attr[v] = 1;
          q.push_back(v);
        }
      }
    }
    return attr;
  }

  std::pair<std::vector<char>, std::vector<char>> solve(const std::vector<char>& game) {
    std::size_t n = g_.size();
    std::vector<char> w[2] = {std::vector<char>(n, 0), std::vector<char>(n, 0)};
    int top = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (game[v]) top = std::max(top, g_.priority[v]);
    }
    if (top < 0) return {w[0], w[1]};
    int i = top % 2;
    std::vector<char> u(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (game[v] && g_.priority[v] == top) u[v] = 1;
    }
    std::vector<char> a = attractor(game, u, i);
    std::vector<char> rest(n, 0);
    for (std::size_t v = 0; v < n; ++v) rest[v] = game[v] && !a[v];
    auto sub = solve(rest);
    std::vector<char>* sw[2] = {&sub.first, &sub.second};
    bool opponent_empty = std::none_of(sw[1 - i]->begin(), sw[1 - i]->end(), [](char c) { return c != 0; });
    if (opponent_empty) {
      for (std::size_t v = 0; v < n; ++v) {
        if (!game[v]) continue;
        w[i][v] = 1;
        if (u[v] && g_.owner[v] == i) {
          for (int x : g_.succ[v]) {
            if (game[x]) {
              strategy_[v] = x;
              break;
            }
          }
        }
      }
      return {w[0], w[1]};
    }
    std::vector<char> b = attractor(game, *sw[1 - i], 1 - i);
    std::vector<char> rest2(n, 0);
    for (std::size_t v = 0; v < n; ++v) rest2[v] = game[v] && !b[v];
    auto sub2 = solve(rest2);
    std::vector<char>* sw2[2] = {&sub2.first, &sub2.second};
    for (std::size_t v = 0; v < n; ++v) {
      w[i][v] = (*sw2[i])[v];
      w[1 - i][v] = (*sw2[1 - i])[v] || b[v];
    }
    return {w[0], w[1]};
  }

  const ParityGame& g_;
  std::vector<std::vector<int>> pred_;
  std::vector<int> strategy_;
};

}  // namespace

ParitySolution solve_parity(const ParityGame& g) { return Zielonka(g).run(); }

}  // namespace costal
