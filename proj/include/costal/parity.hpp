#pragma once

#include <vector>

namespace costal {

/// Two-player parity game with max-even winning condition for Player 0.
struct ParityGame {
  std::vector<int> owner;  // 0 or 1
  std::vector<std::vector<int>> succ;
  std::vector<int> priority;
  int initial = 0;

  std::size_t size() const { return owner.size(); }
};

struct ParitySolution {
  std::vector<int> winner;    // per vertex
  std::vector<int> strategy;  // successor for vertices won by their owner, -1 otherwise
};

/// Recursive attractor decomposition. Throws std::invalid_argument on a dead end.
ParitySolution solve_parity(const ParityGame& g);

}  // namespace costal
