#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "costal/formula.hpp"
#include "costal/trace.hpp"

namespace costal {

/// Replaces every F[<=x@i] psi by "rel(psi) within at most one change of @color_i".
/// Throws std::invalid_argument on a param-always node.
Formula relativize(const Formula& f, int dimension = 1);

/// Conjunction over coordinates of (GF c_i & GF !c_i) <-> GF kappa_i, in NNF.
Formula build_chi(int dimension);
/// The conjunct of build_chi for one coordinate.
Formula chi_component(int coord, int dimension);

/// A coloring is a trace whose letters additionally carry @color / @color_i.
using Coloring = CostTrace;

/// True iff c agrees with base on everything except color propositions.
bool is_coloring_of(const Coloring& c, const CostTrace& base);

bool color_at(const Coloring& c, std::size_t n, int coord);

struct Block {
  std::size_t begin;  // first position
  std::size_t end;    // last position (inclusive)
};

/// Changepoints and blocks of one color coordinate. For colorings with infinitely
/// many changepoints, only the blocks starting in a window of prefix + 3 cycles
/// are listed; every later block repeats one of them.
struct BlockDecomposition {
  std::vector<std::size_t> changepoints;
  std::vector<Block> blocks;
  std::optional<std::size_t> tail_start;
};

BlockDecomposition decompose(const Coloring& c, int coord);

/// Cost of a block: all steps leaving its positions, including the last one.
std::uint64_t block_cost(const Coloring& c, const Block& b, int coord);

bool is_k_bounded(const Coloring& c, std::uint64_t k, int coord);
bool is_k_spaced(const Coloring& c, std::uint64_t k, int coord);

/// Largest step cost of the trace in coordinate `coord`.
std::uint64_t max_step_cost(const CostTrace& w, int coord);

/// Greedy coloring starting with the color absent: a block ends at the first position
/// where its cost reaches the threshold. The threshold is `low`, or with a jitter seed
/// a deterministic pseudo-random value in [low, high - W + 1] per block. The result is
/// high-bounded and low-spaced. Requires high >= low + W.
Coloring make_coloring(const CostTrace& w, std::uint64_t low, std::uint64_t high, int coord,
                       std::optional<std::uint64_t> jitter_seed = std::nullopt,
                       std::size_t max_length = 1 << 16);

}  // namespace costal
