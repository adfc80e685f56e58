#include "costal/altcolor.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace costal {

Formula relativize(const Formula& f, int dimension) {
  switch (f.op()) {
    case Op::atom:
    case Op::neg_atom:
      return f;
    case Op::conj: return Formula::conj(relativize(f.lhs(), dimension), relativize(f.rhs(), dimension));
    case Op::disj: return Formula::disj(relativize(f.lhs(), dimension), relativize(f.rhs(), dimension));
    case Op::next: return Formula::next(relativize(f.lhs(), dimension));
    case Op::until: return Formula::until(relativize(f.lhs(), dimension), relativize(f.rhs(), dimension));
    case Op::release:
      return Formula::release(relativize(f.lhs(), dimension), relativize(f.rhs(), dimension));
    case Op::param_eventually: {
      if (f.coord() > dimension) throw std::invalid_argument("coordinate exceeds dimension");
      Formula r = relativize(f.lhs(), dimension);
      Formula c = Formula::atom(color_name(f.coord(), dimension));
      Formula nc = Formula::neg_atom(color_name(f.coord(), dimension));
      return Formula::conj(Formula::disj(nc, Formula::until(c, Formula::until(nc, r))),
                           Formula::disj(c, Formula::until(nc, Formula::until(c, r))));
    }
    case Op::param_always:
      throw std::invalid_argument("relativize: parameterized always operator (eliminate it first)");
  }
  throw std::logic_error("relativize: unknown node");
}

Formula chi_component(int coord, int dimension) {
  using F = Formula;
  F c = F::atom(color_name(coord, dimension));
  F nc = F::neg_atom(color_name(coord, dimension));
  F k = F::atom(kappa_name(coord, dimension));
  F nk = F::neg_atom(kappa_name(coord, dimension));
  F alternating = F::conj(F::always(F::eventually(c)), F::always(F::eventually(nc)));
  F settles = F::disj(F::eventually(F::always(nc)), F::eventually(F::always(c)));
  return F::conj(F::disj(settles, F::always(F::eventually(k))), F::disj(alternating, F::eventually(F::always(nk))));
}

Formula build_chi(int dimension) {
  std::optional<Formula> chi;
  for (int i = 1; i <= dimension; ++i) {
    Formula part = chi_component(i, dimension);
    chi = chi ? Formula::conj(*chi, part) : part;
  }
  return chi ? *chi : Formula::tt();
}

namespace {

bool is_color(const std::string& p) { return p.rfind("@color", 0) == 0; }

Letter strip(const Letter& l) {
  Letter out;
  for (const auto& p : l) {
    if (!is_color(p)) out.insert(p);
  }
  return out;
}

}  // namespace

bool is_coloring_of(const Coloring& c, const CostTrace& base) {
  if (c.dimension != base.dimension) return false;
  std::size_t horizon = std::max(c.prefix.size(), base.prefix.size()) + c.cycle.size() * base.cycle.size();
  for (std::size_t n = 0; n < horizon; ++n) {
    if (c.at(n).cost != base.at(n).cost) return false;
    if (strip(c.at(n).letter) != strip(base.at(n).letter)) return false;
  }
  return true;
}

bool color_at(const Coloring& c, std::size_t n, int coord) {
  return c.at(n).letter.count(color_name(coord, c.dimension)) > 0;
}

BlockDecomposition decompose(const Coloring& c, int coord) {
  BlockDecomposition d;
  bool cycle_constant = true;
  for (std::size_t j = 0; j < c.cycle.size(); ++j) {
    if (color_at(c, c.prefix.size() + j, coord) != color_at(c, c.prefix.size(), coord)) cycle_constant = false;
  }
  std::size_t window = cycle_constant ? c.prefix.size() + 1 : c.prefix.size() + 3 * c.cycle.size();
  d.changepoints.push_back(0);
  for (std::size_t n = 1; n < window; ++n) {
    if (color_at(c, n, coord) != color_at(c, n - 1, coord)) d.changepoints.push_back(n);
  }
  for (std::size_t j = 0; j + 1 < d.changepoints.size(); ++j) {
    d.blocks.push_back({d.changepoints[j], d.changepoints[j + 1] - 1});
  }
  if (cycle_constant) d.tail_start = d.changepoints.back();
  return d;
}

std::uint64_t block_cost(const Coloring& c, const Block& b, int coord) {
  return infix_cost(c, b.begin, b.end + 1)[coord - 1];
}

bool is_k_bounded(const Coloring& c, std::uint64_t k, int coord) {
  BlockDecomposition d = decompose(c, coord);
  for (const auto& b : d.blocks) {
    if (block_cost(c, b, coord) > k) return false;
  }
  if (d.tail_start) {
    std::uint64_t cyc = 0;
    for (const auto& s : c.cycle) cyc += s.cost[coord - 1];
    if (cyc > 0) return false;
    if (infix_cost(c, *d.tail_start, std::max(*d.tail_start, c.prefix.size()))[coord - 1] > k) return false;
  }
  return true;
}

bool is_k_spaced(const Coloring& c, std::uint64_t k, int coord) {
  for (const auto& b : decompose(c, coord).blocks) {
    if (block_cost(c, b, coord) < k) return false;
  }
  return true;
}

std::uint64_t max_step_cost(const CostTrace& w, int coord) {
  std::uint64_t m = 0;
  for (const auto& s : w.prefix) m = std::max(m, s.cost[coord - 1]);
  for (const auto& s : w.cycle) m = std::max(m, s.cost[coord - 1]);
  return m;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Coloring make_coloring(const CostTrace& w, std::uint64_t low, std::uint64_t high, int coord,
                       std::optional<std::uint64_t> jitter_seed, std::size_t max_length) {
  if (coord < 1 || coord > w.dimension) throw std::invalid_argument("make_coloring: bad coordinate");
  std::uint64_t W = max_step_cost(w, coord);
  if (high < low + W) throw std::invalid_argument("make_coloring: requires high >= low + W");
  std::uint64_t top = high + 1 - W;
  const std::string color = color_name(coord, w.dimension);
  auto threshold = [&](std::size_t folded, bool colored) {
    if (!jitter_seed) return low;
    std::uint64_t h = mix(*jitter_seed ^ mix(folded * 2 + (colored ? 1 : 0)));
    return low + h % (top - low + 1);
  };

  std::vector<Step> steps;
  std::map<std::tuple<std::size_t, std::uint64_t, bool, std::uint64_t>, std::size_t> seen;
  std::uint64_t running = 0;
  bool colored = false;
  std::uint64_t t = threshold(0, false);
  for (std::size_t n = 0;; ++n) {
    std::size_t f = w.fold(n);
    if (n >= w.prefix.size()) {
      auto key = std::make_tuple(f, running, colored, t);
      auto it = seen.find(key);
      if (it != seen.end()) {
        Coloring c;
        c.dimension = w.dimension;
        c.prefix.assign(steps.begin(), steps.begin() + it->second);
        c.cycle.assign(steps.begin() + it->second, steps.end());
        return c;
      }
      seen.emplace(key, n);
    }
    if (steps.size() >= max_length) throw std::runtime_error("make_coloring: coloring period exceeds length cap");
    Step s = w.at(n);
    if (colored) s.letter.insert(color);
    running += s.cost[coord - 1];
    steps.push_back(std::move(s));
    if (running >= t) {
      colored = !colored;
      running = 0;
      t = threshold(w.fold(n + 1), colored);
    }
  }
}

}  // namespace costal
