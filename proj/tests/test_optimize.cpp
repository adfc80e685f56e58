#include "doctest.h"

#include "costal/budget.hpp"
#include "costal/games.hpp"
#include "costal/modelcheck.hpp"
#include "costal/optimize.hpp"
#include "gen.hpp"

using namespace costal;

namespace {

const char* kRequestResponse =
    "system d=1; state s0 labels {q, kappa} initial; state s1 labels {p, kappa};"
    "edge s0 -> s1 cost 2; edge s1 -> s0 cost 3;";

const char* kDelay =
    "arena d=1; state s0 labels {} owner 1 initial; state a labels {kappa}; state b labels {kappa};"
    "state t labels {p, kappa}; edge s0 -> a cost 1; edge s0 -> b cost 1; edge a -> t cost 2;"
    "edge b -> t cost 1; edge t -> t cost 1;";

bool holds(const TransitionSystem& s, const Formula& f, const std::string& x, std::uint64_t v) {
  return fixed_valuation_check(s, f, {{x, v}}).holds;
}

// G[<=y] over a literal true initially, so that failures need positive cost.
Formula guarded_always(gen::Rng& rng, const TransitionSystem& s) {
  gen::FormulaShape fs;
  fs.params = gen::Params::none;
  fs.use_kappa = false;
  std::string p = gen::coin(rng) ? "p" : "q";
  Formula lit = s.labels[s.initial].count(p) ? Formula::atom(p) : Formula::neg_atom(p);
  if (gen::coin(rng)) lit = Formula::disj(lit, gen::well_formed(rng, 2, fs));
  return Formula::param_always("y", 1, lit);
}

gen::FormulaShape single(const std::string& var, gen::Params p) {
  gen::FormulaShape fs;
  fs.vars = {var};
  fs.params = p;
  return fs;
}

}  // namespace

TEST_CASE("objective names") {
  for (const char* n : {"minmin", "minmax", "maxmin", "maxmax"}) CHECK(to_string(parse_objective(n)) == n);
  CHECK_THROWS_AS(parse_objective("min"), std::invalid_argument);
  CHECK(to_string(OptStatus::universal) == "universal");
}

TEST_CASE("binary search") {
  std::size_t calls = 0;
  CHECK(binary_search([](std::uint64_t v) { return v >= 2; }, 0, 66, SearchDirection::least, &calls) == 2);
  CHECK(calls <= 9);
  CHECK(binary_search([](std::uint64_t) { return true; }, 5, 66) == 5);
  CHECK_FALSE(binary_search([](std::uint64_t) { return false; }, 0, 66));
  CHECK(binary_search([](std::uint64_t v) { return v <= 40; }, 0, 66, SearchDirection::greatest) == 40);
  CHECK_THROWS_AS(binary_search([](std::uint64_t v) { return v < 3; }, 0, 10), std::logic_error);
  CHECK_THROWS_AS(binary_search([](std::uint64_t v) { return v > 3; }, 0, 10, SearchDirection::greatest),
                  std::logic_error);

  gen::Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    std::uint64_t lo = gen::uniform(rng, 0, 20), hi = lo + gen::uniform(rng, 0, 200);
    std::uint64_t t = gen::uniform(rng, 0, 240);
    auto up = [&](std::uint64_t v) { return v >= t; };
    auto down = [&](std::uint64_t v) { return v <= t; };
    std::optional<std::uint64_t> least, greatest;
    for (std::uint64_t v = lo; v <= hi; ++v) {
      if (up(v) && !least) least = v;
      if (down(v)) greatest = v;
    }
    CHECK(binary_search(up, lo, hi) == least);
    CHECK(binary_search(down, lo, hi, SearchDirection::greatest) == greatest);
  }
}

TEST_CASE("request/response optimum") {
  TransitionSystem s = parse_system(kRequestResponse);
  OptResult r = mc_optimize(s, parse_formula("G (q -> F[<=x] p)"), parse_objective("minmax"));
  REQUIRE(r.status == OptStatus::value);
  CHECK(r.value == 2);
  CHECK(r.valuation.at("x") == 2);
  CHECK_FALSE(r.truncated);

  Formula two = parse_formula("G (q -> F[<=x] p) & G (p -> F[<=y] q)");
  OptResult mm = mc_optimize(s, two, parse_objective("minmin"));
  OptResult mx = mc_optimize(s, two, parse_objective("minmax"));
  REQUIRE(mm.status == OptStatus::value);
  REQUIRE(mx.status == OptStatus::value);
  CHECK(mm.value == 2);
  CHECK(mx.value == 3);
  CHECK(fixed_valuation_check(s, two, mm.valuation).holds);
  CHECK_FALSE(fixed_valuation_check(s, two, {{"x", 2}, {"y", 2}}).holds);

  OptResult v = mc_optimize(s, parse_formula("G (q | p)"), parse_objective("minmin"));
  CHECK(v.no_variables);
  CHECK(v.status == OptStatus::value);
  CHECK(v.value == 0);
  CHECK(mc_optimize(s, parse_formula("F[<=x] r"), parse_objective("minmax")).status == OptStatus::infeasible);

  OptResult g = mc_optimize(s, parse_formula("G[<=y] q"), parse_objective("maxmax"));
  REQUIRE(g.status == OptStatus::value);
  CHECK(g.value == 1);
  CHECK(mc_optimize(s, parse_formula("G[<=y] (q | p)"), parse_objective("maxmin")).status ==
        OptStatus::universal);
  CHECK(mc_optimize(s, parse_formula("G[<=y] p"), parse_objective("maxmin")).status == OptStatus::infeasible);
}

TEST_CASE("fragment and dimension errors") {
  TransitionSystem s = parse_system(kRequestResponse);
  CHECK_THROWS_AS(mc_optimize(s, parse_formula("G[<=y] p"), parse_objective("minmin")), std::invalid_argument);
  CHECK_THROWS_AS(mc_optimize(s, parse_formula("F[<=x] p"), parse_objective("maxmax")), std::invalid_argument);
  CHECK_THROWS_AS(mc_optimize(s, parse_formula("F[<=x@2] p", 2), parse_objective("minmin")),
                  std::invalid_argument);
}

TEST_CASE("single-variable minimum matches a linear scan") {
  gen::Rng rng(42);
  gen::SystemShape ss;
  int values = 0, infeasible = 0;
  for (int i = 0; i < 120; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, single("x", gen::Params::eventually_only));
    if (variables(f).eventually.empty()) continue;
    OptResult r = mc_optimize(s, f, parse_objective(gen::coin(rng) ? "minmin" : "minmax"));
    INFO(format_system(s), f.to_string());
    REQUIRE(r.status != OptStatus::unknown);
    if (r.status == OptStatus::infeasible) {
      ++infeasible;
      CHECK_FALSE(model_check(s, f).sat);
      continue;
    }
    ++values;
    REQUIRE(r.status == OptStatus::value);
    CHECK(model_check(s, f).sat);
    CHECK(holds(s, f, "x", r.value));
    for (std::uint64_t v = 0; v < r.value; ++v) CHECK_FALSE(holds(s, f, "x", v));
  }
  CHECK(values > 5);
  CHECK(infeasible > 5);
}

TEST_CASE("single-variable maximum matches a linear scan") {
  gen::Rng rng(43);
  gen::SystemShape ss;
  int values = 0, universal = 0, infeasible = 0;
  for (int i = 0; i < 120; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = i % 2 ? guarded_always(rng, s) : gen::well_formed(rng, 6, single("y", gen::Params::always_only));
    if (variables(f).always.empty()) continue;
    OptResult r = mc_optimize(s, f, parse_objective(gen::coin(rng) ? "maxmin" : "maxmax"));
    INFO(format_system(s), f.to_string());
    switch (r.status) {
      case OptStatus::infeasible:
        ++infeasible;
        CHECK_FALSE(holds(s, f, "y", 0));
        break;
      case OptStatus::universal:
        ++universal;
        for (std::uint64_t v : {0, 1, 5, 17, 300}) CHECK(holds(s, f, "y", v));
        break;
      case OptStatus::value:
        ++values;
        for (std::uint64_t v = 0; v <= r.value; ++v) CHECK(holds(s, f, "y", v));
        CHECK_FALSE(holds(s, f, "y", r.value + 1));
        break;
      default: FAIL("unexpected status " << to_string(r.status));
    }
  }
  CHECK(values > 5);
  CHECK(universal > 5);
  CHECK(infeasible > 5);
}

TEST_CASE("two variables: aggregates and sweeps") {
  gen::Rng rng(44);
  gen::SystemShape ss;
  ss.max_states = 3;
  OptOptions opt;
  opt.budget.max_alpha = 12;
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    gen::FormulaShape fs;
    fs.params = gen::Params::eventually_only;
    Formula f = gen::well_formed(rng, 7, fs);
    if (variables(f).eventually.size() != 2) continue;
    OptResult mm = mc_optimize(s, f, parse_objective("minmin"), opt);
    OptResult mx = mc_optimize(s, f, parse_objective("minmax"), opt);
    INFO(format_system(s), f.to_string());
    if (mx.status != OptStatus::value) continue;
    REQUIRE(mm.status == OptStatus::value);
    ++compared;
    CHECK(mm.value <= mx.value);
    // minmax: least uniform valuation
    CHECK(fixed_valuation_check(s, f, {{"x", mx.value}, {"y", mx.value}}).holds);
    for (std::uint64_t v = 0; v < mx.value; ++v) CHECK_FALSE(fixed_valuation_check(s, f, {{"x", v}, {"y", v}}).holds);
    // minmin: least single coordinate with the other at the ceiling
    CHECK(fixed_valuation_check(s, f, mm.valuation).holds);
    for (const char* x : {"x", "y"}) {
      Valuation a{{"x", mm.ceiling}, {"y", mm.ceiling}};
      for (std::uint64_t v = 0; v < mm.value; ++v) {
        a[x] = v;
        CHECK_FALSE(fixed_valuation_check(s, f, a).holds);
      }
    }
  }
  CHECK(compared > 5);
}

TEST_CASE("maxmax frees one variable at a time") {
  TransitionSystem s = parse_system(kRequestResponse);
  Formula f = parse_formula("G[<=y] q | G[<=z] (q | p)");
  OptResult mx = mc_optimize(s, f, parse_objective("maxmax"));
  CHECK(mx.status == OptStatus::unbounded);
  OptResult mn = mc_optimize(s, f, parse_objective("maxmin"));
  REQUIRE(mn.status == OptStatus::universal);

  Formula g = parse_formula("G[<=y] q & G[<=z] (q | X q)");
  OptResult a = mc_optimize(s, g, parse_objective("maxmax"));
  OptResult b = mc_optimize(s, g, parse_objective("maxmin"));
  CHECK(a.status == OptStatus::unbounded);
  CHECK(a.valuation.at("y") == 0);
  CHECK(fixed_valuation_check(s, g, a.valuation).holds);
  REQUIRE(b.status == OptStatus::value);
  CHECK(b.value == 1);
}

TEST_CASE("truncation is reported") {
  TransitionSystem s = parse_system(kRequestResponse);
  OptOptions opt;
  opt.budget.max_alpha = 1;
  OptResult r = mc_optimize(s, parse_formula("G (q -> F[<=x] p)"), parse_objective("minmax"), opt);
  CHECK(r.truncated);
  CHECK(r.status == OptStatus::unknown);
  opt.budget.max_alpha = 4;
  OptResult t = mc_optimize(s, parse_formula("G (q -> F[<=x] p)"), parse_objective("minmax"), opt);
  CHECK(t.truncated);
  CHECK(t.status == OptStatus::value);
  CHECK(t.value == 2);
}

TEST_CASE("game optima") {
  Arena one = parse_system("arena d=1; state s labels {p, kappa} initial; edge s -> s cost 1;");
  OptResult z = game_optimize(one, parse_formula("F[<=x] p"), parse_objective("minmax"));
  REQUIRE(z.status == OptStatus::value);
  CHECK(z.value == 0);

  Arena a = parse_system(kDelay);
  OptResult d = game_optimize(a, parse_formula("F[<=x] p"), parse_objective("minmin"));
  REQUIRE(d.status == OptStatus::value);
  CHECK(d.value == 3);
  REQUIRE(d.strategy);
  CHECK(verify_strategy(a, *d.strategy, parse_formula("F[<=x] p"), d.valuation, 12).ok);
  CHECK(game_optimize(a, parse_formula("F[<=x] q"), parse_objective("minmax")).status == OptStatus::infeasible);

  OptResult g = game_optimize(a, parse_formula("G[<=y] !p"), parse_objective("maxmax"));
  REQUIRE(g.status == OptStatus::value);
  CHECK(g.value == 1);
}

TEST_CASE("random game minima match fixed-valuation games") {
  gen::Rng rng(45);
  gen::SystemShape ss;
  ss.max_states = 3;
  ss.arena = true;
  int values = 0;
  for (int i = 0; i < 40; ++i) {
    Arena a = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 4, single("x", gen::Params::eventually_only));
    if (variables(f).eventually.empty()) continue;
    OptResult r = game_optimize(a, f, parse_objective("minmax"));
    INFO(format_system(a), f.to_string());
    if (r.status == OptStatus::infeasible) {
      CHECK_FALSE(solve_game(a, f).win);
      continue;
    }
    REQUIRE(r.status == OptStatus::value);
    ++values;
    CHECK(fixed_valuation_game(a, f, {{"x", r.value}}).player0_wins);
    for (std::uint64_t v = 0; v < r.value; ++v) CHECK_FALSE(fixed_valuation_game(a, f, {{"x", v}}).player0_wins);
    REQUIRE(r.strategy);
    CHECK(verify_strategy(a, *r.strategy, f, r.valuation, a.size() * r.strategy->size() + 4).ok);
  }
  CHECK(values > 5);
}

TEST_CASE("random game maxima match fixed-valuation games") {
  gen::Rng rng(46);
  gen::SystemShape ss;
  ss.max_states = 3;
  ss.arena = true;
  int values = 0, others = 0;
  for (int i = 0; i < 80; ++i) {
    Arena a = gen::system(rng, ss);
    Formula f = i % 2 ? guarded_always(rng, a) : gen::well_formed(rng, 4, single("y", gen::Params::always_only));
    if (variables(f).always.empty()) continue;
    OptResult r = game_optimize(a, f, parse_objective(i % 3 ? "maxmin" : "maxmax"));
    INFO(format_system(a), f.to_string());
    auto wins = [&](std::uint64_t v) { return fixed_valuation_game(a, f, {{"y", v}}).player0_wins; };
    ++(r.status == OptStatus::value ? values : others);
    switch (r.status) {
      case OptStatus::infeasible: CHECK_FALSE(wins(0)); break;
      case OptStatus::universal:
        for (std::uint64_t v : {0, 3, 9, 20}) CHECK(wins(v));
        break;
      case OptStatus::value:
        for (std::uint64_t v = 0; v <= r.value; ++v) CHECK(wins(v));
        CHECK_FALSE(wins(r.value + 1));
        break;
      default: FAIL("unexpected status " << to_string(r.status));
    }
  }
  CHECK(values > 5);
  CHECK(others > 5);
}
