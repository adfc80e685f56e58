#include "doctest.h"

#include "costal/altcolor.hpp"
#include "costal/budget.hpp"
#include "costal/multicost.hpp"
#include "gen.hpp"

using namespace costal;

namespace {

const char* kStreett =
    "system d=2;"
    "state s0 labels {q1, q2, kappa_1, kappa_2} initial;"
    "state s1 labels {p1, kappa_1, kappa_2};"
    "state s2 labels {p2, kappa_1, kappa_2};"
    "edge s0 -> s1 cost (2, 1); edge s1 -> s2 cost (1, 3); edge s2 -> s0 cost (1, 1);";

Valuation extreme(const Formula& f, std::uint64_t high) {
  Valuation a;
  VariableSets vs = variables(f);
  for (const auto& x : vs.eventually) a[x] = high;
  for (const auto& y : vs.always) a[y] = 0;
  return a;
}

}  // namespace

TEST_CASE("relativization per coordinate") {
  Formula f = parse_formula("F[<=x@2] p & F[<=y] q", 2);
  MultRelativized r = mult_relativize(f, 2);
  CHECK(r.relativized == relativize(f, 2));
  CHECK(r.chi == build_chi(2));
  CHECK_THROWS_AS(mult_relativize(f, 1), std::invalid_argument);
  Formula g = parse_formula("F[<=x] p");
  CHECK(mult_relativize(g, 1).relativized == relativize(g, 1));
}

TEST_CASE("dimension one matches the single-cost pipelines") {
  gen::Rng rng(31);
  gen::SystemShape ss;
  gen::FormulaShape fs;
  fs.vars = {"x"};
  for (int i = 0; i < 100; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, fs);
    McOptions m;
    m.markers = true;
    CHECK(mult_model_check(s, f).sat == model_check(s, f, m).sat);
  }
  ss.arena = true;
  ss.max_states = 3;
  fs.params = gen::Params::eventually_only;
  for (int i = 0; i < 20; ++i) {
    Arena a = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 4, fs);
    CHECK(mult_solve_game(a, f).win == solve_game(a, f).win);
  }
}

TEST_CASE("two coordinates agree with the fixed-valuation pipeline") {
  gen::Rng rng(32);
  gen::SystemShape ss;
  ss.dimension = 2;
  ss.max_states = 2;
  gen::FormulaShape fs;
  fs.dimension = 2;
  fs.vars = {"x"};
  int sat = 0, unsat = 0;
  for (int i = 0; i < 80; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 4, fs);
    McResult r = mult_model_check(s, f);
    INFO(format_system(s), f.to_string());
    CHECK(r.sat == fixed_valuation_check(s, f, extreme(f, r.bound)).holds);
    if (r.sat) {
      ++sat;
    } else {
      ++unsat;
      REQUIRE(r.lasso);
      ColoredProduct g = build_product(s, counterexample_automaton(eliminate_param_always(f, 2), 2));
      CHECK(audit_pumpable_lasso(g, *r.lasso).ok);
    }
  }
  CHECK(sat > 10);
  CHECK(unsat > 10);
}

TEST_CASE("Streett condition with costs") {
  auto pairs = parse_streett_pairs("q1:p1,q2:p2");
  REQUIRE(pairs.size() == 2);
  Formula f = streett_cost_formula(pairs);
  CHECK(f == parse_formula("F G ((!q1 | F[<=x] p1) & (!q2 | F[<=x@2] p2))", 2));
  CHECK_THROWS_AS(parse_streett_pairs("q1p1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_streett_pairs(":p"), std::invalid_argument);
  CHECK_THROWS_AS(streett_cost_formula({}), std::invalid_argument);

  TransitionSystem s = parse_system(kStreett);
  McResult r = mult_model_check(s, f);
  CHECK(r.sat);
  // coordinate 2 needs 1 + 3 between q2 and p2
  for (std::uint64_t x = 0; x <= 8; ++x) CHECK(fixed_valuation_check(s, f, {{"x", x}}).holds == (x >= 4));

  TransitionSystem t = s;
  t.labels[2].erase("p2");
  CHECK_FALSE(mult_model_check(t, f).sat);
}

TEST_CASE("vector-cost negation and monotonicity") {
  gen::Rng rng(33);
  gen::FormulaShape fs;
  fs.dimension = 2;
  gen::TraceShape ts;
  ts.dimension = 2;
  for (int i = 0; i < 300; ++i) {
    Formula f = gen::well_formed(rng, 7, fs);
    CostTrace w = gen::trace(rng, ts);
    Valuation a = gen::valuation(rng, f, 6);
    bool v = evaluate(w, 0, a, f);
    CHECK(evaluate(w, 0, a, negate(f)) != v);
    Valuation b = a;
    VariableSets vs = variables(f);
    for (auto& [name, val] : b) {
      if (vs.eventually.count(name)) val += 2;
      else val = val >= 2 ? val - 2 : 0;
    }
    if (v) CHECK(evaluate(w, 0, b, f));
  }
}
