#include "doctest.h"

#include "costal/automata.hpp"
#include "costal/budget.hpp"
#include "costal/modelcheck.hpp"
#include "gen.hpp"

using namespace costal;

namespace {

const char* kRequestResponse =
    "system d=1; state s0 labels {q, kappa} initial; state s1 labels {p, kappa};"
    "edge s0 -> s1 cost 2; edge s1 -> s0 cost 3;";

Valuation extreme(const Formula& f, std::uint64_t high) {
  Valuation a;
  VariableSets vs = variables(f);
  for (const auto& x : vs.eventually) a[x] = high;
  for (const auto& y : vs.always) a[y] = 0;
  return a;
}

bool all_sampled_paths_satisfy(gen::Rng& rng, const TransitionSystem& s, const Formula& f, const Valuation& a,
                               int samples) {
  for (int i = 0; i < samples; ++i) {
    auto [stem, loop] = gen::path_lasso(rng, s, 6);
    if (!evaluate(trace_of_path(s, stem, loop), 0, a, f)) return false;
  }
  return true;
}

gen::FormulaShape one_variable() {
  gen::FormulaShape fs;
  fs.vars = {"x"};
  return fs;
}

}  // namespace

TEST_CASE("request/response system") {
  TransitionSystem s = parse_system(kRequestResponse);
  Formula f = parse_formula("G (q -> F[<=x] p)");
  McResult r = model_check(s, f);
  CHECK(r.sat);
  BuchiAutomaton a = counterexample_automaton(eliminate_param_always(f), 1);
  CHECK(r.automaton_states == a.size());
  CHECK(r.bound == 2 * (2 * a.size() + 3) * 3);
  CHECK(r.valuation.at("x") == r.bound);
  CHECK(fixed_valuation_check(s, f, {{"x", 2}}).holds);
  CHECK_FALSE(fixed_valuation_check(s, f, {{"x", 1}}).holds);
  CHECK(fixed_valuation_check(s, f, r.valuation).holds);
}

TEST_CASE("unsatisfiable request yields an audited lasso") {
  TransitionSystem s = parse_system(kRequestResponse);
  Formula f = parse_formula("F[<=x] r");
  McResult r = model_check(s, f);
  REQUIRE_FALSE(r.sat);
  REQUIRE(r.lasso);
  ColoredProduct g = build_product(s, counterexample_automaton(f, 1));
  CHECK(audit_pumpable_lasso(g, *r.lasso).ok);
  CHECK(r.lasso->length() <= lasso_length_bound(g));
  CHECK(r.stem_states.size() == r.lasso->stem.size());
  CHECK(r.loop_states.size() == r.lasso->loop.size());
}

TEST_CASE("closed-form bounds") {
  CHECK(mc_bound_value(2, 62, 3) == 2 * (2 * 62 + 3) * 3);
  CHECK(mc_bound_value(3, 10, 2, 2) == 2 * (3 * 10 * 2 + 3) * 2);
  CHECK(mc_bound_value(3, 10, 0) == 0);
  CHECK(g_fragment_bound_value(4, 2, 1) == 34);
  CHECK(g_fragment_bound_value(5, 3, 2) == (4 * 5 * 3 + 2) * 2);
  CHECK_THROWS_AS(mc_bound_value(std::uint64_t{1} << 40, std::uint64_t{1} << 40, 4), std::overflow_error);
}

TEST_CASE("audit rejects broken lassos") {
  TransitionSystem s = parse_system(kRequestResponse);
  Formula f = parse_formula("F[<=x] r");
  ColoredProduct g = build_product(s, counterexample_automaton(f, 1));
  McResult r = model_check(s, f);
  REQUIRE(r.lasso);
  Lasso l = *r.lasso;
  Lasso no_loop{l.stem, {}};
  CHECK_FALSE(audit_pumpable_lasso(g, no_loop).ok);
  Lasso wrong_start = l;
  if (!wrong_start.stem.empty()) {
    wrong_start.stem[0] = (wrong_start.stem[0] + 1) % static_cast<int>(g.size());
    CHECK_FALSE(audit_pumpable_lasso(g, wrong_start).ok);
  }
}

TEST_CASE("G* search and marker search agree on random instances") {
  gen::Rng rng(11);
  gen::SystemShape ss;
  for (int i = 0; i < 150; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, one_variable());
    McOptions m;
    m.markers = true;
    McResult a = model_check(s, f);
    McResult b = model_check(s, f, m);
    CHECK(a.sat == b.sat);
  }
}

TEST_CASE("verdict agrees with the fixed-valuation pipeline at the bound") {
  gen::Rng rng(12);
  gen::SystemShape ss;
  int sat = 0, unsat = 0;
  for (int i = 0; i < 200; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, one_variable());
    McResult r = model_check(s, f);
    bool oracle = fixed_valuation_check(s, f, extreme(f, r.bound)).holds;
    INFO(format_system(s), f.to_string());
    CHECK(r.sat == oracle);
    if (r.sat) {
      ++sat;
      CHECK(fixed_valuation_check(s, f, r.valuation).holds);
    } else {
      ++unsat;
      REQUIRE(r.lasso);
      ColoredProduct g = build_product(s, counterexample_automaton(eliminate_param_always(f), 1));
      AuditResult ar = audit_pumpable_lasso(g, *r.lasso);
      CHECK_MESSAGE(ar.ok, ar.reason);
      CHECK(r.lasso->length() <= lasso_length_bound(g));
    }
  }
  CHECK(sat > 20);
  CHECK(unsat > 20);
}

TEST_CASE("satisfying valuations hold on sampled paths") {
  gen::Rng rng(13);
  gen::SystemShape ss;
  int seen = 0;
  for (int i = 0; i < 60 && seen < 15; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, one_variable());
    McResult r = model_check(s, f);
    if (!r.sat) continue;
    ++seen;
    CHECK(all_sampled_paths_satisfy(rng, s, f, r.valuation, 50));
  }
  CHECK(seen > 5);
}

TEST_CASE("variable-free formulas are classical model checking") {
  gen::Rng rng(14);
  gen::SystemShape ss;
  gen::FormulaShape fs;
  fs.params = gen::Params::none;
  for (int i = 0; i < 100; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, fs);
    McResult r = model_check(s, f);
    CHECK(r.sat == fixed_valuation_check(s, f, {}).holds);
    if (r.sat) {
      CHECK(all_sampled_paths_satisfy(rng, s, f, {}, 20));
    } else {
      CostTrace w = trace_of_path(s, r.stem_states, r.loop_states);
      CHECK_FALSE(evaluate(w, 0, {}, f));
    }
  }
}

TEST_CASE("fixed-valuation counterexamples violate the formula") {
  gen::Rng rng(15);
  gen::SystemShape ss;
  for (int i = 0; i < 150; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, gen::FormulaShape{});
    Valuation a = gen::valuation(rng, f, 6);
    FixedCheckResult c = fixed_valuation_check(s, f, a);
    if (c.holds) {
      CHECK(all_sampled_paths_satisfy(rng, s, f, a, 10));
    } else {
      CHECK_FALSE(evaluate(trace_of_path(s, c.stem, c.loop), 0, a, f));
    }
  }
}

TEST_CASE("G-fragment failures persist up to the bound") {
  gen::Rng rng(16);
  gen::SystemShape ss;
  gen::FormulaShape fs;
  fs.vars = {"y"};
  fs.params = gen::Params::always_only;
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    TransitionSystem s = gen::system(rng, ss);
    Formula f = gen::well_formed(rng, 6, fs);
    std::uint64_t k = g_fragment_bound(s, f);
    bool any = false;
    for (std::uint64_t v = 0; v <= 8; ++v) any = any || !fixed_valuation_check(s, f, {{"y", v}}).holds;
    if (any) {
      ++failures;
      CHECK_FALSE(fixed_valuation_check(s, f, {{"y", k}}).holds);
    }
  }
  CHECK(failures > 5);
}

TEST_CASE("errors") {
  TransitionSystem s = parse_system(kRequestResponse);
  CHECK_THROWS_AS(model_check(s, parse_formula("F[<=x@2] p", 2)), std::invalid_argument);
  McOptions tiny;
  tiny.max_states = 3;
  CHECK_THROWS_AS(model_check(s, parse_formula("G (q -> F[<=x] p)"), tiny), StateLimitExceeded);
  CHECK_THROWS_AS(g_fragment_bound(s, parse_formula("F[<=x] p")), std::invalid_argument);
  CHECK_THROWS(fixed_valuation_check(s, parse_formula("F[<=x] p"), {}));
}
