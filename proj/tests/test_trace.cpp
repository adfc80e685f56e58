#include "doctest.h"
#include "gen.hpp"

using namespace costal;

namespace {

CostTrace rr_cycle() {
  return parse_trace("trace d=1; prefix: ; cycle: {q} / 2 {p,kappa} / 0;");
}

enum class Clause { until_le, release_le, eventually_gt, always_gt, until_gt, release_gt };

// Direct implementation of the semantic clause at position n, with a, b truth vectors
// over the folded lasso.
bool direct(const CostTrace& w, std::size_t n, Clause k, std::uint64_t y, const std::vector<bool>& a,
            const std::vector<bool>& b) {
  std::size_t horizon = n + w.lasso_length() + w.cycle.size() * (y + 3);
  std::uint64_t cost = 0;
  for (std::size_t q = n; q <= horizon; ++q) {
    bool A = a[w.fold(q)];
    bool B = b[w.fold(q)];
    switch (k) {
      case Clause::until_le:
        if (cost > y) return false;
        if (B) return true;
        if (!A) return false;
        break;
      case Clause::release_le:
        if (cost > y) return true;
        if (!B) return false;
        if (A) return true;
        break;
      case Clause::eventually_gt:
        if (cost > y && B) return true;
        break;
      case Clause::always_gt:
        if (cost > y && !B) return false;
        break;
      case Clause::until_gt:
        if (cost > y && B) return true;
        if (!A) return false;
        break;
      case Clause::release_gt:
        if (cost > y && !B) return false;
        if (A) return true;
        break;
    }
    cost += w.at(q).cost[0];
  }
  switch (k) {
    case Clause::until_le:
    case Clause::eventually_gt:
    case Clause::until_gt:
      return false;
    default:
      return true;
  }
}

}  // namespace

TEST_CASE("validate_trace") {
  CostTrace ok = parse_trace("trace d=1; prefix: {q} / 0; cycle: {q} / 2 {p,kappa} / 0;");
  CHECK_FALSE(validate_trace(ok));
  auto bad = validate_trace(parse_trace("trace d=1; prefix: ; cycle: {p,kappa} / 0;"));
  REQUIRE(bad);
  CHECK(bad->position == 0);
  CHECK(bad->coord == 1);
  CHECK_FALSE(validate_trace(parse_trace("trace d=1; prefix: ; cycle: {} / 0;")));
  auto missing = validate_trace(parse_trace("trace d=2; prefix: {} / (0,1); cycle: {kappa_2} / (0,1);"));
  CHECK_FALSE(missing);
  auto wrong = validate_trace(parse_trace("trace d=2; prefix: {} / (1,1); cycle: {kappa_2} / (0,1);"));
  REQUIRE(wrong);
  CHECK(wrong->position == 1);
}

TEST_CASE("infix and trace cost") {
  CostTrace w = parse_trace("trace d=1; prefix: {q} / 0; cycle: {q} / 2 {p,kappa} / 0;");
  CHECK(infix_cost(w, 1, 1)[0] == 0);
  CHECK(infix_cost(w, 0, 2)[0] == 2);
  CHECK(infix_cost(w, 1, 3)[0] == 2);
  CHECK(infix_cost(w, 0, 7)[0] == 6);
  CHECK(trace_cost(w)[0] == kInfiniteCost);
  CostTrace fin = parse_trace("trace d=1; prefix: {} / 5; cycle: {kappa} / 0;");
  CHECK(trace_cost(fin)[0] == 5);
  CostTrace zero = parse_trace("trace d=1; prefix: ; cycle: {} / 0;");
  CHECK(trace_cost(zero)[0] == 0);
}

TEST_CASE("text format round trip") {
  gen::Rng rng(3);
  gen::TraceShape s;
  for (int i = 0; i < 200; ++i) {
    s.dimension = static_cast<int>(gen::uniform(rng, 1, 3));
    CostTrace w = gen::trace(rng, s);
    CHECK_FALSE(validate_trace(w));
    CostTrace v = parse_trace(format_trace(w));
    CHECK(format_trace(v) == format_trace(w));
  }
  CHECK_THROWS_AS(parse_trace("trace d=1; prefix: ; cycle: ;"), ParseError);
  CHECK_THROWS_AS(parse_trace("trace d=2; prefix: ; cycle: {} / 1;"), ParseError);
}

TEST_CASE("evaluate request-response") {
  CostTrace w = rr_cycle();
  Formula f = parse_formula("G (q -> F[<=x] p)");
  CHECK(evaluate(w, 0, {{"x", 2}}, f));
  CHECK_FALSE(evaluate(w, 0, {{"x", 1}}, f));
  CHECK(evaluate(w, 1, {{"x", 0}}, parse_formula("F[<=x] p")));
  CHECK_THROWS_AS(evaluate(w, 0, {}, f), UnboundVariable);
  CHECK_THROWS(evaluate(w, 0, {{"x", kOracleAlphaCap + 1}}, f));
}

TEST_CASE("evaluate classical operators") {
  CostTrace w = parse_trace("trace d=1; prefix: {p} / 0 {} / 0; cycle: {q} / 0 {} / 0;");
  CHECK(evaluate(w, 0, {}, parse_formula("G F q")));
  CHECK_FALSE(evaluate(w, 0, {}, parse_formula("F G q")));
  CHECK(evaluate(w, 0, {}, parse_formula("p U (X q)")));
  CHECK_FALSE(evaluate(w, 0, {}, parse_formula("p U q")));
  CHECK(evaluate(w, 2, {}, parse_formula("X X q")));
  CHECK(evaluate(w, 0, {}, parse_formula("F p & G !r")));
  CHECK(evaluate(w, 0, {}, parse_formula("tt")));
  CHECK_FALSE(evaluate(w, 0, {}, parse_formula("ff")));
}

TEST_CASE("zero-cost cycles make bounded operators unbounded") {
  CostTrace w = parse_trace("trace d=1; prefix: {} / 3; cycle: {kappa} / 0 {} / 0 {p} / 0;");
  CHECK(evaluate(w, 1, {{"x", 0}}, parse_formula("F[<=x] p")));
  CHECK_FALSE(evaluate(w, 0, {{"x", 2}}, parse_formula("F[<=x] p")));
  CHECK(evaluate(w, 0, {{"x", 3}}, parse_formula("F[<=x] p")));
  CHECK(evaluate(w, 0, {{"x", 2}}, parse_formula("G[<=x] !p")));
  CHECK_FALSE(evaluate(w, 0, {{"x", 3}}, parse_formula("G[<=x] !p")));
}

TEST_CASE("negation complements the oracle") {
  gen::Rng rng(101);
  gen::FormulaShape fs;
  gen::TraceShape ts;
  for (int i = 0; i < 1000; ++i) {
    fs.dimension = ts.dimension = static_cast<int>(gen::uniform(rng, 1, 2));
    Formula f = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 8)), fs);
    CostTrace w = gen::trace(rng, ts);
    Valuation a = gen::valuation(rng, f, 8);
    std::size_t n = gen::uniform(rng, 0, 8);
    CHECK(evaluate(w, n, a, f) != evaluate(w, n, a, negate(f)));
  }
}

TEST_CASE("monotonicity in the valuation") {
  gen::Rng rng(202);
  gen::FormulaShape fs;
  gen::TraceShape ts;
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen::well_formed(rng, 8, fs);
    CostTrace w = gen::trace(rng, ts);
    Valuation a = gen::valuation(rng, f, 6);
    Valuation b = a;
    auto v = variables(f);
    for (const auto& x : v.eventually) b[x] = a[x] + gen::uniform(rng, 0, 3);
    for (const auto& y : v.always) b[y] = a[y] - std::min<std::uint64_t>(a[y], gen::uniform(rng, 0, 3));
    if (evaluate(w, 0, a, f)) CHECK(evaluate(w, 0, b, f));
  }
}

TEST_CASE("derived operators agree with their semantic clauses") {
  gen::Rng rng(303);
  gen::FormulaShape fs;
  fs.params = gen::Params::none;
  gen::TraceShape ts;
  ts.max_len = 7;
  struct Case {
    Clause clause;
    const char* op;
    bool binary;
  };
  const Case cases[] = {
      {Clause::until_le, " U[<=y] ", true},   {Clause::release_le, " R[<=y] ", true},
      {Clause::eventually_gt, "F[>y] ", false}, {Clause::always_gt, "G[>y] ", false},
      {Clause::until_gt, " U[>y] ", true},    {Clause::release_gt, " R[>y] ", true},
  };
  for (const auto& c : cases) {
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
      Formula a = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 3)), fs);
      Formula b = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 3)), fs);
      std::string text = c.binary ? "(" + a.to_string() + ")" + c.op + "(" + b.to_string() + ")"
                                  : std::string(c.op) + "(" + b.to_string() + ")";
      Formula f = parse_formula(text);
      CostTrace w = gen::trace(rng, ts);
      std::uint64_t y = gen::uniform(rng, 0, 6);
      std::vector<bool> ta = evaluate_all(w, {}, a);
      std::vector<bool> tb = evaluate_all(w, {}, b);
      std::vector<bool> tf = evaluate_all(w, {{"y", y}}, f);
      for (std::size_t n = 0; n < w.lasso_length(); ++n) {
        if (tf[n] != direct(w, n, c.clause, y, ta, tb)) ++mismatches;
      }
    }
    INFO(c.op);
    CHECK(mismatches == 0);
  }
}

TEST_CASE("unrolling the cycle into the prefix preserves truth") {
  gen::Rng rng(404);
  gen::FormulaShape fs;
  gen::TraceShape ts;
  for (int i = 0; i < 300; ++i) {
    Formula f = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 8)), fs);
    CostTrace w = gen::trace(rng, ts);
    Valuation a = gen::valuation(rng, f, 6);
    std::size_t k = gen::uniform(rng, 0, 2 * w.cycle.size());
    CostTrace u = w;
    for (std::size_t j = 0; j < k; ++j) u.prefix.push_back(w.at(w.prefix.size() + j));
    std::rotate(u.cycle.begin(), u.cycle.begin() + (k % u.cycle.size()), u.cycle.end());
    CHECK_FALSE(validate_trace(u));
    CHECK(evaluate(w, 0, a, f) == evaluate(u, 0, a, f));
  }
}

TEST_CASE("G[<=y] at y = 0 equals its elimination") {
  gen::Rng rng(505);
  gen::FormulaShape fs;
  fs.params = gen::Params::none;
  gen::TraceShape ts;
  for (int i = 0; i < 500; ++i) {
    Formula psi = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 4)), fs);
    Formula g = Formula::param_always("y", 1, psi);
    CostTrace w = gen::trace(rng, ts);
    std::vector<bool> lhs = evaluate_all(w, {{"y", 0}}, g);
    std::vector<bool> rhs = evaluate_all(w, {}, eliminate_param_always(g));
    CHECK(lhs == rhs);
  }
}
