#include "doctest.h"
#include "gen.hpp"

using namespace costal;

TEST_CASE("parse request-response") {
  Formula f = parse_formula("G (q -> F[<=x] p)");
  CHECK(f.op() == Op::release);
  CHECK(f.lhs().is_ff());
  Formula body = f.rhs();
  CHECK(body.op() == Op::disj);
  CHECK(body.lhs() == Formula::neg_atom("q"));
  CHECK(body.rhs() == Formula::param_eventually("x", 1, Formula::atom("p")));
  CHECK(f.to_string() == "(ff R (!q | F[<=x] p))");
}

TEST_CASE("tt and ff are built from one reserved atom") {
  Formula t = parse_formula("tt");
  CHECK(t.op() == Op::disj);
  CHECK(t.lhs() == Formula::atom(kFalseAtom));
  CHECK(t.rhs() == Formula::neg_atom(kFalseAtom));
  CHECK(t.is_tt());
  CHECK(parse_formula("ff").is_ff());
  CHECK(negate(t).is_ff());
}

TEST_CASE("bounded until expands") {
  Formula f = parse_formula("p U[<=x] q");
  Formula expect = Formula::conj(Formula::until(Formula::atom("p"), Formula::atom("q")),
                                 Formula::param_eventually("x", 1, Formula::atom("q")));
  CHECK(f == expect);
  Formula r = parse_formula("p R[<=y] q");
  CHECK(r == Formula::disj(Formula::release(Formula::atom("p"), Formula::atom("q")),
                           Formula::param_always("y", 1, Formula::atom("q"))));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_formula("p U q U r") == parse_formula("p U (q U r)"));
  CHECK(parse_formula("p & q | r") == parse_formula("(p & q) | r"));
  CHECK(parse_formula("p | q & r") == parse_formula("p | (q & r)"));
  CHECK(parse_formula("X p U q") == parse_formula("(X p) U q"));
  CHECK(parse_formula("p U q & r") == parse_formula("(p U q) & r"));
  CHECK(parse_formula("!p -> q | r") == parse_formula("p | (q | r)"));
  CHECK(parse_formula("p -> q -> r") == parse_formula("!p | (!q | r)"));
}

TEST_CASE("coordinates") {
  Formula f = parse_formula("F[<=x@2] p", 2);
  CHECK(f.coord() == 2);
  CHECK(f.to_string() == "F[<=x@2] p");
  CHECK_THROWS_AS(parse_formula("F[<=x@3] p", 2), ParseError);
  CHECK_THROWS_AS(parse_formula("F[<=x@2] p"), ParseError);
  Formula g = parse_formula("F[>y@2] p", 2);
  CHECK(g.op() == Op::param_always);
  CHECK(atoms(g).count("kappa_2"));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("p & & q");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_formula("!(p & q)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p & q) -> r"), ParseError);
  CHECK_THROWS_AS(parse_formula("F[<x] p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p $ q"), ParseError);
}

TEST_CASE("closure and size") {
  CHECK(closure(Formula::atom("p")).size() == 1);
  CHECK(closure(parse_formula("F[<=x] p")).size() == 2);
  // G over the implication, the disjunction, !q, F[<=x] p, p, and the two nodes of ff
  Formula g = parse_formula("G (q -> F[<=x] p)");
  auto cl = closure(g);
  CHECK(cl.count(parse_formula("q -> F[<=x] p")));
  CHECK(cl.count(Formula::neg_atom("q")));
  CHECK(cl.count(parse_formula("F[<=x] p")));
  CHECK(cl.count(Formula::atom("p")));
  CHECK(cl.count(g));
  CHECK(cl.size() == 5 + 3);
}

TEST_CASE("variables and fragments") {
  auto v = variables(parse_formula("G (q -> F[<=x] p)"));
  CHECK(v.eventually == std::set<std::string>{"x"});
  CHECK(v.always.empty());
  v = variables(parse_formula("F[<=x] p & G[<=y] q"));
  CHECK(v.eventually == std::set<std::string>{"x"});
  CHECK(v.always == std::set<std::string>{"y"});
  CHECK(classify(parse_formula("G (q -> F[<=x] p)")) == FragmentClass::f_fragment);
  CHECK(classify(parse_formula("G[<=y] p")) == FragmentClass::g_fragment);
  CHECK(classify(parse_formula("F[<=x] p & G[<=x] q")) == FragmentClass::ill_formed);
  CHECK(classify(parse_formula("F[<=x] p & G[<=y] q")) == FragmentClass::mixed_well_formed);
  CHECK(classify(parse_formula("G F p")) == FragmentClass::ltl);
  CHECK_FALSE(is_well_formed(parse_formula("F[<=x] p & G[<=x] q")));
}

TEST_CASE("negation duals") {
  CHECK(negate(parse_formula("F[<=x] p")) == parse_formula("G[<=x] !p"));
  CHECK(negate(parse_formula("p U q")) == parse_formula("!p R !q"));
  CHECK(negate(parse_formula("F[<=x@2] p", 2)) == parse_formula("G[<=x@2] !p", 2));
}

TEST_CASE("random formulas: round trip, involution, size, fragments") {
  gen::Rng rng(7);
  gen::FormulaShape shape;
  for (int i = 0; i < 2000; ++i) {
    shape.dimension = static_cast<int>(gen::uniform(rng, 1, 3));
    Formula f = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 12)), shape);
    CHECK(parse_formula(f.to_string(), shape.dimension) == f);
    Formula n = negate(f);
    CHECK(negate(n) == f);
    CHECK(formula_size(n) == formula_size(f));
    CHECK(is_well_formed(n) == is_well_formed(f));
    FragmentClass c = classify(f);
    FragmentClass d = classify(n);
    if (c == FragmentClass::f_fragment) CHECK(d == FragmentClass::g_fragment);
    if (c == FragmentClass::g_fragment) CHECK(d == FragmentClass::f_fragment);
    if (c == FragmentClass::ltl) CHECK(d == FragmentClass::ltl);
  }
}

TEST_CASE("eliminate_param_always") {
  Formula f = eliminate_param_always(parse_formula("G[<=y] p"));
  CHECK(f == parse_formula("p & X (kappa R (kappa | p))"));
  Formula plain = parse_formula("G (q -> F[<=x] p)");
  CHECK(eliminate_param_always(plain) == plain);
  Formula nested = eliminate_param_always(parse_formula("G[<=y] G[<=z] p"));
  CHECK(variables(nested).all().empty());
  CHECK(nested == parse_formula(
                      "(p & X (kappa R (kappa | p))) & X (kappa R (kappa | (p & X (kappa R (kappa | p)))))"));
  Formula m = eliminate_param_always(parse_formula("G[<=y@2] p", 2), 2);
  CHECK(atoms(m).count("kappa_2"));
  Formula partial = eliminate_param_always_for(parse_formula("G[<=y] p & G[<=z] q"), {"y"});
  CHECK(variables(partial).always == std::set<std::string>{"z"});

  gen::Rng rng(11);
  gen::FormulaShape shape;
  for (int i = 0; i < 500; ++i) {
    Formula g = gen::formula(rng, static_cast<int>(gen::uniform(rng, 1, 10)), shape);
    Formula e = eliminate_param_always(g);
    CHECK(variables(e).always.empty());
    CHECK(is_f_fragment(e));
  }
}
