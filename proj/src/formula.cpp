#include "costal/formula.hpp"

#include <cctype>
#include <functional>
#include <optional>

namespace costal {

Formula::Formula() : Formula(make(Op::atom, kFalseAtom, 0, {})) {}

Formula Formula::make(Op op, std::string name, int coord, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->coord = coord;
  n->kids = std::move(kids);
  auto coord_suffix = [&] { return n->coord == 1 ? std::string() : "@" + std::to_string(n->coord); };
  switch (op) {
    case Op::atom:
      n->key = n->name;
      break;
    case Op::neg_atom:
      n->key = "!" + n->name;
      break;
    case Op::conj:
    case Op::disj: {
      const auto& a = n->kids[0];
      const auto& b = n->kids[1];
      bool is_const = a.is_literal() && b.is_literal() && a.name() == kFalseAtom &&
                      b.name() == kFalseAtom && a.op() != b.op();
      if (is_const) {
        n->key = op == Op::disj ? "tt" : "ff";
      } else {
        n->key = "(" + a.to_string() + (op == Op::conj ? " & " : " | ") + b.to_string() + ")";
      }
      break;
    }
    case Op::next:
      n->key = "X " + n->kids[0].to_string();
      break;
    case Op::until:
      n->key = "(" + n->kids[0].to_string() + " U " + n->kids[1].to_string() + ")";
      break;
    case Op::release:
      n->key = "(" + n->kids[0].to_string() + " R " + n->kids[1].to_string() + ")";
      break;
    case Op::param_eventually:
      n->key = "F[<=" + n->name + coord_suffix() + "] " + n->kids[0].to_string();
      break;
    case Op::param_always:
      n->key = "G[<=" + n->name + coord_suffix() + "] " + n->kids[0].to_string();
      break;
  }
  return Formula(std::move(n));
}

Formula Formula::atom(const std::string& p) { return make(Op::atom, p, 0, {}); }
Formula Formula::neg_atom(const std::string& p) { return make(Op::neg_atom, p, 0, {}); }
Formula Formula::conj(const Formula& a, const Formula& b) { return make(Op::conj, "", 0, {a, b}); }
Formula Formula::disj(const Formula& a, const Formula& b) { return make(Op::disj, "", 0, {a, b}); }
Formula Formula::next(const Formula& a) { return make(Op::next, "", 0, {a}); }
Formula Formula::until(const Formula& a, const Formula& b) { return make(Op::until, "", 0, {a, b}); }
Formula Formula::release(const Formula& a, const Formula& b) {
  return make(Op::release, "", 0, {a, b});
}
Formula Formula::param_eventually(const std::string& var, int coord, const Formula& a) {
  if (coord < 1) throw std::invalid_argument("coordinate must be >= 1");
  return make(Op::param_eventually, var, coord, {a});
}
Formula Formula::param_always(const std::string& var, int coord, const Formula& a) {
  if (coord < 1) throw std::invalid_argument("coordinate must be >= 1");
  return make(Op::param_always, var, coord, {a});
}

Formula Formula::tt() {
  static const Formula t = disj(atom(kFalseAtom), neg_atom(kFalseAtom));
  return t;
}
Formula Formula::ff() {
  static const Formula f = conj(atom(kFalseAtom), neg_atom(kFalseAtom));
  return f;
}
bool Formula::is_tt() const { return to_string() == "tt"; }
bool Formula::is_ff() const { return to_string() == "ff"; }

std::string kappa_name(int coord, int dimension) {
  return dimension == 1 ? std::string("kappa") : "kappa_" + std::to_string(coord);
}
std::string color_name(int coord, int dimension) {
  return dimension == 1 ? std::string("@color") : "@color_" + std::to_string(coord);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { ident, lparen, rparen, lbrack, rbrack, bang, amp, bar, arrow, le, gt, at, number, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s, bool allow_reserved) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    bool reserved = c == '@' && i + 1 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 1]));
    if (reserved && !allow_reserved) throw ParseError("reserved proposition name", start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || reserved) {
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::ident, s.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::number, s.substr(start, i - start), start});
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::lparen, "(", start}); ++i; continue;
      case ')': out.push_back({Tok::rparen, ")", start}); ++i; continue;
      case '[': out.push_back({Tok::lbrack, "[", start}); ++i; continue;
      case ']': out.push_back({Tok::rbrack, "]", start}); ++i; continue;
      case '!': out.push_back({Tok::bang, "!", start}); ++i; continue;
      case '&': out.push_back({Tok::amp, "&", start}); ++i; continue;
      case '|': out.push_back({Tok::bar, "|", start}); ++i; continue;
      case '@': out.push_back({Tok::at, "@", start}); ++i; continue;
      case '>': out.push_back({Tok::gt, ">", start}); ++i; continue;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::arrow, "->", start});
          i += 2;
          continue;
        }
        break;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::le, "<=", start});
          i += 2;
          continue;
        }
        break;
      default:
        break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::end, "", s.size()});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "X" || s == "F" || s == "G" || s == "U" || s == "R" || s == "tt" || s == "ff";
}

struct Bound {
  bool upper = true;  // "<=" vs ">"
  std::string var;
  int coord = 1;
};

class Parser {
 public:
  Parser(const std::string& text, int dimension, bool allow_reserved)
      : toks_(lex(text, allow_reserved)), dim_(dimension) {
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
  }

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++i_;
      return true;
    }
    return false;
  }
  bool accept_word(const char* w) {
    if (peek().kind == Tok::ident && peek().text == w) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

  Formula kappa(int coord) const { return Formula::atom(kappa_name(coord, dim_)); }
  Formula not_kappa(int coord) const { return Formula::neg_atom(kappa_name(coord, dim_)); }

  Formula implication() {
    std::size_t pos = peek().pos;
    Formula left = disjunction();
    if (accept(Tok::arrow)) {
      if (!left.is_literal() || left.name() == kFalseAtom) {
        throw ParseError("left side of '->' must be a proposition or its negation", pos);
      }
      Formula right = implication();
      Formula neg = left.op() == Op::atom ? Formula::neg_atom(left.name()) : Formula::atom(left.name());
      return Formula::disj(neg, right);
    }
    return left;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::bar)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = binary_temporal();
    while (accept(Tok::amp)) f = Formula::conj(f, binary_temporal());
    return f;
  }

  Formula binary_temporal() {
    Formula left = unary();
    if (peek().kind == Tok::ident && (peek().text == "U" || peek().text == "R")) {
      bool is_until = take().text == "U";
      std::optional<Bound> b;
      if (peek().kind == Tok::lbrack) b = bound();
      Formula right = binary_temporal();
      if (!b) return is_until ? Formula::until(left, right) : Formula::release(left, right);
      return is_until ? bounded_until(left, right, *b) : bounded_release(left, right, *b);
    }
    return left;
  }

  Formula unary() {
    const Token& t = peek();
    if (accept(Tok::lparen)) {
      Formula f = implication();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (accept(Tok::bang)) {
      if (peek().kind != Tok::ident || is_keyword(peek().text)) {
        fail("negation is only allowed on propositions");
      }
      return Formula::neg_atom(take().text);
    }
    if (t.kind != Tok::ident) fail(t.kind == Tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    if (accept_word("tt")) return Formula::tt();
    if (accept_word("ff")) return Formula::ff();
    if (accept_word("X")) return Formula::next(unary());
    if (accept_word("F")) {
      std::optional<Bound> b;
      if (peek().kind == Tok::lbrack) b = bound();
      Formula a = unary();
      if (!b) return Formula::eventually(a);
      if (b->upper) return Formula::param_eventually(b->var, b->coord, a);
      // F[>y] a == G[<=y] F X (kappa & F a)
      return Formula::param_always(
          b->var, b->coord,
          Formula::eventually(Formula::next(Formula::conj(kappa(b->coord), Formula::eventually(a)))));
    }
    if (accept_word("G")) {
      std::optional<Bound> b;
      if (peek().kind == Tok::lbrack) b = bound();
      Formula a = unary();
      if (!b) return Formula::always(a);
      if (b->upper) return Formula::param_always(b->var, b->coord, a);
      // G[>x] a == F[<=x] G X (!kappa | G a)
      return Formula::param_eventually(
          b->var, b->coord,
          Formula::always(Formula::next(Formula::disj(not_kappa(b->coord), Formula::always(a)))));
    }
    if (t.text == "U" || t.text == "R") fail("unexpected '" + t.text + "'");
    return Formula::atom(take().text);
  }

  Bound bound() {
    expect(Tok::lbrack, "'['");
    Bound b;
    if (accept(Tok::le)) {
      b.upper = true;
    } else if (accept(Tok::gt)) {
      b.upper = false;
    } else {
      fail("expected '<=' or '>'");
    }
    if (peek().kind != Tok::ident || is_keyword(peek().text)) fail("expected variable name");
    b.var = take().text;
    if (accept(Tok::at)) {
      if (peek().kind != Tok::number) fail("expected coordinate");
      std::size_t pos = peek().pos;
      b.coord = std::stoi(take().text);
      if (b.coord < 1 || b.coord > dim_) {
        throw ParseError("coordinate " + std::to_string(b.coord) + " exceeds dimension " +
                             std::to_string(dim_),
                         pos);
      }
    }
    expect(Tok::rbrack, "']'");
    return b;
  }

  Formula bounded_until(const Formula& a, const Formula& b, const Bound& bd) {
    if (bd.upper) {
      // a U[<=x] b == a U b & F[<=x] b
      return Formula::conj(Formula::until(a, b), Formula::param_eventually(bd.var, bd.coord, b));
    }
    // a U[>y] b == G[<=y] (a & X (a U b) & F X kappa)
    return Formula::param_always(
        bd.var, bd.coord,
        Formula::conj(Formula::conj(a, Formula::next(Formula::until(a, b))),
                      Formula::eventually(Formula::next(kappa(bd.coord)))));
  }

  Formula bounded_release(const Formula& a, const Formula& b, const Bound& bd) {
    if (bd.upper) {
      // a R[<=y] b == a R b | G[<=y] b
      return Formula::disj(Formula::release(a, b), Formula::param_always(bd.var, bd.coord, b));
    }
    // a R[>x] b == F[<=x] (a | X (a R b) | G X !kappa)
    return Formula::param_eventually(
        bd.var, bd.coord,
        Formula::disj(Formula::disj(a, Formula::next(Formula::release(a, b))),
                      Formula::always(Formula::next(not_kappa(bd.coord)))));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int dim_;
};

}  // namespace

Formula parse_formula(const std::string& text, int dimension, bool allow_reserved) {
  return Parser(text, dimension, allow_reserved).parse();
}

// ---------------------------------------------------------------------------
// Structural queries

std::set<Formula> closure(const Formula& f) {
  std::set<Formula> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!out.insert(g).second) continue;
    for (const auto& k : g.children()) stack.push_back(k);
  }
  return out;
}

std::set<std::string> VariableSets::all() const {
  std::set<std::string> out = eventually;
  out.insert(always.begin(), always.end());
  return out;
}

VariableSets variables(const Formula& f) {
  VariableSets v;
  for (const auto& g : closure(f)) {
    if (g.op() == Op::param_eventually) v.eventually.insert(g.name());
    if (g.op() == Op::param_always) v.always.insert(g.name());
  }
  return v;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  for (const auto& g : closure(f)) {
    if (g.is_literal()) out.insert(g.name());
  }
  return out;
}

int max_coord(const Formula& f) {
  int m = 0;
  for (const auto& g : closure(f)) m = std::max(m, g.coord());
  return m;
}

std::string to_string(FragmentClass c) {
  switch (c) {
    case FragmentClass::ltl: return "LTL";
    case FragmentClass::f_fragment: return "F-fragment";
    case FragmentClass::g_fragment: return "G-fragment";
    case FragmentClass::mixed_well_formed: return "mixed-well-formed";
    case FragmentClass::ill_formed: return "ill-formed";
  }
  return "?";
}

FragmentClass classify(const Formula& f) {
  auto v = variables(f);
  for (const auto& x : v.eventually) {
    if (v.always.count(x)) return FragmentClass::ill_formed;
  }
  if (v.eventually.empty() && v.always.empty()) return FragmentClass::ltl;
  if (v.always.empty()) return FragmentClass::f_fragment;
  if (v.eventually.empty()) return FragmentClass::g_fragment;
  return FragmentClass::mixed_well_formed;
}

Formula negate(const Formula& f) {
  switch (f.op()) {
    case Op::atom: return Formula::neg_atom(f.name());
    case Op::neg_atom: return Formula::atom(f.name());
    case Op::conj: return Formula::disj(negate(f.lhs()), negate(f.rhs()));
    case Op::disj: return Formula::conj(negate(f.lhs()), negate(f.rhs()));
    case Op::next: return Formula::next(negate(f.lhs()));
    case Op::until: return Formula::release(negate(f.lhs()), negate(f.rhs()));
    case Op::release: return Formula::until(negate(f.lhs()), negate(f.rhs()));
    case Op::param_eventually: return Formula::param_always(f.name(), f.coord(), negate(f.lhs()));
    case Op::param_always: return Formula::param_eventually(f.name(), f.coord(), negate(f.lhs()));
  }
  throw std::logic_error("negate: unknown node");
}

namespace {

Formula rebuild(const Formula& f, const std::vector<Formula>& kids) {
  switch (f.op()) {
    case Op::atom:
    case Op::neg_atom: return f;
    case Op::conj: return Formula::conj(kids[0], kids[1]);
    case Op::disj: return Formula::disj(kids[0], kids[1]);
    case Op::next: return Formula::next(kids[0]);
    case Op::until: return Formula::until(kids[0], kids[1]);
    case Op::release: return Formula::release(kids[0], kids[1]);
    case Op::param_eventually: return Formula::param_eventually(f.name(), f.coord(), kids[0]);
    case Op::param_always: return Formula::param_always(f.name(), f.coord(), kids[0]);
  }
  throw std::logic_error("rebuild: unknown node");
}

Formula eliminate_impl(const Formula& f, const std::function<bool(const Formula&)>& pick,
                       int dimension) {
  std::vector<Formula> kids;
  kids.reserve(f.children().size());
  for (const auto& k : f.children()) kids.push_back(eliminate_impl(k, pick, dimension));
  if (f.op() == Op::param_always && pick(f)) {
    // G[<=0] psi: psi now and at every position reached through zero-cost steps.
    const Formula& psi = kids[0];
    std::string k = kappa_name(f.coord(), dimension);
    return Formula::conj(
        psi, Formula::next(Formula::release(Formula::atom(k), Formula::disj(Formula::atom(k), psi))));
  }
  return rebuild(f, kids);
}

}  // namespace

Formula eliminate_param_always(const Formula& f, int dimension) {
  return eliminate_impl(f, [](const Formula&) { return true; }, dimension);
}

Formula eliminate_param_always_for(const Formula& f, const std::set<std::string>& vars,
                                   int dimension) {
  return eliminate_impl(f, [&](const Formula& g) { return vars.count(g.name()) > 0; }, dimension);
}

}  // namespace costal
