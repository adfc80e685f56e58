#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace costal {

/// Core node kinds. Derived operators (tt, ff, F, G, U/R with bounds, ">" bounds)
/// are expanded by the parser and never stored.
enum class Op {
  atom,
  neg_atom,
  conj,
  disj,
  next,
  until,
  release,
  param_eventually,
  param_always,
};

/// Values assigned to parameter variables, in cost units.
using Valuation = std::map<std::string, std::uint64_t>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Immutable formula in negation normal form. Copies share structure.
///
/// Equality and ordering are structural; they go through the canonical
/// printed form, which every node caches at construction.
class Formula {
 public:
  Formula();  // the atom "@tt" (always false); only useful as a placeholder

  Op op() const { return node_->op; }
  /// Proposition name for literals, variable name for parameterized nodes.
  const std::string& name() const { return node_->name; }
  /// Cost coordinate (1-based) of a parameterized node; 0 otherwise.
  int coord() const { return node_->coord; }
  const std::vector<Formula>& children() const { return node_->kids; }
  const Formula& child(std::size_t i) const { return node_->kids.at(i); }
  const Formula& lhs() const { return node_->kids.at(0); }
  const Formula& rhs() const { return node_->kids.at(1); }

  bool is_literal() const { return op() == Op::atom || op() == Op::neg_atom; }
  bool is_parameterized() const {
    return op() == Op::param_eventually || op() == Op::param_always;
  }

  /// Canonical text; parse(to_string()) reproduces the formula.
  const std::string& to_string() const { return node_->key; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return a.node_ == b.node_ || a.node_->key == b.node_->key;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) {
    return a.node_->key < b.node_->key;
  }

  // Construction.
  static Formula atom(const std::string& p);
  static Formula neg_atom(const std::string& p);
  static Formula conj(const Formula& a, const Formula& b);
  static Formula disj(const Formula& a, const Formula& b);
  static Formula next(const Formula& a);
  static Formula until(const Formula& a, const Formula& b);
  static Formula release(const Formula& a, const Formula& b);
  static Formula param_eventually(const std::string& var, int coord, const Formula& a);
  static Formula param_always(const std::string& var, int coord, const Formula& a);

  static Formula tt();
  static Formula ff();
  static Formula eventually(const Formula& a) { return until(tt(), a); }
  static Formula always(const Formula& a) { return release(ff(), a); }

  bool is_tt() const;
  bool is_ff() const;

 private:
  struct Node {
    Op op;
    std::string name;
    int coord = 0;
    std::vector<Formula> kids;
    std::string key;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, std::string name, int coord, std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

/// Reserved proposition that never holds; tt and ff are built from it.
inline const std::string kFalseAtom = "@tt";

/// Cost-sign proposition for a coordinate: "kappa" in dimension 1, "kappa_i" otherwise.
std::string kappa_name(int coord, int dimension);
/// Fresh color proposition used by relativization: "@color" / "@color_i".
std::string color_name(int coord, int dimension);

/// Parses the ASCII concrete syntax. Coordinates above `dimension` are rejected.
/// Reserved propositions ("@..." names) are accepted only with allow_reserved.
Formula parse_formula(const std::string& text, int dimension = 1, bool allow_reserved = false);

/// All subformulas; its cardinality is the size of the formula.
std::set<Formula> closure(const Formula& f);
inline std::size_t formula_size(const Formula& f) { return closure(f).size(); }

struct VariableSets {
  std::set<std::string> eventually;  // variables of param-eventually nodes
  std::set<std::string> always;      // variables of param-always nodes
  std::set<std::string> all() const;
};
VariableSets variables(const Formula& f);

/// Propositions occurring in literals (including reserved ones).
std::set<std::string> atoms(const Formula& f);

/// Largest coordinate used by a parameterized node (0 if none).
int max_coord(const Formula& f);

enum class FragmentClass { ltl, f_fragment, g_fragment, mixed_well_formed, ill_formed };
std::string to_string(FragmentClass c);

FragmentClass classify(const Formula& f);
inline bool is_well_formed(const Formula& f) { return classify(f) != FragmentClass::ill_formed; }
inline bool is_f_fragment(const Formula& f) {
  auto c = classify(f);
  return c == FragmentClass::ltl || c == FragmentClass::f_fragment;
}
inline bool is_g_fragment(const Formula& f) {
  auto c = classify(f);
  return c == FragmentClass::ltl || c == FragmentClass::g_fragment;
}

/// Dual formula: same size, complementary truth value everywhere.
Formula negate(const Formula& f);

/// Replaces every G[<=y@i] psi by its value at y = 0, i.e.
/// psi & X(kappa_i R (kappa_i | psi)). The result is in the F-fragment.
Formula eliminate_param_always(const Formula& f, int dimension = 1);

/// Substitutes nothing but fixes the listed always-variables at zero by
/// eliminating only the operators they parameterize.
Formula eliminate_param_always_for(const Formula& f, const std::set<std::string>& vars,
                                   int dimension = 1);

}  // namespace costal
