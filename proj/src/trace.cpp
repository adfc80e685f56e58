#include "costal/trace.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace costal {

namespace {

std::uint64_t add_cost(std::uint64_t a, std::uint64_t b) {
  if (a > kInfiniteCost - b) throw std::overflow_error("cost accumulation overflows 64 bits");
  return a + b;
}

}  // namespace

std::optional<TraceViolation> validate_trace(const CostTrace& w) {
  if (w.dimension < 1) return TraceViolation{0, 0, "dimension must be >= 1"};
  if (w.cycle.empty()) return TraceViolation{0, 0, "cycle must be nonempty"};
  std::size_t len = w.lasso_length();
  for (std::size_t n = 0; n < len; ++n) {
    const Step& s = w.at(n);
    if (s.cost.size() != static_cast<std::size_t>(w.dimension)) {
      return TraceViolation{n, 0, "cost vector has wrong dimension"};
    }
  }
  for (std::size_t n = 0; n < len; ++n) {
    const Step& s = w.at(n);
    std::size_t next = w.successor(n);
    const Step& t = w.at(next);
    for (int i = 1; i <= w.dimension; ++i) {
      bool has = t.letter.count(kappa_name(i, w.dimension)) > 0;
      bool positive = s.cost[i - 1] > 0;
      if (has != positive) {
        std::string msg = has ? kappa_name(i, w.dimension) + " present but incoming cost is 0"
                              : kappa_name(i, w.dimension) + " missing after positive cost";
        return TraceViolation{next, i, msg};
      }
    }
  }
  return std::nullopt;
}

CostVec infix_cost(const CostTrace& w, std::size_t from, std::size_t to) {
  if (from > to) throw std::invalid_argument("infix_cost: from > to");
  CostVec c(w.dimension, 0);
  for (std::size_t n = from; n < to; ++n) {
    const Step& s = w.at(n);
    for (int i = 0; i < w.dimension; ++i) c[i] = add_cost(c[i], s.cost[i]);
  }
  return c;
}

CostVec trace_cost(const CostTrace& w) {
  CostVec c(w.dimension, 0);
  for (int i = 0; i < w.dimension; ++i) {
    std::uint64_t cyc = 0;
    for (const auto& s : w.cycle) cyc = add_cost(cyc, s.cost[i]);
    if (cyc > 0) {
      c[i] = kInfiniteCost;
      continue;
    }
    for (const auto& s : w.prefix) c[i] = add_cost(c[i], s.cost[i]);
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

class Oracle {
 public:
  Oracle(const CostTrace& w, const Valuation& alpha) : w_(w), alpha_(alpha), len_(w.lasso_length()) {
    if (w.cycle.empty()) throw std::invalid_argument("trace cycle must be nonempty");
  }

  const std::vector<bool>& truth(const Formula& f) {
    auto it = memo_.find(f.to_string());
    if (it != memo_.end()) return it->second;
    std::vector<bool> t = compute(f);
    return memo_.emplace(f.to_string(), std::move(t)).first->second;
  }

 private:
  std::vector<bool> compute(const Formula& f) {
    std::vector<bool> t(len_, false);
    switch (f.op()) {
      case Op::atom:
      case Op::neg_atom: {
        bool pos = f.op() == Op::atom;
        for (std::size_t n = 0; n < len_; ++n) t[n] = (w_.at(n).letter.count(f.name()) > 0) == pos;
        return t;
      }
      case Op::conj:
      case Op::disj: {
        std::vector<bool> a = truth(f.lhs());
        const std::vector<bool>& b = truth(f.rhs());
        for (std::size_t n = 0; n < len_; ++n) t[n] = f.op() == Op::conj ? (a[n] && b[n]) : (a[n] || b[n]);
        return t;
      }
      case Op::next: {
        const std::vector<bool>& a = truth(f.lhs());
        for (std::size_t n = 0; n < len_; ++n) t[n] = a[w_.successor(n)];
        return t;
      }
      case Op::until:
      case Op::release: {
        std::vector<bool> a = truth(f.lhs());
        const std::vector<bool>& b = truth(f.rhs());
        bool until = f.op() == Op::until;
        t.assign(len_, !until);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t k = len_; k-- > 0;) {
            bool v = until ? (b[k] || (a[k] && t[w_.successor(k)]))
                           : (b[k] && (a[k] || t[w_.successor(k)]));
            if (v != t[k]) {
              t[k] = v;
              changed = true;
            }
          }
        }
        return t;
      }
      case Op::param_eventually:
      case Op::param_always: {
        auto it = alpha_.find(f.name());
        if (it == alpha_.end()) throw UnboundVariable("variable '" + f.name() + "' has no value");
        std::uint64_t bound = it->second;
        if (bound > kOracleAlphaCap) throw std::out_of_range("oracle: value of '" + f.name() + "' exceeds 2^20");
        if (f.coord() > w_.dimension) throw std::invalid_argument("formula coordinate exceeds trace dimension");
        const std::vector<bool>& a = truth(f.lhs());
        bool eventually = f.op() == Op::param_eventually;
        int ci = f.coord() - 1;
        std::uint64_t cycle_cost = 0;
        for (const auto& s : w_.cycle) cycle_cost += s.cost[ci];
        for (std::size_t n = 0; n < len_; ++n) {
          // Walk the unrolled trace from n while the infix cost stays within the bound.
          std::size_t stop = std::max(n, w_.prefix.size()) + w_.cycle.size();
          std::uint64_t cost = 0;
          bool result = !eventually;
          for (std::size_t q = n;; ++q) {
            if (a[w_.fold(q)] == eventually) {
              result = eventually;
              break;
            }
            cost = add_cost(cost, w_.at(q).cost[ci]);
            if (cost > bound) break;
            if (cycle_cost == 0 && q + 1 >= stop) break;
          }
          t[n] = result;
        }
        return t;
      }
    }
    throw std::logic_error("oracle: unknown node");
  }

  const CostTrace& w_;
  const Valuation& alpha_;
  std::size_t len_;
  std::map<std::string, std::vector<bool>> memo_;
};

}  // namespace

std::vector<bool> evaluate_all(const CostTrace& w, const Valuation& alpha, const Formula& phi) {
  Oracle o(w, alpha);
  return o.truth(phi);
}

bool evaluate(const CostTrace& w, std::size_t n, const Valuation& alpha, const Formula& phi) {
  return evaluate_all(w, alpha, phi)[w.fold(n)];
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class TraceReader {
 public:
  explicit TraceReader(const std::string& s) : s_(s) {}

  CostTrace read() {
    CostTrace w;
    word("trace");
    word("d");
    sym('=');
    w.dimension = static_cast<int>(number());
    if (w.dimension < 1) fail("dimension must be >= 1");
    sym(';');
    word("prefix");
    sym(':');
    while (peek() == '{') w.prefix.push_back(step(w.dimension));
    sym(';');
    word("cycle");
    sym(':');
    while (peek() == '{') w.cycle.push_back(step(w.dimension));
    if (w.cycle.empty()) fail("cycle must contain at least one step");
    sym(';');
    if (peek() != '\0') fail("trailing input");
    return w;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("trace: " + msg, i_);
  }
  void sym(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  std::string ident() {
    skip();
    std::size_t start = i_;
    if (i_ < s_.size() && s_[i_] == '@') ++i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    if (start == i_) fail("expected identifier");
    return s_.substr(start, i_ - start);
  }
  void word(const char* w) {
    std::size_t at = i_;
    if (ident() != w) {
      i_ = at;
      fail(std::string("expected '") + w + "'");
    }
  }
  std::uint64_t number() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected number");
    try {
      return std::stoull(s_.substr(start, i_ - start));
    } catch (const std::out_of_range&) {
      fail("number out of range");
    }
  }
  Step step(int d) {
    Step st;
    sym('{');
    if (peek() != '}') {
      st.letter.insert(ident());
      while (peek() == ',') {
        ++i_;
        st.letter.insert(ident());
      }
    }
    sym('}');
    sym('/');
    if (peek() == '(') {
      ++i_;
      st.cost.push_back(number());
      while (peek() == ',') {
        ++i_;
        st.cost.push_back(number());
      }
      sym(')');
    } else {
      st.cost.push_back(number());
    }
    if (st.cost.size() != static_cast<std::size_t>(d)) fail("cost vector has wrong dimension");
    return st;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

void write_step(std::ostream& os, const Step& s) {
  os << '{';
  bool first = true;
  for (const auto& p : s.letter) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << "} / ";
  if (s.cost.size() == 1) {
    os << s.cost[0];
  } else {
    os << '(';
    for (std::size_t i = 0; i < s.cost.size(); ++i) os << (i ? "," : "") << s.cost[i];
    os << ')';
  }
}

}  // namespace

CostTrace parse_trace(const std::string& text) { return TraceReader(text).read(); }

std::string format_trace(const CostTrace& w) {
  std::ostringstream os;
  os << "trace d=" << w.dimension << "; prefix:";
  for (const auto& s : w.prefix) {
    os << ' ';
    write_step(os, s);
  }
  os << "; cycle:";
  for (const auto& s : w.cycle) {
    os << ' ';
    write_step(os, s);
  }
  os << ';';
  return os.str();
}

}  // namespace costal
