#include "costal/system.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace costal {

int TransitionSystem::add_state(const std::string& name, Letter label, int owner_of) {
  names.push_back(name);
  labels.push_back(std::move(label));
  owner.push_back(owner_of);
  out.emplace_back();
  return static_cast<int>(names.size()) - 1;
}

int TransitionSystem::add_edge(int from, int to, CostVec cost) {
  edges.push_back({from, to, std::move(cost)});
  int id = static_cast<int>(edges.size()) - 1;
  out.at(from).push_back(id);
  return id;
}

int TransitionSystem::find(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int TransitionSystem::edge_between(int from, int to) const {
  for (int e : out.at(from)) {
    if (edges[e].to == to) return e;
  }
  return -1;
}

std::uint64_t TransitionSystem::max_cost() const {
  std::uint64_t w = 0;
  for (const auto& e : edges) {
    for (auto c : e.cost) w = std::max(w, c);
  }
  return w;
}

std::optional<SystemViolation> validate_system(const TransitionSystem& s) {
  if (s.size() == 0) return SystemViolation{"system has no states"};
  if (s.initial < 0 || s.initial >= static_cast<int>(s.size())) return SystemViolation{"initial state out of range"};
  if (s.dimension < 1) return SystemViolation{"dimension must be >= 1"};
  for (std::size_t e = 0; e < s.edges.size(); ++e) {
    const auto& ed = s.edges[e];
    int id = static_cast<int>(e);
    if (ed.cost.size() != static_cast<std::size_t>(s.dimension)) {
      return SystemViolation{"edge " + s.names[ed.from] + " -> " + s.names[ed.to] + " has wrong cost dimension",
                             ed.from, id};
    }
    for (int i = 1; i <= s.dimension; ++i) {
      bool kappa = s.labels[ed.to].count(kappa_name(i, s.dimension)) > 0;
      bool positive = ed.cost[i - 1] > 0;
      if (kappa != positive) {
        std::string msg = "edge " + s.names[ed.from] + " -> " + s.names[ed.to] + ": " +
                          kappa_name(i, s.dimension) + (kappa ? " labels the target but the cost is 0"
                                                               : " is missing from the target but the cost is positive");
        return SystemViolation{msg, ed.to, id};
      }
    }
  }
  for (std::size_t v = 0; v < s.size(); ++v) {
    int id = static_cast<int>(v);
    if (s.out[v].empty()) return SystemViolation{"state " + s.names[v] + " has no successor", id};
    if (s.owner[v] != 0 && s.owner[v] != 1) return SystemViolation{"state " + s.names[v] + " has an invalid owner", id};
    std::vector<int> targets;
    for (int e : s.out[v]) targets.push_back(s.edges[e].to);
    std::sort(targets.begin(), targets.end());
    auto dup = std::adjacent_find(targets.begin(), targets.end());
    if (dup != targets.end()) {
      return SystemViolation{"parallel edges " + s.names[v] + " -> " + s.names[*dup], id,
                             s.edge_between(id, *dup)};
    }
  }
  return std::nullopt;
}

namespace {

class SystemReader {
 public:
  explicit SystemReader(const std::string& s) : s_(s) {}

  TransitionSystem read() {
    TransitionSystem sys;
    std::string head = ident();
    if (head == "arena") sys.arena = true;
    else if (head != "system") fail("expected 'system' or 'arena'", 0);
    word("d");
    sym('=');
    sys.dimension = static_cast<int>(number());
    if (sys.dimension < 1) fail("dimension must be >= 1");
    sym(';');
    bool has_initial = false;
    struct PendingEdge {
      std::string from, to;
      CostVec cost;
      std::size_t at;
    };
    std::vector<PendingEdge> pending;
    while (peek() != '\0') {
      std::size_t at = i_;
      std::string kw = ident();
      if (kw == "state") {
        std::string name = ident();
        if (sys.find(name) >= 0) fail("duplicate state '" + name + "'", at);
        word("labels");
        Letter l = letter();
        int owner = 0;
        bool initial = false;
        while (peek() != ';') {
          std::size_t here = i_;
          std::string opt = ident();
          if (opt == "owner") {
            owner = static_cast<int>(number());
            if (owner > 1) fail("owner must be 0 or 1", here);
          } else if (opt == "initial") {
            initial = true;
          } else {
            fail("unexpected '" + opt + "'", here);
          }
        }
        sym(';');
        int id = sys.add_state(name, std::move(l), owner);
        if (initial) {
          if (has_initial) fail("second initial state", at);
          has_initial = true;
          sys.initial = id;
        }
      } else if (kw == "edge") {
        PendingEdge e;
        e.at = at;
        e.from = ident();
        sym('-');
        sym('>');
        e.to = ident();
        word("cost");
        if (peek() == '(') {
          ++i_;
          e.cost.push_back(number());
          while (peek() == ',') {
            ++i_;
            e.cost.push_back(number());
          }
          sym(')');
        } else {
          e.cost.push_back(number());
        }
        if (e.cost.size() != static_cast<std::size_t>(sys.dimension)) fail("cost vector has wrong dimension", at);
        sym(';');
        pending.push_back(std::move(e));
      } else {
        fail("expected 'state' or 'edge'", at);
      }
    }
    if (sys.size() == 0) fail("no states");
    if (!has_initial) fail("no initial state");
    for (auto& e : pending) {
      int from = sys.find(e.from), to = sys.find(e.to);
      if (from < 0) fail("unknown state '" + e.from + "'", e.at);
      if (to < 0) fail("unknown state '" + e.to + "'", e.at);
      sys.add_edge(from, to, std::move(e.cost));
    }
    return sys;
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
  [[noreturn]] void fail(const std::string& msg) { fail(msg, i_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError("system: " + msg, at); }
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
    if (ident() != w) fail(std::string("expected '") + w + "'", at);
  }
  std::uint64_t number() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected number");
    try {
      return std::stoull(s_.substr(start, i_ - start));
    } catch (const std::out_of_range&) {
      fail("number out of range", start);
    }
  }
  Letter letter() {
    Letter l;
    sym('{');
    if (peek() != '}') {
      l.insert(ident());
      while (peek() == ',') {
        ++i_;
        l.insert(ident());
      }
    }
    sym('}');
    return l;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

TransitionSystem parse_system(const std::string& text) { return SystemReader(text).read(); }

std::string format_system(const TransitionSystem& s) {
  std::ostringstream os;
  os << (s.arena ? "arena" : "system") << " d=" << s.dimension << ";\n";
  for (std::size_t v = 0; v < s.size(); ++v) {
    os << "state " << s.names[v] << " labels {";
    bool first = true;
    for (const auto& p : s.labels[v]) {
      os << (first ? "" : ",") << p;
      first = false;
    }
    os << '}';
    if (s.arena) os << " owner " << s.owner[v];
    if (static_cast<int>(v) == s.initial) os << " initial";
    os << ";\n";
  }
  for (const auto& e : s.edges) {
    os << "edge " << s.names[e.from] << " -> " << s.names[e.to] << " cost ";
    if (e.cost.size() == 1) {
      os << e.cost[0];
    } else {
      os << '(';
      for (std::size_t i = 0; i < e.cost.size(); ++i) os << (i ? "," : "") << e.cost[i];
      os << ')';
    }
    os << ";\n";
  }
  return os.str();
}

CostTrace trace_of_path(const TransitionSystem& s, const std::vector<int>& stem,
                        const std::vector<int>& loop) {
  if (loop.empty()) throw std::invalid_argument("trace_of_path: empty loop");
  std::vector<int> all = stem;
  all.insert(all.end(), loop.begin(), loop.end());
  CostTrace w;
  w.dimension = s.dimension;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int from = all[i];
    int to = i + 1 < all.size() ? all[i + 1] : loop.front();
    int e = s.edge_between(from, to);
    if (e < 0) throw std::invalid_argument("trace_of_path: no edge " + s.names[from] + " -> " + s.names[to]);
    Step st{s.labels[from], s.edges[e].cost};
    (i < stem.size() ? w.prefix : w.cycle).push_back(std::move(st));
  }
  return w;
}

}  // namespace costal

namespace costal {

std::string format_strategy(const TransitionSystem& a, const Strategy& s) {
  std::ostringstream os;
  os << "strategy player=" << s.player << " memory=" << s.size() << " initial=" << s.initial_memory << ";\n";
  for (std::size_t m = 0; m < s.size(); ++m) {
    for (std::size_t v = 0; v < a.size(); ++v) {
      int t = s.next[m][v];
      if (t < 0) continue;
      os << "(" << m << ", " << a.names[v] << ") -> (" << a.names[t] << ", " << s.update[m][t] << ");\n";
    }
  }
  return os.str();
}

}  // namespace costal
