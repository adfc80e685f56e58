#include "costal/optimize.hpp"

#include <stdexcept>

#include "costal/games.hpp"
#include "costal/modelcheck.hpp"

namespace costal {

Objective parse_objective(const std::string& text) {
  if (text == "minmin") return {false, false};
  if (text == "minmax") return {false, true};
  if (text == "maxmin") return {true, false};
  if (text == "maxmax") return {true, true};
  throw std::invalid_argument("unknown objective '" + text + "' (expected minmin, minmax, maxmin or maxmax)");
}

std::string to_string(Objective o) {
  return std::string(o.maximize ? "max" : "min") + (o.aggregate_max ? "max" : "min");
}

std::string to_string(OptStatus s) {
  switch (s) {
    case OptStatus::value: return "value";
    case OptStatus::infeasible: return "infeasible";
    case OptStatus::universal: return "universal";
    case OptStatus::unbounded: return "unbounded";
    case OptStatus::unknown: return "unknown";
  }
  return "?";
}

std::optional<std::uint64_t> binary_search(const std::function<bool(std::uint64_t)>& decide, std::uint64_t lo,
                                           std::uint64_t hi, SearchDirection dir, std::size_t* calls) {
  if (lo > hi) throw std::invalid_argument("binary_search: empty range");
  auto ask = [&](std::uint64_t v) {
    if (calls) ++*calls;
    return decide(v);
  };
  bool at_lo = ask(lo);
  bool at_hi = lo == hi ? at_lo : ask(hi);
  if (dir == SearchDirection::least) {
    if (at_lo && !at_hi) throw std::logic_error("binary_search: decision is not monotone");
    if (!at_hi) return std::nullopt;
    if (at_lo) return lo;
    // invariant: !decide(lo), decide(hi)
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (ask(mid)) hi = mid; else lo = mid;
    }
    return hi;
  }
  if (!at_lo && at_hi) throw std::logic_error("binary_search: decision is not monotone");
  if (!at_lo) return std::nullopt;
  if (at_hi) return hi;
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (ask(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

std::optional<std::uint64_t> galloping_search(const std::function<bool(std::uint64_t)>& decide, std::uint64_t lo,
                                              std::uint64_t hi, SearchDirection dir, std::size_t* calls) {
  if (lo > hi) throw std::invalid_argument("galloping_search: empty range");
  auto ask = [&](std::uint64_t v) {
    if (calls) ++*calls;
    return decide(v);
  };
  bool least = dir == SearchDirection::least;
  bool first = ask(lo);
  if (least && first) return lo;
  if (!least && !first) return std::nullopt;
  // decide(last) == !least throughout; probe with doubling steps
  std::uint64_t last = lo, step = 1;
  for (;;) {
    std::uint64_t probe = hi - last <= step ? hi : last + step;
    if (ask(probe) == least) {
      std::uint64_t a = last, b = probe;  // decide(a) == !least, decide(b) == least
      while (b - a > 1) {
        std::uint64_t mid = a + (b - a) / 2;
        if (ask(mid) == least) b = mid; else a = mid;
      }
      return least ? b : a;
    }
    if (probe == hi) return least ? std::nullopt : std::optional<std::uint64_t>(hi);
    last = probe;
    step *= 2;
  }
}

namespace {

using Decide = std::function<bool(const Valuation&)>;
// Returns nullopt when the variables listed are known to be unbounded.
using CeilingFn = std::function<std::optional<std::uint64_t>(const std::set<std::string>& free)>;

Valuation uniform(const std::set<std::string>& vars, std::uint64_t v) {
  Valuation a;
  for (const auto& x : vars) a[x] = v;
  return a;
}

// `feasible` decides whether some valuation works; only used for eventually-variables.
OptResult optimize_core(const std::set<std::string>& vars, Objective obj, const Decide& decide_raw,
                        const std::function<bool()>& feasible, const CeilingFn& ceiling_of, std::uint64_t cap) {
  OptResult r;
  auto decide = [&](const Valuation& a) {
    ++r.decisions;
    return decide_raw(a);
  };
  if (vars.empty()) {
    r.no_variables = true;
    r.status = decide({}) ? OptStatus::value : OptStatus::infeasible;
    return r;
  }
  auto clip = [&](std::optional<std::uint64_t> c, bool& cut) -> std::optional<std::uint64_t> {
    if (c && *c > cap) {
      cut = true;
      return cap;
    }
    return c;
  };
  auto unreached = [&] {
    if (!r.truncated) throw std::logic_error("no valuation below the ceiling");
    r.status = OptStatus::unknown;
    r.value = r.ceiling;
    return r;
  };

  if (!obj.maximize) {
    if (!feasible()) {
      r.status = OptStatus::infeasible;
      return r;
    }
    auto c = clip(ceiling_of(vars), r.truncated);
    if (!c) throw std::logic_error("eventually-variables cannot be unbounded");
    r.ceiling = *c;
    if (obj.aggregate_max) {
      auto v = galloping_search([&](std::uint64_t v) { return decide(uniform(vars, v)); }, 0, r.ceiling);
      if (!v) return unreached();
      r.status = OptStatus::value;
      r.value = *v;
      r.valuation = uniform(vars, *v);
      return r;
    }
    std::optional<std::uint64_t> best;
    for (const auto& x : vars) {
      Valuation a = uniform(vars, r.ceiling);
      std::uint64_t hi = best ? *best : r.ceiling;
      auto v = galloping_search(
          [&](std::uint64_t v) {
            a[x] = v;
            return decide(a);
          },
          0, hi);
      if (v && (!best || *v < *best)) {
        best = v;
        a[x] = *v;
        r.valuation = a;
      }
    }
    if (!best) return unreached();
    r.status = OptStatus::value;
    r.value = *best;
    return r;
  }

  if (!decide(uniform(vars, 0))) {
    r.status = OptStatus::infeasible;
    return r;
  }
  auto c = clip(ceiling_of(vars), r.truncated);
  if (!c) {
    r.status = OptStatus::universal;
    return r;
  }
  r.ceiling = *c;
  if (!obj.aggregate_max || vars.size() == 1) {
    std::uint64_t v = *galloping_search([&](std::uint64_t v) { return decide(uniform(vars, v)); }, 0, r.ceiling,
                                        SearchDirection::greatest);
    if (v == r.ceiling) {
      r.status = r.truncated ? OptStatus::unknown : OptStatus::universal;
      r.value = r.truncated ? v : 0;
      return r;
    }
    r.status = OptStatus::value;
    r.value = v;
    r.valuation = uniform(vars, v);
    return r;
  }
  std::optional<std::uint64_t> best;
  for (const auto& y : vars) {
    bool cut = false;
    auto cy = clip(ceiling_of({y}), cut);
    Valuation a = uniform(vars, 0);
    std::optional<std::uint64_t> v;
    if (cy) {
      v = galloping_search(
          [&](std::uint64_t v) {
            a[y] = v;
            return decide(a);
          },
          0, *cy, SearchDirection::greatest);
    }
    if (!cy || *v == *cy) {
      if (cut) {
        r.truncated = true;
        r.status = OptStatus::unknown;
        r.value = cap;
      } else {
        r.status = OptStatus::unbounded;
      }
      a[y] = cap;
      r.valuation = a;
      return r;
    }
    r.truncated = r.truncated || cut;
    if (!best || *v > *best) {
      best = v;
      a[y] = *v;
      r.valuation = a;
    }
  }
  r.status = OptStatus::value;
  r.value = *best;
  return r;
}

std::set<std::string> others(const std::set<std::string>& vars, const std::set<std::string>& free) {
  std::set<std::string> o;
  for (const auto& v : vars) {
    if (!free.count(v)) o.insert(v);
  }
  return o;
}

void check_fragment(const Formula& phi, Objective obj) {
  if (!is_well_formed(phi)) throw std::invalid_argument("formula is not well-formed");
  if (obj.maximize && !is_g_fragment(phi)) {
    throw std::invalid_argument("objective " + to_string(obj) + " needs a formula in the G-fragment");
  }
  if (!obj.maximize && !is_f_fragment(phi)) {
    throw std::invalid_argument("objective " + to_string(obj) + " needs a formula in the F-fragment");
  }
}

}  // namespace

OptResult mc_optimize(const TransitionSystem& s, const Formula& phi, Objective obj, const OptOptions& opt) {
  if (auto v = validate_system(s)) throw std::invalid_argument("invalid system: " + v->message);
  if (s.dimension != 1) throw std::invalid_argument("optimization needs dimension 1");
  check_fragment(phi, obj);
  if (max_coord(phi) > 1) throw std::invalid_argument("formula uses a coordinate above the dimension");
  VariableSets vs = variables(phi);
  const std::set<std::string>& vars = obj.maximize ? vs.always : vs.eventually;
  Decide decide = [&](const Valuation& a) { return fixed_valuation_check(s, phi, a, opt.budget).holds; };
  auto feasible = [&] {
    McOptions m;
    m.max_states = opt.max_states;
    return model_check(s, phi, m).sat;
  };
  CeilingFn ceiling = [&](const std::set<std::string>& free) -> std::optional<std::uint64_t> {
    if (!obj.maximize) return mc_bound(s, phi);
    return g_fragment_bound(s, eliminate_param_always_for(phi, others(vars, free), 1));
  };
  return optimize_core(vars, obj, decide, feasible, ceiling, opt.budget.max_alpha);
}

OptResult game_optimize(const Arena& a, const Formula& phi, Objective obj, const OptOptions& opt) {
  if (auto v = validate_system(a)) throw std::invalid_argument("invalid arena: " + v->message);
  if (a.dimension != 1) throw std::invalid_argument("optimization needs dimension 1");
  check_fragment(phi, obj);
  if (max_coord(phi) > 1) throw std::invalid_argument("formula uses a coordinate above the dimension");
  VariableSets vs = variables(phi);
  const std::set<std::string>& vars = obj.maximize ? vs.always : vs.eventually;
  GameOptions gopt;
  gopt.max_states = opt.max_states;
  Decide decide;
  CeilingFn ceiling;
  std::optional<GameResult> solved;
  auto feasible = [&] {
    solved = solve_game(a, phi, gopt);
    return solved->win;
  };
  Arena dual;
  Formula dual_phi = negate(phi);
  if (!obj.maximize) {
    decide = [&](const Valuation& al) { return fixed_valuation_game(a, phi, al, opt.budget).player0_wins; };
    ceiling = [&](const std::set<std::string>&) -> std::optional<std::uint64_t> { return 2 * solved->k; };
  } else {
    dual = swap_players(a);
    decide = [&](const Valuation& al) {
      return !fixed_valuation_game(dual, dual_phi, al, opt.budget).player0_wins;
    };
    ceiling = [&](const std::set<std::string>& free) -> std::optional<std::uint64_t> {
      Formula f = eliminate_param_always_for(phi, others(vars, free), a.dimension);
      GameResult g = solve_game(dual, negate(f), gopt);
      if (!g.win) return std::nullopt;
      return 2 * g.k;
    };
  }
  OptResult r = optimize_core(vars, obj, decide, feasible, ceiling, opt.budget.max_alpha);
  if (r.status == OptStatus::value) {
    FixedGameResult g = fixed_valuation_game(a, phi, r.valuation, opt.budget);
    if (!g.player0_wins) throw std::logic_error("optimal valuation is not winning");
    r.strategy = trim_strategy(a, *g.strategy);
  }
  return r;
}

}  // namespace costal
