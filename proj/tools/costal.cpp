// costal: model checking, game solving and valuation optimization for cost-LTL.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "costal/altcolor.hpp"
#include "costal/automata.hpp"
#include "costal/budget.hpp"
#include "costal/games.hpp"
#include "costal/modelcheck.hpp"
#include "costal/multicost.hpp"
#include "costal/optimize.hpp"

using namespace costal;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "costal-verdict/1";
constexpr std::uint64_t kLargeCeiling = 4096;

struct Settings {
  std::string format = "text";
  std::size_t max_states = 1000000;
  std::uint64_t max_alpha = std::uint64_t{1} << 16;
  std::size_t search_depth = 12;
  unsigned jobs = 1;
  std::string objective = "minmax";
  std::vector<std::string> alpha;
  std::string pairs;
  std::string var = "x";
  int dimension = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TransitionSystem load_system(const std::string& path) {
  TransitionSystem s;
  try {
    s = parse_system(slurp(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (auto v = validate_system(s)) throw std::runtime_error(path + ": " + v->message);
  return s;
}

Valuation parse_valuation(const std::vector<std::string>& items) {
  Valuation a;
  for (const auto& group : items) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected var=value, got '" + item + "'");
      std::size_t used = 0;
      std::string num = item.substr(eq + 1);
      std::uint64_t v = std::stoull(num, &used);
      if (used != num.size()) throw std::invalid_argument("bad value in '" + item + "'");
      a[item.substr(0, eq)] = v;
    }
  }
  return a;
}

json valuation_json(const Valuation& a) {
  json j = json::object();
  for (const auto& [k, v] : a) j[k] = v;
  return j;
}

Valuation valuation_from(const json& j) {
  Valuation a;
  for (const auto& [k, v] : j.items()) a[k] = v.get<std::uint64_t>();
  return a;
}

json strategy_json(const Arena& a, const Strategy& s) {
  json j;
  j["kind"] = "strategy";
  j["player"] = s.player;
  j["memory"] = s.size();
  j["initial_memory"] = s.initial_memory;
  j["update"] = s.update;
  j["next"] = s.next;
  json moves = json::array();
  for (std::size_t m = 0; m < s.size(); ++m) {
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (a.owner[v] == s.player && s.next[m][v] >= 0) {
        moves.push_back({m, a.names[v], a.names[s.next[m][v]]});
      }
    }
  }
  j["moves"] = moves;
  return j;
}

Strategy strategy_from(const json& j) {
  Strategy s;
  s.player = j.at("player").get<int>();
  s.initial_memory = j.at("initial_memory").get<int>();
  s.update = j.at("update").get<std::vector<std::vector<int>>>();
  s.next = j.at("next").get<std::vector<std::vector<int>>>();
  return s;
}

int exit_code(const std::string& status) {
  if (status == "sat" || status == "win" || status == "value" || status == "universal" || status == "unbounded" ||
      status == "ok" || status == "true" || status == "valid") {
    return 0;
  }
  if (status == "unsat" || status == "lose" || status == "infeasible" || status == "false" || status == "fail") {
    return 1;
  }
  return 2;
}

json base_record(const std::string& command, const std::string& input, const std::string& formula) {
  json r;
  r["schema"] = kSchema;
  r["command"] = command;
  if (!input.empty()) r["input"] = input;
  if (!formula.empty()) r["formula"] = formula;
  return r;
}

void warn_ceiling(std::uint64_t c) {
  if (c > kLargeCeiling) {
    std::cerr << "warning: ceiling " << c << " is large; the search runs in time polynomial in the unary weights\n";
  }
}

McOptions mc_options(const Settings& st) {
  McOptions o;
  o.max_states = st.max_states;
  return o;
}

BudgetOptions budget_options(const Settings& st, const Valuation& a = {}) {
  BudgetOptions b;
  b.max_states = st.max_states;
  b.max_alpha = st.max_alpha;
  for (const auto& [k, v] : a) b.max_alpha = std::max(b.max_alpha, v);
  return b;
}

json run_check(const Settings& st, const std::string& path, const std::string& text) {
  json r = base_record("check", path, text);
  TransitionSystem s = load_system(path);
  Formula phi = parse_formula(text, s.dimension);
  McResult m = s.dimension == 1 ? model_check(s, phi, mc_options(st)) : mult_model_check(s, phi, st.max_states);
  r["status"] = m.sat ? "sat" : "unsat";
  r["bound"] = m.bound;
  r["automaton_states"] = m.automaton_states;
  r["product_vertices"] = m.product_vertices;
  if (m.sat) {
    r["valuation"] = valuation_json(m.valuation);
  } else if (m.lasso) {
    json w;
    w["kind"] = "lasso";
    json stem = json::array(), loop = json::array();
    for (int v : m.stem_states) stem.push_back(s.names[v]);
    for (int v : m.loop_states) loop.push_back(s.names[v]);
    w["stem"] = stem;
    w["loop"] = loop;
    w["product_stem"] = m.lasso->stem;
    w["product_loop"] = m.lasso->loop;
    w["trace"] = format_trace(trace_of_path(s, m.stem_states, m.loop_states));
    r["witness"] = w;
  }
  return r;
}

json run_game(const Settings& st, const std::string& path, const std::string& text) {
  json r = base_record("solve-game", path, text);
  Arena a = load_system(path);
  Formula phi = parse_formula(text, a.dimension);
  GameOptions o;
  o.max_states = st.max_states;
  GameResult g = solve_game(a, phi, o);
  r["status"] = g.win ? "win" : "lose";
  r["automaton_states"] = g.automaton_states;
  r["extended_vertices"] = g.extended_vertices;
  r["product_vertices"] = g.product_vertices;
  if (g.win) {
    r["valuation"] = valuation_json(g.valuation);
    r["bound"] = g.k;
    r["witness"] = strategy_json(a, g.strategy);
  }
  return r;
}

json run_optimize(const Settings& st, const std::string& path, const std::string& text, bool game) {
  json r = base_record(game ? "optimize-game" : "optimize-mc", path, text);
  Arena a = load_system(path);
  Formula phi = parse_formula(text, a.dimension);
  Objective obj = parse_objective(st.objective);
  OptOptions o;
  o.budget = budget_options(st);
  o.max_states = st.max_states;
  OptResult res = game ? game_optimize(a, phi, obj, o) : mc_optimize(a, phi, obj, o);
  r["objective"] = to_string(obj);
  r["status"] = to_string(res.status);
  if (res.status == OptStatus::value || res.status == OptStatus::unknown) r["value"] = res.value;
  if (res.status == OptStatus::value) r["valuation"] = valuation_json(res.valuation);
  r["no_variables"] = res.no_variables;
  r["ceiling"] = res.ceiling;
  r["truncated"] = res.truncated;
  r["decisions"] = res.decisions;
  if (res.strategy) r["witness"] = strategy_json(a, *res.strategy);
  warn_ceiling(res.ceiling);
  return r;
}

json run_validate(const std::string& path) {
  json r = base_record("validate", path, "");
  std::string text = slurp(path);
  std::string head;
  std::stringstream(text) >> head;
  try {
    if (head.rfind("trace", 0) == 0) {
      CostTrace w = parse_trace(text);
      if (auto v = validate_trace(w)) {
        r["status"] = "error";
        r["message"] = "position " + std::to_string(v->position) + ": " + v->message;
        return r;
      }
      r["kind"] = "trace";
    } else {
      TransitionSystem s = parse_system(text);
      if (auto v = validate_system(s)) {
        r["status"] = "error";
        r["message"] = v->message;
        if (v->edge >= 0) {
          const SystemEdge& e = s.edges[v->edge];
          r["edge"] = s.names[e.from] + " -> " + s.names[e.to];
        }
        if (v->state >= 0) r["state"] = s.names[v->state];
        return r;
      }
      r["kind"] = s.arena ? "arena" : "system";
      r["states"] = s.size();
      r["edges"] = s.edges.size();
    }
  } catch (const ParseError& e) {
    r["status"] = "error";
    r["message"] = e.what();
    r["position"] = e.position();
    return r;
  }
  r["status"] = "valid";
  return r;
}

json run_eval(const Settings& st, const std::string& path, const std::string& text) {
  json r = base_record("eval-trace", path, text);
  CostTrace w = parse_trace(slurp(path));
  if (auto v = validate_trace(w)) {
    throw std::runtime_error(path + ": position " + std::to_string(v->position) + ": " + v->message);
  }
  Formula phi = parse_formula(text, w.dimension);
  Valuation a = parse_valuation(st.alpha);
  bool ok = evaluate(w, 0, a, phi);
  r["status"] = ok ? "true" : "false";
  r["valuation"] = valuation_json(a);
  return r;
}

json run_to_nba(const Settings& st, const std::string& text) {
  json r = base_record("to-nba", "", text);
  Formula phi = parse_formula(text, st.dimension);
  VariableSets vs = variables(phi);
  Formula f = phi;
  if (!vs.all().empty()) {
    f = Formula::conj(relativize(eliminate_param_always(phi, st.dimension), st.dimension), build_chi(st.dimension));
  }
  BuchiAutomaton a = ltl_to_nba(f, Universe(atoms(f)), st.max_states);
  r["status"] = "ok";
  r["states"] = a.size();
  r["hoa"] = to_hoa(a, text);
  return r;
}

json run_streett(const Settings& st) {
  json r = base_record("streett-cost", "", "");
  auto pairs = parse_streett_pairs(st.pairs);
  Formula f = streett_cost_formula(pairs, st.var);
  r["status"] = "ok";
  r["dimension"] = pairs.size();
  r["formula"] = f.to_string();
  return r;
}

json run_audit(const Settings& st, const std::string& path) {
  json v = json::parse(slurp(path));
  json r = base_record("audit", path, "");
  std::string command = v.at("command");
  std::string status = v.at("status");
  r["audited"] = command;
  auto fail = [&](const std::string& why) {
    r["status"] = "fail";
    r["message"] = why;
    return r;
  };
  if (command == "check" || command == "solve-game" || command == "optimize-mc" || command == "optimize-game") {
    TransitionSystem s = load_system(v.at("input"));
    Formula phi = parse_formula(v.at("formula").get<std::string>(), s.dimension);
    Valuation a = v.contains("valuation") ? valuation_from(v["valuation"]) : Valuation{};
    BudgetOptions bo = budget_options(st, a);
    if (command == "check" && status == "unsat") {
      if (!v.contains("witness")) return fail("unsat verdict without a lasso");
      Formula f = eliminate_param_always(phi, s.dimension);
      BuchiAutomaton aut = counterexample_automaton(f, s.dimension, st.max_states);
      ColoredProduct g = build_product(s, aut);
      Lasso l{v["witness"].at("product_stem").get<std::vector<int>>(),
              v["witness"].at("product_loop").get<std::vector<int>>()};
      AuditResult ar = audit_pumpable_lasso(g, l);
      if (!ar.ok) return fail(ar.reason);
      r["method"] = "pumpable lasso";
    } else if ((command == "check" && status == "sat") || (command == "optimize-mc" && status == "value")) {
      if (!fixed_valuation_check(s, phi, a, bo).holds) return fail("valuation does not satisfy the formula");
      r["method"] = "fixed-valuation product";
    } else if ((command == "solve-game" && status == "win") || (command == "optimize-game" && status == "value")) {
      if (!v.contains("witness")) return fail("winning verdict without a strategy");
      Strategy str = strategy_from(v["witness"]);
      VerifyResult vr = verify_strategy(s, str, phi, a, st.search_depth, bo);
      if (!vr.ok) return fail("a consistent play violates the formula: " + format_trace(*vr.counterexample));
      if (!vr.exact) return fail("strategy check was not exact");
      r["method"] = vr.method;
      r["lassos_checked"] = vr.lassos_checked;
    } else {
      r["method"] = "none";
    }
    r["status"] = "ok";
    return r;
  }
  r["status"] = "ok";
  r["method"] = "none";
  return r;
}

std::string text_of(const json& r) {
  std::ostringstream out;
  out << r.value("command", "") << ": " << r.value("status", "");
  if (r.contains("value")) out << " " << r["value"].dump();
  if (r.contains("input")) out << " [" << r["input"].get<std::string>() << "]";
  out << "\n";
  for (const auto& [k, v] : r.items()) {
    if (k == "schema" || k == "command" || k == "status" || k == "input" || k == "value") continue;
    if (k == "hoa") {
      out << v.get<std::string>();
      continue;
    }
    if (k == "witness") {
      if (v.value("kind", "") == "lasso") {
        out << "  witness: stem " << v["stem"].dump() << " loop " << v["loop"].dump() << "\n";
        out << "  trace: " << v["trace"].get<std::string>() << "\n";
      } else {
        out << "  strategy: memory " << v["memory"] << "\n";
        for (const auto& m : v["moves"]) out << "    (" << m[0] << ", " << m[1].get<std::string>() << ") -> " << m[2].get<std::string>() << "\n";
      }
      continue;
    }
    out << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
  return out.str();
}

template <class F>
json guarded(const std::string& command, const std::string& input, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  json r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r = base_record(command, input, "");
    r["status"] = "error";
    r["message"] = e.what();
  }
  r["time_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::size_t env_or(const char* name, std::size_t def) {
  const char* v = std::getenv(name);
  if (!v || !*v) return def;
  return std::stoull(v);
}

}  // namespace

int main(int argc, char** argv) {
  Settings st;
  st.max_states = env_or("COSTAL_MAX_STATES", st.max_states);
  st.max_alpha = env_or("COSTAL_MAX_ALPHA", st.max_alpha);
  st.search_depth = env_or("COSTAL_SEARCH_DEPTH", st.search_depth);

  CLI::App app{"costal: model checking, games and optimization for cost-LTL"};
  app.require_subcommand(1);
  app.add_option("--format", st.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-states", st.max_states, "State cap for automata and products (env COSTAL_MAX_STATES)")
      ->capture_default_str();
  app.add_option("--max-alpha", st.max_alpha, "Cap on variable values (env COSTAL_MAX_ALPHA)")->capture_default_str();
  app.add_option("--search-depth", st.search_depth, "Lasso depth for strategy audits (env COSTAL_SEARCH_DEPTH)")
      ->capture_default_str();
  app.add_option("--jobs", st.jobs, "Parallel jobs over input files")->check(CLI::PositiveNumber);

  std::vector<std::string> args;
  auto files_then_formula = [&](CLI::App* c, const std::string& what) {
    c->add_option("args", args, what)->required()->expected(2, -1);
  };
  auto* check = app.add_subcommand("check", "Model check: is there a valuation under which the system satisfies the formula");
  files_then_formula(check, "SYSTEM... FORMULA");
  auto* game = app.add_subcommand("solve-game", "Solve the game: does Player 0 win for some valuation");
  files_then_formula(game, "ARENA... FORMULA");
  auto* omc = app.add_subcommand("optimize-mc", "Optimal valuation for model checking");
  files_then_formula(omc, "SYSTEM... FORMULA");
  omc->add_option("--objective", st.objective)->check(CLI::IsMember({"minmin", "minmax", "maxmin", "maxmax"}));
  auto* ogame = app.add_subcommand("optimize-game", "Optimal valuation for games");
  files_then_formula(ogame, "ARENA... FORMULA");
  ogame->add_option("--objective", st.objective)->check(CLI::IsMember({"minmin", "minmax", "maxmin", "maxmax"}));
  auto* eval = app.add_subcommand("eval-trace", "Evaluate a formula on a lasso trace");
  eval->add_option("args", args, "TRACE FORMULA")->required()->expected(2);
  eval->add_option("--alpha", st.alpha, "Valuation, e.g. x=2,y=0");
  auto* nba = app.add_subcommand("to-nba", "Translate to a Buchi automaton in HOA format");
  nba->add_option("args", args, "FORMULA")->required()->expected(1);
  nba->add_option("--dimension", st.dimension)->check(CLI::Range(1, 8));
  auto* validate = app.add_subcommand("validate", "Validate system, arena or trace files");
  validate->add_option("args", args, "FILE...")->required()->expected(1, -1);
  auto* streett = app.add_subcommand("streett-cost", "Formula for a Streett condition with costs");
  streett->add_option("--pairs", st.pairs, "Q1:P1,Q2:P2,...")->required();
  streett->add_option("--var", st.var);
  auto* audit = app.add_subcommand("audit", "Re-check the witness of a JSON verdict");
  audit->add_option("args", args, "VERDICT.json...")->required()->expected(1, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::vector<std::function<json()>> tasks;
  auto command = app.get_subcommands().front()->get_name();
  auto per_file = [&](auto f, bool formula_last) {
    std::size_t n = formula_last ? args.size() - 1 : args.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::string path = args[i];
      std::string text = formula_last ? args.back() : "";
      tasks.push_back([=, &st] { return guarded(command, path, [&] { return f(path, text); }); });
    }
  };
  if (command == "check") per_file([&](auto p, auto t) { return run_check(st, p, t); }, true);
  if (command == "solve-game") per_file([&](auto p, auto t) { return run_game(st, p, t); }, true);
  if (command == "optimize-mc") per_file([&](auto p, auto t) { return run_optimize(st, p, t, false); }, true);
  if (command == "optimize-game") per_file([&](auto p, auto t) { return run_optimize(st, p, t, true); }, true);
  if (command == "eval-trace") per_file([&](auto p, auto t) { return run_eval(st, p, t); }, true);
  if (command == "validate") per_file([&](auto p, auto) { return run_validate(p); }, false);
  if (command == "audit") per_file([&](auto p, auto) { return run_audit(st, p); }, false);
  if (command == "to-nba") tasks.push_back([&] { return guarded(command, "", [&] { return run_to_nba(st, args[0]); }); });
  if (command == "streett-cost") tasks.push_back([&] { return guarded(command, "", [&] { return run_streett(st); }); });

  std::vector<json> results(tasks.size());
  std::vector<std::future<void>> running;
  std::atomic<std::size_t> next{0};
  unsigned workers = std::max(1u, std::min<unsigned>(st.jobs, static_cast<unsigned>(tasks.size())));
  for (unsigned w = 0; w < workers; ++w) {
    running.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i; (i = next++) < tasks.size();) results[i] = tasks[i]();
    }));
  }
  for (auto& f : running) f.get();

  int code = 0;
  for (const auto& r : results) {
    if (st.format == "json") std::cout << r.dump() << "\n";
    else std::cout << text_of(r);
    code = std::max(code, exit_code(r.value("status", "error")));
  }
  return code;
}
