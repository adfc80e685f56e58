#include "costal/multicost.hpp"

#include <sstream>
#include <stdexcept>

#include "costal/altcolor.hpp"

namespace costal {

MultRelativized mult_relativize(const Formula& f, int dimension) {
  if (max_coord(f) > dimension) throw std::invalid_argument("coordinate above the dimension");
  return {relativize(f, dimension), build_chi(dimension)};
}

McResult mult_model_check(const TransitionSystem& s, const Formula& phi, std::size_t max_states) {
  McOptions opt;
  opt.max_states = max_states;
  return model_check(s, phi, opt);
}

GameResult mult_solve_game(const Arena& a, const Formula& phi, std::size_t max_states) {
  GameOptions opt;
  opt.max_states = max_states;
  return solve_game(a, phi, opt);
}

Formula streett_cost_formula(const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::string& var) {
  if (pairs.empty()) throw std::invalid_argument("streett_cost_formula: no pairs");
  int d = static_cast<int>(pairs.size());
  std::optional<Formula> body;
  for (int i = 0; i < d; ++i) {
    Formula req = Formula::disj(Formula::neg_atom(pairs[i].first),
                                Formula::param_eventually(var, i + 1, Formula::atom(pairs[i].second)));
    body = body ? Formula::conj(*body, req) : req;
  }
  return Formula::eventually(Formula::always(*body));
}

std::vector<std::pair<std::string, std::string>> parse_streett_pairs(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
      throw std::invalid_argument("expected Q:P pairs, got '" + item + "'");
    }
    out.push_back({item.substr(0, colon), item.substr(colon + 1)});
  }
  if (out.empty()) throw std::invalid_argument("no pairs given");
  return out;
}

}  // namespace costal
