#include "costal/determinize.hpp"

#include "costal/graph.hpp"

namespace costal {

int ParityAutomaton::symbol(LetterMask l) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), l);
  if (it == alphabet.end()) throw std::out_of_range("letter outside the automaton alphabet");
  return static_cast<int>(it - alphabet.begin());
}

namespace {

struct NbaSource {
  const BuchiAutomaton& a;
  std::size_t size() const { return a.size(); }
  int initial() const { return a.initial; }
  bool accepting(int q) const { return a.accepting[q]; }
  std::vector<int> successors(int q, LetterMask l) const { return a.successors(q, l); }
};

}  // namespace

ParityAutomaton determinize(const BuchiAutomaton& a, std::size_t max_states) {
  if (a.universe.size() > 16) throw std::invalid_argument("determinize: universe too large for explicit alphabet");
  NbaSource src{a};
  SafraDeterminizer<NbaSource, LetterMask> det(src, max_states);
  ParityAutomaton d;
  for (LetterMask l = 0; l <= a.universe.all_letters_bound(); ++l) d.alphabet.push_back(l);
  d.initial = det.initial();
  for (std::size_t s = 0; s < det.size(); ++s) {
    std::vector<int> row;
    for (LetterMask l : d.alphabet) row.push_back(det.step(static_cast<int>(s), l));
    d.delta.push_back(std::move(row));
  }
  for (std::size_t s = 0; s < det.size(); ++s) d.priority.push_back(det.priority(static_cast<int>(s)));
  return d;
}

bool dpa_accepts_lasso(const ParityAutomaton& d, const CostTrace& w, const Universe& u) {
  // Run the deterministic automaton until (state, position) repeats on the cycle.
  std::size_t L = w.lasso_length();
  std::vector<int> seen(d.size() * L, -1);
  std::vector<int> prio;
  int s = d.initial;
  for (std::size_t n = 0;; ++n) {
    std::size_t p = w.fold(n);
    std::size_t key = static_cast<std::size_t>(s) * L + p;
    if (n >= w.prefix.size() && seen[key] >= 0) {
      int best = 0;
      for (std::size_t i = seen[key]; i < prio.size(); ++i) best = std::max(best, prio[i]);
      return best % 2 == 0;
    }
    if (n >= w.prefix.size()) seen[key] = static_cast<int>(prio.size());
    prio.push_back(d.priority[s]);
    s = d.delta[s][d.symbol(u.mask(w.at(p).letter))];
  }
}

}  // namespace costal
