#pragma once

// Chain/cycle structure of configurations, injectivity decisions and the
// brute-force oracles used to cross-check them.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cellinv/automaton.hpp"
#include "cellinv/bounded.hpp"
#include "cellinv/catable.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/formula.hpp"
#include "cellinv/tableau.hpp"

namespace cellinv {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct ChainDecomposition {
  std::vector<std::vector<Pos>> chains;  ///< blue cells, then the red sink
  std::vector<Pos> cycle;                ///< all-blue cycle, empty when absent
  std::vector<Pos> isolated;             ///< red cells no blue cell points to

  bool has_cycle() const { return !cycle.empty(); }
};

/// Successor of every blue cell (by cell index), -1 for red cells.
inline std::vector<int> successor_map(const Automaton& A, const Configuration& c) {
  std::vector<int> succ(static_cast<std::size_t>(c.cell_count()), -1);
  for (int k = 0; k < c.cell_count(); ++k) {
    const Pos p = c.pos(k);
    if (A.color(c, p) == Color::blue) succ[static_cast<std::size_t>(k)] = c.index(A.successor_of(c, p));
  }
  return succ;
}

inline ChainDecomposition decompose(const Automaton& A, const Configuration& c) {
  const std::vector<int> succ = successor_map(A, c);
  const auto cells = succ.size();
  std::vector<int> pred(cells, -1);
  for (std::size_t k = 0; k < cells; ++k) {
    if (succ[k] < 0) continue;
    auto& p = pred[static_cast<std::size_t>(succ[k])];
    if (p >= 0) throw std::logic_error("two blue cells share a successor");
    p = static_cast<int>(k);
  }
  ChainDecomposition d;
  std::vector<bool> seen(cells, false);
  for (std::size_t k = 0; k < cells; ++k) {
    if (succ[k] < 0 && pred[k] < 0) {
      d.isolated.push_back(c.pos(static_cast<int>(k)));
      seen[k] = true;
    }
    if (succ[k] < 0 || pred[k] >= 0) continue;
    std::vector<Pos> chain;
    auto x = static_cast<int>(k);
    while (true) {
      seen[static_cast<std::size_t>(x)] = true;
      chain.push_back(c.pos(x));
      if (succ[static_cast<std::size_t>(x)] < 0) break;
      x = succ[static_cast<std::size_t>(x)];
      if (seen[static_cast<std::size_t>(x)]) throw std::logic_error("chain runs into a visited cell");
    }
    d.chains.push_back(std::move(chain));
  }
  for (std::size_t k = 0; k < cells; ++k) {
    if (seen[k]) continue;
    if (d.has_cycle()) throw std::logic_error("more than one blue cycle");
    auto x = static_cast<int>(k);
    while (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = true;
      d.cycle.push_back(c.pos(x));
      x = succ[static_cast<std::size_t>(x)];
    }
  }
  if (d.has_cycle() && d.cycle.size() != cells) throw std::logic_error("blue cycle does not cover the rectangle");
  return d;
}

/// Injectivity of A_phi on the similarity class of `c`: some cell is red.
inline bool class_injective(const Automaton& A, const Configuration& c) {
  for (int k = 0; k < c.cell_count(); ++k) {
    if (A.color(c, c.pos(k)) == Color::red) return true;
  }
  return false;
}

/// Oracle: applies A_phi to every labelling of the skeleton of `c` and reports
/// whether the images are pairwise distinct.
inline bool class_injective_bruteforce(const Automaton& A, const Configuration& c, int max_cells = 24) {
  A.check_dims(c);
  if (c.cell_count() > max_cells) {
    throw BudgetError("brute force over " + std::to_string(c.cell_count()) + " cells exceeds the limit of " +
                      std::to_string(max_cells));
  }
  const std::uint64_t total = std::uint64_t{1} << c.cell_count();
  std::vector<bool> seen(total, false);
  Configuration x = c;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    x.set_labels(mask);
    const std::uint64_t image = A.step(x).label_mask();
    if (seen[image]) return false;
    seen[image] = true;
  }
  return true;
}

/// All preimages of `image` under A_phi: one when some cell is red, none or
/// two on the all-blue cycle.
inline std::vector<Configuration> preimages(const Automaton& A, const Configuration& image) {
  const ChainDecomposition d = decompose(A, image);
  Configuration pre = image;
  auto label_of = [&image](Pos p) { return static_cast<int>(image.at(p).label); };
  for (const auto& chain : d.chains) {
    int next = label_of(chain.back());
    for (std::size_t k = chain.size() - 1; k-- > 0;) {
      next ^= label_of(chain[k]);
      pre.set_label(chain[k], next);
    }
  }
  if (!d.has_cycle()) return {pre};
  int parity = 0;
  for (const Pos& p : d.cycle) parity ^= label_of(p);
  if (parity != 0) return {};
  std::vector<Configuration> out;
  for (int start = 0; start < 2; ++start) {
    int next = start;
    pre.set_label(d.cycle.front(), start);
    for (std::size_t k = d.cycle.size() - 1; k >= 1; --k) {
      next ^= label_of(d.cycle[k]);
      pre.set_label(d.cycle[k], next);
    }
    out.push_back(pre);
  }
  return out;
}

struct InjectivityResult {
  bool injective = true;
  std::optional<Assignment> assignment;
  std::optional<std::pair<Configuration, Configuration>> witness;
};

/// Injectivity of A_phi on Config_{n,m}, decided by scanning assignments of
/// the normalized formula (a_1 most significant). The witness is checked.
inline InjectivityResult decide_injectivity(const CnfFormula& phi, int max_vars = 24) {
  const Automaton A(phi);
  InjectivityResult r;
  const auto a = first_satisfying(A.formula(), max_vars);
  if (!a) return r;
  r.injective = false;
  r.assignment = *a;
  auto w = witness_pair(A.formula(), *a);
  if (w.first == w.second || A.step(w.first) != A.step(w.second)) {
    throw std::logic_error("witness pair does not collide");
  }
  r.witness = std::move(w);
  return r;
}

// ---------------------------------------------------------------------------
// Random configurations.

/// Uniform non-quiescent state: uniform skeleton times uniform label.
inline StateId random_state(const StateSet& st, std::mt19937_64& rng) {
  std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(st.size() - 2));
  return pick(rng);
}

inline Configuration random_configuration(const Automaton& A, std::mt19937_64& rng) {
  IndexGrid g(A.n() + 1, A.m() + 2, A.states().quiescent(), 0);
  for (auto& c : g.cells) c = random_state(A.states(), rng);
  return to_configuration(A.states(), g);
}

inline void randomize_labels(Configuration& c, std::mt19937_64& rng) {
  for (int k = 0; k < c.cell_count(); ++k) c.set_label(c.pos(k), static_cast<int>(rng() & 1U));
}

/// Table_phi(a) for a uniform a, with uniform labels.
inline Configuration random_table(const Automaton& A, std::mt19937_64& rng) {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(A.m()));
  for (auto& v : a) v = static_cast<std::uint8_t>(rng() & 1U);
  Configuration c = build_table(A.formula(), Assignment(std::move(a)));
  randomize_labels(c, rng);
  return c;
}

/// Half uniform configurations, a quarter computation tables with random
/// labels, a quarter the same with one cell replaced by a random state.
inline Configuration mixed_configuration(const Automaton& A, std::mt19937_64& rng) {
  const auto kind = rng() & 3U;
  if (kind < 2) return random_configuration(A, rng);
  Configuration c = random_table(A, rng);
  if (kind == 3) {
    std::uniform_int_distribution<int> cell(0, c.cell_count() - 1);
    c.set(c.pos(cell(rng)), A.states()[random_state(A.states(), rng)]);
  }
  return c;
}

inline GridSampler mixed_sampler(const Automaton& A) {
  return [&A](std::mt19937_64& rng, IndexGrid& g) { g = to_index_grid(A.states(), mixed_configuration(A, rng)); };
}

/// Randomized search for C1 != C2 with A(C1) = A(C2). Each trial draws a
/// skeleton from the mixed distribution and compares a random labelling with
/// its complement and with a second random labelling.
inline std::optional<std::pair<Configuration, Configuration>> collision_search(const CnfFormula& phi,
                                                                               std::uint64_t trials,
                                                                               std::uint64_t seed = kDefaultSeed) {
  const Automaton A(phi);
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Configuration c1 = mixed_configuration(A, rng);
    Configuration c2 = c1;
    for (int k = 0; k < c2.cell_count(); ++k) c2.set_label(c2.pos(k), 1 - c1.at(k).label);
    Configuration c3 = c1;
    randomize_labels(c3, rng);
    const Configuration i1 = A.step(c1);
    for (const Configuration* other : {&c2, &c3}) {
      if (*other != c1 && A.step(*other) == i1) return std::make_pair(c1, *other);
    }
  }
  return std::nullopt;
}

}  // namespace cellinv
