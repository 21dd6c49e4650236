#pragma once

// The automaton A_phi: local correctness rules, colours, directions,
// successors and the transition function f_phi.

#include <array>
#include <stdexcept>
#include <string>

#include "cellinv/configuration.hpp"
#include "cellinv/formula.hpp"
#include "cellinv/state.hpp"

namespace cellinv {

/// Identifies the first violated rule. `coord` means the written coordinate is
/// absent or outside the rectangle.
enum class Rule { none, coord, A, B, C1, C2, C3, D1, D2, E1, E2, E3, E4 };

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::none: return "none";
    case Rule::coord: return "coord";
    case Rule::A: return "A";
    case Rule::B: return "B";
    case Rule::C1: return "C1";
    case Rule::C2: return "C2";
    case Rule::C3: return "C3";
    case Rule::D1: return "D1";
    case Rule::D2: return "D2";
    case Rule::E1: return "E1";
    case Rule::E2: return "E2";
    case Rule::E3: return "E3";
    case Rule::E4: return "E4";
  }
  return "?";
}

struct Verdict {
  bool ok = true;
  Rule rule = Rule::none;
  explicit operator bool() const { return ok; }
};

enum class Color { blue, red };

inline const char* color_name(Color c) { return c == Color::blue ? "blue" : "red"; }

enum class Direction { right, left, down, up };

inline const char* direction_arrow(Direction d) {
  switch (d) {
    case Direction::right: return "->";
    case Direction::left: return "<-";
    case Direction::down: return "v";
    case Direction::up: return "^";
  }
  return "?";
}

/// Slot of the neighbourhood tuple (self, right, left, below, above) that a
/// direction points to.
inline int direction_slot(Direction d) {
  switch (d) {
    case Direction::right: return 1;
    case Direction::left: return 2;
    case Direction::down: return 3;
    case Direction::up: return 4;
  }
  return 0;
}

inline Direction direction(int n, int m, int i, int j) {
  if (n % 2 == 0) throw DomainError("directions need an odd clause count");
  if (i < 0 || i > n || j < 0 || j > m + 1) throw DomainError("coordinate outside the rectangle");
  if (i == 0 && j == 0) return Direction::right;
  if (i == n && j == 1) return Direction::left;
  if (j == 0) return Direction::up;
  if (i % 2 == 0) return j <= m ? Direction::right : Direction::down;
  return j == 1 ? Direction::down : Direction::left;
}

inline Pos suc(int n, int m, int i, int j) {
  const Offset o = kVonNeumann[static_cast<std::size_t>(direction_slot(direction(n, m, i, j)))];
  return Pos{i, j} + o;
}

using Neighbourhood = std::array<CellState, 5>;

/// Local correctness of nb[0] against its right, left, below and above
/// neighbours. Works for any clause count.
inline Verdict local_check(const CnfFormula& phi, const Neighbourhood& nb) {
  const int n = phi.clauses();
  const int m = phi.variables();
  const CellState& s = nb[0];
  auto fail = [](Rule r) { return Verdict{false, r}; };
  if (!s.has_coord() || s.row < 0 || s.row > n || s.col < 0 || s.col > m + 1) return fail(Rule::coord);
  const int i = s.row;
  const int j = s.col;
  const bool body = i >= 1 && j >= 1 && j <= m;
  const bool last = i >= 1 && j == m + 1;

  // (E) placement of absent components, together with presence of the
  // components each class needs.
  auto bit = [](int v) { return v == 0 || v == 1; };
  if (!bit(s.label)) return fail(Rule::E1);
  if (j == 0 || (i == 0 && (j == 0 || j == m + 1))) {
    if (s.flag != kBox || s.a != kBox || s.pd != kBox || s.pc != kBox) return fail(Rule::E1);
  } else if (i == 0) {
    if (s.flag != kBox || s.pd != kBox || s.pc != kBox || !bit(s.a)) return fail(Rule::E2);
  } else if (last) {
    if (s.flag != kBox || s.a != kBox || s.pd != kBox || !bit(s.pc)) return fail(Rule::E3);
  } else {
    if (s.pc != kBox || !bit(s.a) || !bit(s.pd) || (s.flag != -1 && s.flag != 0 && s.flag != 1)) return fail(Rule::E4);
  }

  // (A) each neighbour carries the offset coordinate, or is q off the table.
  for (std::size_t k = 1; k < 5; ++k) {
    const Pos want = Pos{i, j} + kVonNeumann[k];
    const bool in_table = want.r >= 0 && want.r <= n && want.c >= 0 && want.c <= m + 1;
    if (in_table) {
      if (nb[k].quiescent() || nb[k].row != want.r || nb[k].col != want.c) return fail(Rule::A);
    } else if (!nb[k].quiescent()) {
      return fail(Rule::A);
    }
  }

  // (B)
  if (body && s.flag != phi.rel(i, j)) return fail(Rule::B);

  // (C1) a constant along columns; quiescent neighbours are exempt.
  if (j >= 1 && j <= m) {
    for (std::size_t k : {std::size_t{3}, std::size_t{4}}) {
      if (!nb[k].quiescent() && nb[k].a != s.a) return fail(Rule::C1);
    }
  }

  const CellState& left = nb[2];
  const CellState& above = nb[4];
  if (last && i >= 2) {
    if (!bit(above.pc) || !bit(left.pd) || s.pc != (above.pc & left.pd)) return fail(Rule::C2);
  }
  if (last && i == 1) {
    if (!bit(left.pd) || s.pc != left.pd) return fail(Rule::C3);
  }

  if (body) {
    const int lit = literal_true(s.flag, s.a) ? 1 : 0;
    if (j >= 2) {
      if (!bit(left.pd) || s.pd != (left.pd | lit)) return fail(Rule::D1);
    } else if (s.pd != lit) {
      return fail(Rule::D2);
    }
  }
  return {};
}

inline Color color_of(const CnfFormula& phi, const Neighbourhood& nb) {
  if (!local_check(phi, nb)) return Color::red;
  const CellState& s = nb[0];
  if (s.row == phi.clauses() && s.col == phi.variables() + 1 && s.pc != 1) return Color::red;
  return Color::blue;
}

/// The automaton A_phi over the normalized formula.
class Automaton {
 public:
  explicit Automaton(const CnfFormula& phi)
      : phi_(normalize_odd(phi)), states_(phi_.clauses(), phi_.variables()) {}

  const CnfFormula& formula() const { return phi_; }
  int n() const { return phi_.clauses(); }
  int m() const { return phi_.variables(); }
  const StateSet& states() const { return states_; }

  Verdict check(const Neighbourhood& nb) const { return local_check(phi_, nb); }
  Color color(const Neighbourhood& nb) const { return color_of(phi_, nb); }

  /// Slot (1..4) of the successor of a blue centre, or 0 for a red one.
  int successor_slot(const Neighbourhood& nb) const {
    if (color(nb) == Color::red) return 0;
    const Pos target = suc(n(), m(), nb[0].row, nb[0].col);
    int found = 0;
    int count = 0;
    for (int k = 1; k < 5; ++k) {
      const auto& t = nb[static_cast<std::size_t>(k)];
      if (!t.quiescent() && t.row == target.r && t.col == target.c) {
        found = k;
        ++count;
      }
    }
    if (count != 1) throw std::logic_error("blue cell without a unique successor");
    return found;
  }

  /// f_phi. Quiescent centre gives q; red centre is unchanged.
  CellState f(const Neighbourhood& nb) const {
    if (nb[0].quiescent()) return kQuiescent;
    const int k = successor_slot(nb);
    if (k == 0) return nb[0];
    return nb[0].with_label(nb[0].label ^ nb[static_cast<std::size_t>(k)].label);
  }

  StateId f(const std::array<StateId, 5>& ids) const {
    Neighbourhood nb{};
    for (std::size_t k = 0; k < 5; ++k) nb[k] = states_[ids[k]];
    return states_.index_of(f(nb));
  }

  void check_dims(const Configuration& c) const {
    if (c.n() != n() || c.m() != m()) {
      throw DomainError("configuration is " + std::to_string(c.n()) + "x" + std::to_string(c.m()) +
                        ", automaton expects " + std::to_string(n()) + "x" + std::to_string(m()));
    }
  }

  Verdict check(const Configuration& c, Pos p) const {
    check_dims(c);
    return check(c.neighbourhood(p));
  }
  bool is_locally_correct(const Configuration& c, Pos p) const { return check(c, p).ok; }

  Color color(const Configuration& c, Pos p) const {
    check_dims(c);
    if (!c.inside(p)) throw DomainError("position outside the rectangle");
    return color(c.neighbourhood(p));
  }

  /// Actual position of the successor of a blue cell.
  Pos successor_of(const Configuration& c, Pos p) const {
    if (color(c, p) == Color::red) throw DomainError("red cell has no successor");
    const int k = successor_slot(c.neighbourhood(p));
    return p + kVonNeumann[static_cast<std::size_t>(k)];
  }

  /// One synchronous application of A_phi.
  Configuration step(const Configuration& c) const {
    check_dims(c);
    std::vector<CellState> out(c.cells().size());
    for (int k = 0; k < c.cell_count(); ++k) out[static_cast<std::size_t>(k)] = f(c.neighbourhood(c.pos(k)));
    return Configuration(c.n(), c.m(), std::move(out));
  }

 private:
  CnfFormula phi_;
  StateSet states_;
};

}  // namespace cellinv
