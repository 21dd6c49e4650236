#pragma once

// Computation tables Table_phi(a) and the canonical non-injectivity witness.

#include <algorithm>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cellinv/automaton.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/formula.hpp"

namespace cellinv {

/// Table_phi(a) with all labels 0. The formula is used as given, so an even
/// clause count is fine here.
inline Configuration build_table(const CnfFormula& phi, const Assignment& a) {
  detail::check_assignment(phi, a);
  const int n = phi.clauses();
  const int m = phi.variables();
  std::vector<CellState> cells;
  cells.reserve(static_cast<std::size_t>((n + 1) * (m + 2)));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= m + 1; ++j) {
      CellState s;
      s.row = static_cast<std::int16_t>(i);
      s.col = static_cast<std::int16_t>(j);
      s.label = 0;
      if (j >= 1 && j <= m) s.a = static_cast<std::int8_t>(a[j]);
      if (i >= 1 && j >= 1 && j <= m) {
        s.flag = static_cast<std::int8_t>(phi.rel(i, j));
        s.pd = partial_disjunction(phi, a, i, j) ? 1 : 0;
      }
      if (i >= 1 && j == m + 1) s.pc = partial_conjunction(phi, a, i) ? 1 : 0;
      cells.push_back(s);
    }
  }
  return Configuration(n, m, std::move(cells));
}

/// Copy of `c` with every label set to `label`.
inline Configuration with_labels(Configuration c, int label) {
  c.set_labels(label ? ~std::uint64_t{0} : 0);
  if (c.cell_count() > 64) {
    for (int k = 64; k < c.cell_count(); ++k) c.set_label(c.pos(k), label);
  }
  return c;
}

/// (Table_phi(a), all-labels-1 variant) over the normalized formula. Both map
/// to Table_phi(a) under A_phi.
inline std::pair<Configuration, Configuration> witness_pair(const CnfFormula& phi, const Assignment& a) {
  detail::check_assignment(phi, a);
  if (!is_satisfied(phi, a)) throw DomainError("assignment " + a.str() + " does not satisfy the formula");
  Configuration table = build_table(normalize_odd(phi), a);
  Configuration ones = with_labels(table, 1);
  return {std::move(table), std::move(ones)};
}

/// Aligned grid in the layout of a printed computation table: one cell per
/// column, "((i,j), label, a=.., flag=.., or=..)" style entries.
inline void pretty_print(std::ostream& out, const Configuration& c) {
  auto entry = [](const CellState& s) {
    std::string e = "((" + component_str(s.row) + "," + component_str(s.col) + "), " + component_str(s.label);
    if (s.a != kBox) e += ", a=" + component_str(s.a);
    if (s.flag != kBox) e += ", flag=" + component_str(s.flag);
    if (s.pd != kBox) e += ", or=" + component_str(s.pd);
    if (s.pc != kBox) e += ", and=" + component_str(s.pc);
    return e + ")";
  };
  std::vector<std::size_t> width(static_cast<std::size_t>(c.cols()), 0);
  for (int k = 0; k < c.cell_count(); ++k) {
    auto& w = width[static_cast<std::size_t>(c.pos(k).c)];
    w = std::max(w, entry(c.at(k)).size());
  }
  for (int r = 0; r < c.rows(); ++r) {
    out << '|';
    for (int col = 0; col < c.cols(); ++col) {
      const std::string e = entry(c.at(Pos{r, col}));
      out << ' ' << e << std::string(width[static_cast<std::size_t>(col)] - e.size(), ' ') << " |";
    }
    out << '\n';
  }
}

}  // namespace cellinv
