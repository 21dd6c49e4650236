#pragma once

// Generic two-dimensional cellular automata over state indices, restricted to
// configurations whose non-quiescent cells fill a fixed rectangle.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "cellinv/configuration.hpp"
#include "cellinv/error.hpp"
#include "cellinv/state.hpp"

namespace cellinv {

/// A CA (2, S, N, f) with S = {0..state_count()-1}. `local` receives the
/// states at `offsets()` in order.
template <class CA>
concept BoundedCA = requires(const CA& ca, std::span<const StateId> window) {
  { ca.state_count() } -> std::convertible_to<std::size_t>;
  { ca.quiescent() } -> std::convertible_to<StateId>;
  { ca.offsets() } -> std::convertible_to<std::span<const Offset>>;
  { ca.local(window) } -> std::convertible_to<StateId>;
};

/// A rectangle of state indices; everything outside reads as `q`.
struct IndexGrid {
  int rows = 0;
  int cols = 0;
  StateId q = 0;
  std::vector<StateId> cells;

  IndexGrid() = default;
  IndexGrid(int r, int c, StateId quiescent, StateId fill)
      : rows(r), cols(c), q(quiescent), cells(static_cast<std::size_t>(r * c), fill) {}

  bool inside(Pos p) const { return p.r >= 0 && p.r < rows && p.c >= 0 && p.c < cols; }
  StateId read(Pos p) const { return inside(p) ? cells[static_cast<std::size_t>(p.r * cols + p.c)] : q; }
  StateId& at(Pos p) { return cells[static_cast<std::size_t>(p.r * cols + p.c)]; }
  Pos pos(std::size_t k) const { return {static_cast<int>(k) / cols, static_cast<int>(k) % cols}; }
  bool operator==(const IndexGrid&) const = default;
};

template <BoundedCA CA>
StateId apply_at(const CA& ca, const std::function<StateId(Pos)>& read, Pos p) {
  const auto offsets = std::span<const Offset>(ca.offsets());
  std::vector<StateId> window(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) window[k] = read(p + offsets[k]);
  return ca.local(std::span<const StateId>(window));
}

/// Image of `g` on its own rectangle.
template <BoundedCA CA>
IndexGrid apply(const CA& ca, const IndexGrid& g) {
  IndexGrid out = g;
  auto read = [&g](Pos p) { return g.read(p); };
  for (std::size_t k = 0; k < g.cells.size(); ++k) out.cells[k] = apply_at(ca, read, g.pos(k));
  return out;
}

/// Largest |dr| and |dc| over the offsets of `ca`.
template <BoundedCA CA>
Offset reach(const CA& ca) {
  Offset r{0, 0};
  for (const Offset& o : std::span<const Offset>(ca.offsets())) {
    r.dr = std::max(r.dr, std::abs(o.dr));
    r.dc = std::max(r.dc, std::abs(o.dc));
  }
  return r;
}

/// Image of `g` under `a` on the rectangle grown by `margin`, so that states
/// leaking out of the rectangle are kept. The result is indexed from -margin.
template <BoundedCA CA>
IndexGrid apply_extended(const CA& a, const IndexGrid& g, Offset margin) {
  IndexGrid out(g.rows + 2 * margin.dr, g.cols + 2 * margin.dc, g.q, g.q);
  auto read = [&g](Pos p) { return g.read(p); };
  for (std::size_t k = 0; k < out.cells.size(); ++k) {
    const Pos p = out.pos(k);
    out.cells[k] = apply_at(a, read, Pos{p.r - margin.dr, p.c - margin.dc});
  }
  return out;
}

/// B(A(g)) restricted to the rectangle of g.
template <BoundedCA A, BoundedCA B>
IndexGrid apply_pair(const A& a, const B& b, const IndexGrid& g) {
  const Offset margin = reach(b);
  const IndexGrid image = apply_extended(a, g, margin);
  auto read = [&image, margin](Pos p) { return image.read(Pos{p.r + margin.dr, p.c + margin.dc}); };
  IndexGrid out = g;
  for (std::size_t k = 0; k < g.cells.size(); ++k) out.cells[k] = apply_at(b, read, g.pos(k));
  return out;
}

/// Outcome of an inverse check. `checked` counts configurations (global) or
/// neighbourhood assignments (local).
struct InverseCheck {
  bool ok = true;
  bool exhaustive = true;
  std::uint64_t checked = 0;
  std::optional<IndexGrid> counterexample;  ///< configuration, or the assignment with unassigned cells set to q
  std::optional<Pos> cell;                  ///< failing cell
  StateId expected = 0;
  StateId got = 0;
};

/// Number of configurations with every rectangle cell non-quiescent, or
/// nullopt when it exceeds `limit`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && total > limit / base) return std::nullopt;
    total *= base;
  }
  return total <= limit ? std::optional<std::uint64_t>(total) : std::nullopt;
}

/// Advances `digits` (each in [0, base) skipping `skip`) like an odometer.
/// Returns false after the last combination.
inline bool next_assignment(std::vector<StateId>& digits, std::size_t base, StateId skip) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    StateId d = digits[k] + 1;
    if (d == skip) ++d;
    if (d < base) {
      digits[k] = d;
      return true;
    }
    digits[k] = skip == 0 ? 1 : 0;
  }
  return false;
}

inline std::vector<StateId> first_assignment(std::size_t len, StateId skip) {
  return std::vector<StateId>(len, skip == 0 ? 1 : 0);
}

/// Checks B(A(C)) = C for every configuration C on a rows x cols rectangle
/// with no quiescent cell inside. Throws BudgetError above `budget`.
template <BoundedCA A, BoundedCA B>
InverseCheck check_inverse_exhaustive(const A& a, const B& b, int rows, int cols, std::uint64_t budget = 1ULL << 24) {
  const auto cells = static_cast<std::size_t>(rows * cols);
  const std::size_t s = a.state_count();
  if (!bounded_power(s - 1, cells, budget)) {
    throw BudgetError("exhaustive check needs " + std::to_string(s - 1) + "^" + std::to_string(cells) +
                      " configurations, budget is " + std::to_string(budget));
  }
  const StateId q = a.quiescent();
  IndexGrid g(rows, cols, q, q);
  g.cells = first_assignment(cells, q);
  InverseCheck result;
  do {
    ++result.checked;
    const IndexGrid back = apply_pair(a, b, g);
    if (back != g) {
      result.ok = false;
      result.counterexample = g;
      for (std::size_t k = 0; k < cells; ++k) {
        if (back.cells[k] != g.cells[k]) {
          result.cell = g.pos(k);
          result.expected = g.cells[k];
          result.got = back.cells[k];
          break;
        }
      }
      return result;
    }
  } while (next_assignment(g.cells, s, q));
  return result;
}

/// Fills a rectangle with a random configuration (no quiescent cell inside).
using GridSampler = std::function<void(std::mt19937_64&, IndexGrid&)>;

inline GridSampler uniform_grid_sampler(std::size_t state_count, StateId q) {
  return [state_count, q](std::mt19937_64& rng, IndexGrid& g) {
    std::uniform_int_distribution<StateId> pick(0, static_cast<StateId>(state_count - 2));
    for (auto& c : g.cells) {
      StateId v = pick(rng);
      if (v >= q) ++v;
      c = v;
    }
  };
}

template <BoundedCA A, BoundedCA B>
InverseCheck check_inverse_sampled(const A& a, const B& b, int rows, int cols, std::uint64_t samples,
                                   const GridSampler& sampler, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IndexGrid g(rows, cols, a.quiescent(), a.quiescent());
  InverseCheck result;
  result.exhaustive = false;
  for (std::uint64_t t = 0; t < samples; ++t) {
    sampler(rng, g);
    ++result.checked;
    const IndexGrid back = apply_pair(a, b, g);
    if (back != g) {
      result.ok = false;
      result.counterexample = g;
      for (std::size_t k = 0; k < g.cells.size(); ++k) {
        if (back.cells[k] != g.cells[k]) {
          result.cell = g.pos(k);
          result.expected = g.cells[k];
          result.got = back.cells[k];
          break;
        }
      }
      return result;
    }
  }
  return result;
}

/// Rectangle cells of N(M(c)): the cells A reads when producing the states B
/// reads at c.
template <BoundedCA A, BoundedCA B>
std::vector<Pos> local_domain(const A& a, const B& b, int rows, int cols, Pos c) {
  std::vector<Pos> dom;
  for (const Offset& mo : std::span<const Offset>(b.offsets())) {
    for (const Offset& no : std::span<const Offset>(a.offsets())) {
      const Pos p = c + mo + no;
      if (p.r >= 0 && p.r < rows && p.c >= 0 && p.c < cols) dom.push_back(p);
    }
  }
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  return dom;
}

/// g(f(N(M(c)))) evaluated on a grid in which only the cells of the local
/// domain of c matter.
template <BoundedCA A, BoundedCA B>
StateId local_round_trip(const A& a, const B& b, const IndexGrid& g, Pos c) {
  auto read = [&g](Pos p) { return g.read(p); };
  const auto m_offsets = std::span<const Offset>(b.offsets());
  std::vector<StateId> window(m_offsets.size());
  for (std::size_t k = 0; k < m_offsets.size(); ++k) window[k] = apply_at(a, read, c + m_offsets[k]);
  return b.local(std::span<const StateId>(window));
}

/// The local inverse condition: for every cell c and every assignment of
/// non-quiescent states to the rectangle cells of N(M(c)), g applied to the
/// f-images on M(c) returns the state assigned to c. Cells whose domain has
/// more than `budget` assignments are sampled `samples` times instead.
template <BoundedCA A, BoundedCA B>
InverseCheck check_local_condition(const A& a, const B& b, int rows, int cols, std::uint64_t budget,
                                   std::uint64_t samples, const GridSampler& sampler, std::uint64_t seed) {
  const std::size_t s = a.state_count();
  const StateId q = a.quiescent();
  std::mt19937_64 rng(seed);
  InverseCheck result;
  IndexGrid g(rows, cols, q, q);
  for (int r = 0; r < rows; ++r) {
    for (int col = 0; col < cols; ++col) {
      const Pos c{r, col};
      const std::vector<Pos> dom = local_domain(a, b, rows, cols, c);
      auto fail = [&](StateId got) {
        result.ok = false;
        result.cell = c;
        result.expected = g.read(c);
        result.got = got;
        IndexGrid witness(rows, cols, q, q);
        for (const Pos& p : dom) witness.at(p) = g.read(p);
        result.counterexample = witness;
      };
      if (bounded_power(s - 1, dom.size(), budget)) {
        std::vector<StateId> digits = first_assignment(dom.size(), q);
        do {
          for (std::size_t k = 0; k < dom.size(); ++k) g.at(dom[k]) = digits[k];
          ++result.checked;
          const StateId got = local_round_trip(a, b, g, c);
          if (got != g.read(c)) {
            fail(got);
            return result;
          }
        } while (next_assignment(digits, s, q));
      } else {
        result.exhaustive = false;
        for (std::uint64_t t = 0; t < samples; ++t) {
          sampler(rng, g);
          ++result.checked;
          const StateId got = local_round_trip(a, b, g, c);
          if (got != g.read(c)) {
            fail(got);
            return result;
          }
        }
      }
    }
  }
  return result;
}

/// Explicit-table CA over an arbitrary neighbourhood. Rows are indexed by the
/// window read as a base-s number, first offset most significant.
class TableCA {
 public:
  TableCA(std::size_t state_count, StateId quiescent, std::vector<Offset> offsets, std::vector<StateId> rows)
      : s_(state_count), q_(quiescent), offsets_(std::move(offsets)), rows_(std::move(rows)) {
    const auto expected = bounded_power(s_, offsets_.size(), std::numeric_limits<std::uint64_t>::max() / 2);
    if (!expected || rows_.size() != *expected) throw DomainError("table needs s^|offsets| rows");
    for (StateId v : rows_) {
      if (v >= s_) throw DomainError("table output out of range");
    }
  }

  std::size_t state_count() const { return s_; }
  StateId quiescent() const { return q_; }
  std::span<const Offset> offsets() const { return offsets_; }
  StateId local(std::span<const StateId> window) const { return rows_[row_index(window)]; }

  std::size_t row_index(std::span<const StateId> window) const {
    std::size_t idx = 0;
    for (StateId v : window) idx = idx * s_ + v;
    return idx;
  }
  const std::vector<StateId>& rows() const { return rows_; }
  std::vector<StateId>& rows() { return rows_; }

 private:
  std::size_t s_;
  StateId q_;
  std::vector<Offset> offsets_;
  std::vector<StateId> rows_;
};

/// Builds a TableCA by evaluating `ca` on every window.
template <BoundedCA CA>
TableCA tabulate(const CA& ca, std::uint64_t budget = 1ULL << 24) {
  const std::size_t s = ca.state_count();
  const auto offsets = std::span<const Offset>(ca.offsets());
  const auto total = bounded_power(s, offsets.size(), budget);
  if (!total) throw BudgetError("table would exceed the row budget");
  std::vector<StateId> rows(*total);
  std::vector<StateId> window(offsets.size(), 0);
  for (std::uint64_t r = 0; r < *total; ++r) {
    std::uint64_t x = r;
    for (std::size_t k = offsets.size(); k-- > 0;) {
      window[k] = static_cast<StateId>(x % s);
      x /= s;
    }
    rows[r] = ca.local(std::span<const StateId>(window));
  }
  return TableCA(s, ca.quiescent(), std::vector<Offset>(offsets.begin(), offsets.end()), std::move(rows));
}

}  // namespace cellinv
