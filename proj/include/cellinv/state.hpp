#pragma once

// Cell states of the automaton A_phi and the canonical enumeration of S_{n,m}.

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cellinv/error.hpp"

namespace cellinv {

/// Marker for an absent component. Orders before every numeric value.
inline constexpr int kBox = -128;

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

/// A tuple (coord, flag, a, pd, pc, label). Member order is the canonical
/// tie-break order used by the state enumeration.
struct CellState {
  std::int16_t row = kBox;
  std::int16_t col = kBox;
  std::int8_t flag = kBox;
  std::int8_t a = kBox;
  std::int8_t pd = kBox;
  std::int8_t pc = kBox;
  std::int8_t label = kBox;

  bool quiescent() const {
    return row == kBox && col == kBox && flag == kBox && a == kBox && pd == kBox && pc == kBox && label == kBox;
  }
  bool has_coord() const { return row != kBox && col != kBox; }

  /// Same state with a different label.
  CellState with_label(int l) const {
    CellState s = *this;
    s.label = static_cast<std::int8_t>(l);
    return s;
  }

  auto operator<=>(const CellState&) const = default;
};

inline constexpr CellState kQuiescent{};

/// Cell classes 1..7 (top-left, 0th column, 0th row, top-right, last column,
/// main body, quiescent). Returns 0 when `s` is not an element of S_{n,m}.
inline int state_pattern(const CellState& s, int n, int m) {
  auto bit = [](int v) { return v == 0 || v == 1; };
  const bool lab = bit(s.label);
  if (s.quiescent()) return 7;
  if (!s.has_coord() || !lab) return 0;
  const int i = s.row;
  const int j = s.col;
  const bool no_flag = s.flag == kBox;
  const bool no_a = s.a == kBox;
  const bool no_pd = s.pd == kBox;
  const bool no_pc = s.pc == kBox;
  if (i == 0 && j == 0) return (no_flag && no_a && no_pd && no_pc) ? 1 : 0;
  if (i >= 1 && i <= n && j == 0) return (no_flag && no_a && no_pd && no_pc) ? 2 : 0;
  if (i == 0 && j >= 1 && j <= m) return (no_flag && bit(s.a) && no_pd && no_pc) ? 3 : 0;
  if (i == 0 && j == m + 1) return (no_flag && no_a && no_pd && no_pc) ? 4 : 0;
  if (i >= 1 && i <= n && j == m + 1) return (no_flag && no_a && no_pd && bit(s.pc)) ? 5 : 0;
  if (i >= 1 && i <= n && j >= 1 && j <= m) {
    const bool flag_ok = s.flag == -1 || s.flag == 0 || s.flag == 1;
    return (flag_ok && bit(s.a) && bit(s.pd) && no_pc) ? 6 : 0;
  }
  return 0;
}

/// |S_{n,m}| = 24nm + 6n + 4m + 5.
inline std::uint64_t state_count(int n, int m) {
  const auto N = static_cast<std::uint64_t>(n);
  const auto M = static_cast<std::uint64_t>(m);
  return 24 * N * M + 6 * N + 4 * M + 5;
}

/// Canonical enumeration of S_{n,m}: sorted by (pattern, coord, flag, a, pd,
/// pc, label) with the absent marker before numeric values.
class StateSet {
 public:
  StateSet(int n, int m) : n_(n), m_(m) {
    if (n < 1 || m < 1) throw DomainError("state set needs n, m >= 1");
    if (n % 2 == 0) throw DomainError("state set requires an odd clause count; normalize the formula first");
    auto mk = [](int i, int j, int flag, int a, int pd, int pc, int label) {
      return CellState{static_cast<std::int16_t>(i), static_cast<std::int16_t>(j), static_cast<std::int8_t>(flag),
                       static_cast<std::int8_t>(a),  static_cast<std::int8_t>(pd), static_cast<std::int8_t>(pc),
                       static_cast<std::int8_t>(label)};
    };
    states_.reserve(state_count(n, m));
    for (int l = 0; l < 2; ++l) states_.push_back(mk(0, 0, kBox, kBox, kBox, kBox, l));
    for (int i = 1; i <= n; ++i)
      for (int l = 0; l < 2; ++l) states_.push_back(mk(i, 0, kBox, kBox, kBox, kBox, l));
    for (int j = 1; j <= m; ++j)
      for (int a = 0; a < 2; ++a)
        for (int l = 0; l < 2; ++l) states_.push_back(mk(0, j, kBox, a, kBox, kBox, l));
    for (int l = 0; l < 2; ++l) states_.push_back(mk(0, m + 1, kBox, kBox, kBox, kBox, l));
    for (int i = 1; i <= n; ++i)
      for (int pc = 0; pc < 2; ++pc)
        for (int l = 0; l < 2; ++l) states_.push_back(mk(i, m + 1, kBox, kBox, kBox, pc, l));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= m; ++j)
        for (int flag = -1; flag <= 1; ++flag)
          for (int a = 0; a < 2; ++a)
            for (int pd = 0; pd < 2; ++pd)
              for (int l = 0; l < 2; ++l) states_.push_back(mk(i, j, flag, a, pd, kBox, l));
    states_.push_back(kQuiescent);
  }

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return states_.size(); }
  const CellState& operator[](StateId id) const { return states_[id]; }
  const std::vector<CellState>& states() const { return states_; }
  StateId quiescent() const { return static_cast<StateId>(states_.size() - 1); }

  /// Bits per state index: ceil(log2 |S|).
  unsigned index_width() const { return static_cast<unsigned>(std::bit_width(states_.size() - 1)); }

  /// Position of `s` in the canonical enumeration, or kNoState.
  StateId index_of(const CellState& s) const {
    const int pattern = state_pattern(s, n_, m_);
    const auto n = static_cast<StateId>(n_);
    const auto m = static_cast<StateId>(m_);
    const auto l = static_cast<StateId>(s.label);
    const auto i = static_cast<StateId>(s.row);
    const auto j = static_cast<StateId>(s.col);
    StateId base = 0;
    switch (pattern) {
      case 1:
        return l;
      case 2:
        return 2 + (i - 1) * 2 + l;
      case 3:
        return 2 + 2 * n + (j - 1) * 4 + static_cast<StateId>(s.a) * 2 + l;
      case 4:
        return 2 + 2 * n + 4 * m + l;
      case 5:
        return 4 + 2 * n + 4 * m + (i - 1) * 4 + static_cast<StateId>(s.pc) * 2 + l;
      case 6:
        base = 4 + 6 * n + 4 * m;
        return base + ((i - 1) * m + (j - 1)) * 24 + static_cast<StateId>(s.flag + 1) * 8 +
               static_cast<StateId>(s.a) * 4 + static_cast<StateId>(s.pd) * 2 + l;
      case 7:
        return quiescent();
      default:
        return kNoState;
    }
  }

  bool contains(const CellState& s) const { return index_of(s) != kNoState; }

  /// 64-bit FNV-1a digest of the canonical enumeration.
  std::uint64_t digest() const {
    std::uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](std::uint8_t byte) {
      h ^= byte;
      h *= 1099511628211ULL;
    };
    for (const auto& s : states_) {
      for (int v : {int(s.row), int(s.col), int(s.flag), int(s.a), int(s.pd), int(s.pc), int(s.label)}) {
        const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
        mix(static_cast<std::uint8_t>(u >> 8));
        mix(static_cast<std::uint8_t>(u & 0xff));
      }
    }
    return h;
  }

 private:
  int n_;
  int m_;
  std::vector<CellState> states_;
};

inline std::string component_str(int v) { return v == kBox ? "_" : std::to_string(v); }

inline std::string to_string(const CellState& s) {
  return "coord=(" + component_str(s.row) + "," + component_str(s.col) + ") flag=" + component_str(s.flag) +
         " a=" + component_str(s.a) + " pd=" + component_str(s.pd) + " pc=" + component_str(s.pc) +
         " label=" + component_str(s.label);
}

}  // namespace cellinv
