#pragma once

// Bounded configurations inside the (n+1) x (m+2) rectangle and their text
// format:
//
//   config n m
//   r c | coord=(i,j) flag=F a=A pd=D pc=P label=L
//   ...
//
// one line per cell in row-major order, "_" marking an absent component.

#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cellinv/error.hpp"
#include "cellinv/state.hpp"

namespace cellinv {

struct Pos {
  int r = 0;
  int c = 0;
  auto operator<=>(const Pos&) const = default;
};

struct Offset {
  int dr = 0;
  int dc = 0;
  auto operator<=>(const Offset&) const = default;
};

inline Pos operator+(Pos p, Offset o) { return {p.r + o.dr, p.c + o.dc}; }

/// Von Neumann neighbourhood in the order self, right, left, below, above.
inline constexpr std::array<Offset, 5> kVonNeumann{{{0, 0}, {0, 1}, {0, -1}, {1, 0}, {-1, 0}}};

inline std::array<Pos, 5> neighbourhood_of(Pos p) {
  std::array<Pos, 5> out{};
  for (std::size_t k = 0; k < 5; ++k) out[k] = p + kVonNeumann[k];
  return out;
}

class Configuration {
 public:
  /// All cells set to `fill` (which must be a legal cell state).
  Configuration(int n, int m, CellState fill) : n_(n), m_(m) {
    check_dims();
    validate(fill);
    cells_.assign(static_cast<std::size_t>(rows() * cols()), fill);
  }

  Configuration(int n, int m, std::vector<CellState> cells) : n_(n), m_(m), cells_(std::move(cells)) {
    check_dims();
    if (cells_.size() != static_cast<std::size_t>(rows() * cols())) {
      throw DomainError("configuration needs " + std::to_string(rows() * cols()) + " cells");
    }
    for (const auto& s : cells_) validate(s);
  }

  int n() const { return n_; }
  int m() const { return m_; }
  int rows() const { return n_ + 1; }
  int cols() const { return m_ + 2; }
  int cell_count() const { return rows() * cols(); }

  bool inside(Pos p) const { return p.r >= 0 && p.r < rows() && p.c >= 0 && p.c < cols(); }
  int index(Pos p) const { return p.r * cols() + p.c; }
  Pos pos(int index) const { return {index / cols(), index % cols()}; }

  const CellState& at(Pos p) const {
    if (!inside(p)) throw DomainError("position outside the rectangle");
    return cells_[static_cast<std::size_t>(index(p))];
  }
  const CellState& at(int index) const { return cells_.at(static_cast<std::size_t>(index)); }

  /// State at any plane position; quiescent outside the rectangle.
  CellState read(Pos p) const { return inside(p) ? cells_[static_cast<std::size_t>(index(p))] : kQuiescent; }

  std::array<CellState, 5> neighbourhood(Pos p) const {
    std::array<CellState, 5> out{};
    for (std::size_t k = 0; k < 5; ++k) out[k] = read(p + kVonNeumann[k]);
    return out;
  }

  void set(Pos p, const CellState& s) {
    if (!inside(p)) throw DomainError("position outside the rectangle");
    validate(s);
    cells_[static_cast<std::size_t>(index(p))] = s;
  }

  void set_label(Pos p, int label) { set(p, at(p).with_label(label)); }

  const std::vector<CellState>& cells() const { return cells_; }

  /// Bit k of the result is the label of cell k (row-major). Needs <= 64 cells.
  std::uint64_t label_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < cells_.size() && k < 64; ++k) {
      if (cells_[k].label == 1) mask |= std::uint64_t{1} << k;
    }
    return mask;
  }

  void set_labels(std::uint64_t mask) {
    for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k].label = static_cast<std::int8_t>((mask >> k) & 1U);
  }

  bool operator==(const Configuration&) const = default;

 private:
  void check_dims() const {
    if (n_ < 1 || m_ < 1) throw DomainError("configuration needs n, m >= 1");
  }
  void validate(const CellState& s) const {
    auto in = [](int v, int lo, int hi) { return v == kBox || (v >= lo && v <= hi); };
    if (s.quiescent()) throw DomainError("quiescent state inside the rectangle");
    if (s.label != 0 && s.label != 1) throw DomainError("non-quiescent state needs a 0/1 label");
    if (!in(s.row, 0, n_) || !in(s.col, 0, m_ + 1) || !in(s.flag, -1, 1) || !in(s.a, 0, 1) || !in(s.pd, 0, 1) ||
        !in(s.pc, 0, 1)) {
      throw DomainError("state component out of range: " + to_string(s));
    }
  }

  int n_;
  int m_;
  std::vector<CellState> cells_;
};

/// Two configurations are similar when they agree everywhere except labels.
inline bool similar(const Configuration& x, const Configuration& y) {
  if (x.n() != y.n() || x.m() != y.m()) throw DomainError("similarity needs equal dimensions");
  for (int k = 0; k < x.cell_count(); ++k) {
    if (x.at(k).with_label(0) != y.at(k).with_label(0)) return false;
  }
  return true;
}

/// Membership in Config_{n,m}: every cell holds an element of S_{n,m}.
inline bool in_config_space(const Configuration& c) {
  for (const auto& s : c.cells()) {
    if (state_pattern(s, c.n(), c.m()) == 0) return false;
  }
  return true;
}

inline void write_configuration(std::ostream& out, const Configuration& c) {
  out << "config " << c.n() << ' ' << c.m() << '\n';
  for (int k = 0; k < c.cell_count(); ++k) {
    const Pos p = c.pos(k);
    out << p.r << ' ' << p.c << " | " << to_string(c.at(k)) << '\n';
  }
}

inline std::string configuration_text(const Configuration& c) {
  std::ostringstream out;
  write_configuration(out, c);
  return out.str();
}

namespace detail {
inline int parse_component(const std::string& text, const std::string& what) {
  if (text == "_") return kBox;
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("bad " + what + " component '" + text + "'");
}

inline std::string expect_field(std::istringstream& ls, const std::string& key) {
  std::string tok;
  if (!(ls >> tok) || tok.rfind(key + "=", 0) != 0) throw ParseError("expected field '" + key + "='");
  return tok.substr(key.size() + 1);
}
}  // namespace detail

inline Configuration parse_configuration(std::istream& in) {
  std::string line;
  int n = 0;
  int m = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "config" || !(ls >> n >> m)) throw ParseError("expected 'config n m' header");
    break;
  }
  if (n < 1 || m < 1) throw ParseError("missing or invalid configuration header");
  const int rows = n + 1;
  const int cols = m + 2;
  std::vector<CellState> cells(static_cast<std::size_t>(rows * cols));
  std::vector<bool> seen(cells.size(), false);
  int count = 0;
  while (count < rows * cols && std::getline(in, line)) {
    std::istringstream ls(line);
    int r = 0;
    int c = 0;
    std::string bar;
    if (!(ls >> r)) continue;
    if (!(ls >> c >> bar) || bar != "|") throw ParseError("expected 'r c |' prefix in: " + line);
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw ParseError("cell position outside the rectangle: " + line);
    const auto k = static_cast<std::size_t>(r * cols + c);
    if (seen[k]) throw ParseError("duplicate cell in: " + line);
    seen[k] = true;
    const std::string coord = detail::expect_field(ls, "coord");
    if (coord.size() < 5 || coord.front() != '(' || coord.back() != ')') throw ParseError("bad coord: " + coord);
    const auto comma = coord.find(',');
    if (comma == std::string::npos) throw ParseError("bad coord: " + coord);
    CellState s;
    s.row = static_cast<std::int16_t>(detail::parse_component(coord.substr(1, comma - 1), "row"));
    s.col = static_cast<std::int16_t>(detail::parse_component(coord.substr(comma + 1, coord.size() - comma - 2), "col"));
    s.flag = static_cast<std::int8_t>(detail::parse_component(detail::expect_field(ls, "flag"), "flag"));
    s.a = static_cast<std::int8_t>(detail::parse_component(detail::expect_field(ls, "a"), "a"));
    s.pd = static_cast<std::int8_t>(detail::parse_component(detail::expect_field(ls, "pd"), "pd"));
    s.pc = static_cast<std::int8_t>(detail::parse_component(detail::expect_field(ls, "pc"), "pc"));
    s.label = static_cast<std::int8_t>(detail::parse_component(detail::expect_field(ls, "label"), "label"));
    std::string extra;
    if (ls >> extra) throw ParseError("trailing text in: " + line);
    cells[k] = s;
    ++count;
  }
  if (count != rows * cols) throw ParseError("configuration lists " + std::to_string(count) + " of " +
                                             std::to_string(rows * cols) + " cells");
  try {
    return Configuration(n, m, std::move(cells));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline Configuration parse_configuration(const std::string& text) {
  std::istringstream in(text);
  return parse_configuration(in);
}

}  // namespace cellinv
