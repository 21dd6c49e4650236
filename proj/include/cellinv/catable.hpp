#pragma once

// Explicit transition tables for A_phi and their bit-exact encoding.
//
// Rows are the s^5 tuples (self, right, left, below, above) of state indices
// in lexicographic order, self most significant. Each output is written as a
// ceil(log2 s)-bit big-endian state index; bits are packed MSB first.
//
// Binary file layout (all integers big-endian):
//   8 bytes  magic "CELLCA01"
//   u32 n, u32 m, u32 s, u32 width
//   u64 bit length (= s^5 * width)
//   ceil(bit length / 8) payload bytes, trailing bits zero

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cellinv/automaton.hpp"
#include "cellinv/bounded.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/error.hpp"
#include "cellinv/state.hpp"

namespace cellinv {

/// Packed bit string, MSB first within each byte.
class BitString {
 public:
  BitString() = default;
  BitString(std::vector<std::uint8_t> bytes, std::uint64_t bits) : bytes_(std::move(bytes)), bits_(bits) {
    if (bytes_.size() != (bits_ + 7) / 8) throw ParseError("bit string byte count does not match its length");
  }

  std::uint64_t size() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  void reserve(std::uint64_t bits) { bytes_.reserve((bits + 7) / 8); }

  void push(std::uint64_t value, unsigned width) {
    for (unsigned b = width; b-- > 0;) push_bit((value >> b) & 1U);
  }
  void push_bit(bool bit) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bits_ % 8));
    ++bits_;
  }
  bool bit(std::uint64_t pos) const { return (bytes_[pos / 8] >> (7 - pos % 8)) & 1U; }
  std::uint64_t read(std::uint64_t pos, unsigned width) const {
    if (pos + width > bits_) throw ParseError("bit string truncated");
    std::uint64_t v = 0;
    for (unsigned b = 0; b < width; ++b) v = (v << 1) | (bit(pos + b) ? 1U : 0U);
    return v;
  }
  bool operator==(const BitString&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bits_ = 0;
};

/// A_phi as a BoundedCA over state indices.
class PhiCA {
 public:
  explicit PhiCA(const Automaton& a) : a_(&a) {}
  std::size_t state_count() const { return a_->states().size(); }
  StateId quiescent() const { return a_->states().quiescent(); }
  std::span<const Offset> offsets() const { return kVonNeumann; }
  StateId local(std::span<const StateId> w) const { return a_->f(std::array<StateId, 5>{w[0], w[1], w[2], w[3], w[4]}); }
  const Automaton& automaton() const { return *a_; }

 private:
  const Automaton* a_;
};

inline IndexGrid to_index_grid(const StateSet& states, const Configuration& c) {
  IndexGrid g(c.rows(), c.cols(), states.quiescent(), states.quiescent());
  for (int k = 0; k < c.cell_count(); ++k) {
    const StateId id = states.index_of(c.at(k));
    if (id == kNoState) throw DomainError("cell state outside the state set: " + to_string(c.at(k)));
    g.cells[static_cast<std::size_t>(k)] = id;
  }
  return g;
}

inline Configuration to_configuration(const StateSet& states, const IndexGrid& g) {
  std::vector<CellState> cells;
  cells.reserve(g.cells.size());
  for (StateId id : g.cells) cells.push_back(states[id]);
  return Configuration(g.rows - 1, g.cols - 2, std::move(cells));
}

class CaTable {
 public:
  CaTable(int n, int m, std::uint32_t s, std::vector<std::uint16_t> rows) : n_(n), m_(m), s_(s), rows_(std::move(rows)) {
    if (s_ < 2 || s_ > 65535) throw DomainError("table state count out of range");
    if (rows_.size() != row_count(s_)) throw DomainError("table needs s^5 rows");
  }

  static std::uint64_t row_count(std::uint64_t s) { return s * s * s * s * s; }

  int n() const { return n_; }
  int m() const { return m_; }
  std::uint32_t state_count() const { return s_; }
  unsigned width() const { return static_cast<unsigned>(std::bit_width(std::uint32_t{s_ - 1})); }
  std::uint64_t bit_length() const { return row_count(s_) * width(); }
  const std::vector<std::uint16_t>& rows() const { return rows_; }

  std::uint64_t row_index(const std::array<StateId, 5>& t) const {
    std::uint64_t idx = 0;
    for (StateId v : t) idx = idx * s_ + v;
    return idx;
  }
  StateId operator()(const std::array<StateId, 5>& t) const { return rows_[row_index(t)]; }

  bool operator==(const CaTable&) const = default;

 private:
  int n_;
  int m_;
  std::uint32_t s_;
  std::vector<std::uint16_t> rows_;
};

/// Tabulates f_phi. Refuses when s^5 exceeds `row_budget`.
inline CaTable materialize_table(const Automaton& a, std::uint64_t row_budget = 1ULL << 28) {
  const std::uint64_t s = a.states().size();
  const std::uint64_t rows = CaTable::row_count(s);
  if (rows > row_budget) {
    throw BudgetError("table has " + std::to_string(rows) + " rows, budget is " + std::to_string(row_budget));
  }
  std::vector<std::uint16_t> out(rows);
  const auto& st = a.states();
  const StateId q = st.quiescent();
  Neighbourhood nb{};
  std::uint64_t r = 0;
  for (StateId c = 0; c < s; ++c) {
    nb[0] = st[c];
    if (c == q) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(r), out.begin() + static_cast<std::ptrdiff_t>(r + s * s * s * s),
                static_cast<std::uint16_t>(q));
      r += s * s * s * s;
      continue;
    }
    for (StateId x1 = 0; x1 < s; ++x1) {
      nb[1] = st[x1];
      for (StateId x2 = 0; x2 < s; ++x2) {
        nb[2] = st[x2];
        for (StateId x3 = 0; x3 < s; ++x3) {
          nb[3] = st[x3];
          for (StateId x4 = 0; x4 < s; ++x4) {
            nb[4] = st[x4];
            out[r++] = static_cast<std::uint16_t>(st.index_of(a.f(nb)));
          }
        }
      }
    }
  }
  return CaTable(a.n(), a.m(), static_cast<std::uint32_t>(s), std::move(out));
}

inline BitString encode_ca(const CaTable& t) {
  BitString bits;
  bits.reserve(t.bit_length());
  const unsigned w = t.width();
  for (auto v : t.rows()) bits.push(v, w);
  return bits;
}

inline CaTable decode_ca(const BitString& bits, int n, int m, std::uint32_t s) {
  const auto w = static_cast<unsigned>(std::bit_width(std::uint32_t{s - 1}));
  const std::uint64_t rows = CaTable::row_count(s);
  if (bits.size() < rows * w) throw ParseError("table encoding truncated");
  if (bits.size() > rows * w) throw ParseError("table encoding has trailing bits");
  std::vector<std::uint16_t> out(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto v = bits.read(r * w, w);
    if (v >= s) throw ParseError("table entry " + std::to_string(r) + " is not a state index");
    out[r] = static_cast<std::uint16_t>(v);
  }
  return CaTable(n, m, s, std::move(out));
}

/// Table-backed application of A_phi.
inline Configuration step_with_table(const CaTable& t, const StateSet& states, const Configuration& c) {
  if (c.n() != t.n() || c.m() != t.m()) throw DomainError("configuration does not match the table dimensions");
  if (states.size() != t.state_count()) throw DomainError("state set does not match the table");
  const IndexGrid g = to_index_grid(states, c);
  IndexGrid out = g;
  for (std::size_t k = 0; k < g.cells.size(); ++k) {
    std::array<StateId, 5> w{};
    for (std::size_t o = 0; o < 5; ++o) w[o] = g.read(g.pos(k) + kVonNeumann[o]);
    out.cells[k] = t(w);
  }
  return to_configuration(states, out);
}

inline constexpr char kTableMagic[8] = {'C', 'E', 'L', 'L', 'C', 'A', '0', '1'};

namespace detail {
inline void put_be(std::ostream& out, std::uint64_t v, int bytes) {
  for (int b = bytes - 1; b >= 0; --b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}
inline std::uint64_t get_be(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw ParseError("table file truncated in header");
    v = (v << 8) | static_cast<std::uint64_t>(c);
  }
  return v;
}
}  // namespace detail

inline void write_table_file(std::ostream& out, const CaTable& t) {
  const BitString bits = encode_ca(t);
  out.write(kTableMagic, sizeof kTableMagic);
  detail::put_be(out, static_cast<std::uint64_t>(t.n()), 4);
  detail::put_be(out, static_cast<std::uint64_t>(t.m()), 4);
  detail::put_be(out, t.state_count(), 4);
  detail::put_be(out, t.width(), 4);
  detail::put_be(out, bits.size(), 8);
  out.write(reinterpret_cast<const char*>(bits.bytes().data()), static_cast<std::streamsize>(bits.bytes().size()));
}

inline CaTable read_table_file(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kTableMagic, sizeof magic) != 0) {
    throw ParseError("not a CA table file");
  }
  const auto n = static_cast<int>(detail::get_be(in, 4));
  const auto m = static_cast<int>(detail::get_be(in, 4));
  const auto s = static_cast<std::uint32_t>(detail::get_be(in, 4));
  const auto w = static_cast<unsigned>(detail::get_be(in, 4));
  const std::uint64_t len = detail::get_be(in, 8);
  if (n < 1 || m < 1 || n % 2 == 0) throw ParseError("bad table dimensions");
  if (s != state_count(n, m)) throw ParseError("state count does not match n and m");
  if (w != static_cast<unsigned>(std::bit_width(s - 1))) throw ParseError("entry width does not match the state count");
  if (len != CaTable::row_count(s) * w) throw ParseError("bit length does not match s^5 * width");
  std::vector<std::uint8_t> bytes((len + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    throw ParseError("table file truncated");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("trailing bytes after table payload");
  return decode_ca(BitString(std::move(bytes), len), n, m, s);
}

}  // namespace cellinv
