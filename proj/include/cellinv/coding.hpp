#pragma once

// Number coding: the Cantor pairing function and the bitwise coding of
// sequences of states as a single natural number.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <ios>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cellinv/error.hpp"
#include "cellinv/state.hpp"

namespace cellinv {

using BigInt = boost::multiprecision::cpp_int;

/// <x,y> = (x+y)(x+y+1)/2 + x
inline std::uint64_t pairing(std::uint64_t x, std::uint64_t y) {
  const std::uint64_t s = x + y;
  if (s > 4294967294ULL) throw DomainError("pairing arguments too large");
  return s * (s + 1) / 2 + x;
}

inline std::pair<std::uint64_t, std::uint64_t> unpair(std::uint64_t z) {
  // largest w with w(w+1)/2 <= z
  auto tri = [](std::uint64_t w) { return w * (w + 1) / 2; };
  auto w = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while (w > 0 && tri(w) > z) --w;
  while (tri(w + 1) <= z) ++w;
  const std::uint64_t x = z - tri(w);
  return {x, w - x};
}

inline BigInt big_pow(std::uint64_t base, std::uint64_t exp) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp));
}

inline std::uint64_t bit_length(const BigInt& v) {
  return v == 0 ? 0 : static_cast<std::uint64_t>(boost::multiprecision::msb(v)) + 1;
}

/// Code of s_0..s_{k-1}: bit <i,j> is bit i of the index of s_j, for bits
/// i < width. With `t` given, the code must fit in t bits.
inline BigInt sequence_code(const std::vector<StateId>& states, unsigned width,
                            const std::optional<BigInt>& t = std::nullopt) {
  BigInt code = 0;
  for (std::size_t j = 0; j < states.size(); ++j) {
    if (width < 32 && (states[j] >> width) != 0) {
      throw DomainError("state index " + std::to_string(states[j]) + " does not fit in " + std::to_string(width) +
                        " bits");
    }
    for (unsigned i = 0; i < width; ++i) {
      if ((states[j] >> i) & 1U) boost::multiprecision::bit_set(code, static_cast<unsigned>(pairing(i, j)));
    }
  }
  if (t && BigInt(bit_length(code)) > *t) throw DomainError("sequence code longer than the declared size");
  return code;
}

inline std::vector<StateId> sequence_decode(const BigInt& code, std::size_t count, unsigned width) {
  std::vector<StateId> out(count, 0);
  std::uint64_t used = 0;
  for (std::size_t j = 0; j < count; ++j) {
    for (unsigned i = 0; i < width; ++i) {
      const auto pos = pairing(i, j);
      if (boost::multiprecision::bit_test(code, static_cast<unsigned>(pos))) {
        out[j] |= StateId{1} << i;
        used = std::max<std::uint64_t>(used, pos + 1);
      }
    }
  }
  if (used != bit_length(code)) throw ParseError("sequence code has bits outside the sequence");
  return out;
}

/// Largest bit position a code of `count` entries of `width` bits can use,
/// plus one.
inline std::uint64_t sequence_code_bound(std::size_t count, unsigned width) {
  if (count == 0 || width == 0) return 0;
  return pairing(width - 1, count - 1) + 1;
}

inline std::string to_hex(const BigInt& v) { return v.str(0, std::ios_base::hex); }

inline BigInt from_hex(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw ParseError("bad hex number '" + text + "'");
  }
  return BigInt("0x" + text);
}

inline BigInt from_decimal(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("bad decimal number '" + text + "'");
  }
  return BigInt(text);
}

}  // namespace cellinv
