#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cellinv/analysis.hpp"
#include "cellinv/catable.hpp"

using namespace cellinv;

namespace {

const CnfFormula& unit() {
  static const CnfFormula phi = parse_dimacs("p cnf 1 1\n1 0\n");
  return phi;
}

const Automaton& unit_automaton() {
  static const Automaton A(unit());
  return A;
}

const CaTable& unit_table() {
  static const CaTable t = materialize_table(unit_automaton());
  return t;
}

}  // namespace

TEST(BitString, PushAndRead) {
  BitString b;
  b.push(0b101, 3);
  b.push(0b0110, 4);
  b.push_bit(true);
  b.push(0x3, 2);
  EXPECT_EQ(b.size(), 10U);
  EXPECT_EQ(b.bytes()[0], 0b10101101);
  EXPECT_EQ(b.bytes()[1], 0b11000000);
  EXPECT_EQ(b.read(0, 3), 5U);
  EXPECT_EQ(b.read(3, 4), 6U);
  EXPECT_THROW(b.read(8, 3), ParseError);
  EXPECT_THROW(BitString({0, 0}, 3), ParseError);
}

TEST(Table, SizeAndWidth) {
  const auto& t = unit_table();
  EXPECT_EQ(t.state_count(), 39U);
  EXPECT_EQ(t.width(), 6U);
  EXPECT_EQ(t.rows().size(), 90224199U);
  EXPECT_EQ(t.bit_length(), 541345194U);
}

TEST(Table, RowOrderSelfMostSignificant) {
  const auto& t = unit_table();
  EXPECT_EQ(t.row_index({0, 0, 0, 0, 1}), 1U);
  EXPECT_EQ(t.row_index({1, 0, 0, 0, 0}), 39U * 39 * 39 * 39);
  const StateId q = unit_automaton().states().quiescent();
  EXPECT_EQ(t({q, 0, 1, 2, 3}), q);
}

TEST(Table, AgreesWithRuleOnRandomRows) {
  const auto& A = unit_automaton();
  const auto& t = unit_table();
  std::mt19937_64 rng(12);
  for (int k = 0; k < 100000; ++k) {
    std::array<StateId, 5> w{};
    for (auto& v : w) v = static_cast<StateId>(rng() % 39);
    EXPECT_EQ(t(w), A.f(w));
  }
}

TEST(Table, StepMatchesRuleOnRandomConfigurations) {
  const auto& A = unit_automaton();
  std::mt19937_64 rng(13);
  for (int k = 0; k < 10000; ++k) {
    const Configuration c = mixed_configuration(A, rng);
    ASSERT_EQ(step_with_table(unit_table(), A.states(), c), A.step(c));
  }
}

TEST(Encoding, RoundTrip) {
  const auto& t = unit_table();
  const BitString bits = encode_ca(t);
  EXPECT_EQ(bits.size(), t.bit_length());
  EXPECT_EQ(bits.read(0, 6), t.rows()[0]);
  EXPECT_EQ(decode_ca(bits, 1, 1, 39), t);
}

TEST(Encoding, FileRoundTripAndErrors) {
  const auto& t = unit_table();
  std::stringstream buf;
  write_table_file(buf, t);
  const std::string data = buf.str();
  EXPECT_EQ(data.substr(0, 8), "CELLCA01");
  EXPECT_EQ(data.size(), 32U + (541345194U + 7) / 8);
  {
    std::istringstream in(data);
    EXPECT_EQ(read_table_file(in), t);
  }
  {
    std::istringstream in(data.substr(0, data.size() - 1));
    EXPECT_THROW(read_table_file(in), ParseError);
  }
  {
    std::istringstream in(data + "x");
    EXPECT_THROW(read_table_file(in), ParseError);
  }
  {
    std::string bad = data;
    bad[0] = 'X';
    std::istringstream in(bad);
    EXPECT_THROW(read_table_file(in), ParseError);
  }
  {
    std::string bad = data;
    bad[15] = 2;  // m = 2 no longer matches s
    std::istringstream in(bad);
    EXPECT_THROW(read_table_file(in), ParseError);
  }
  {
    std::istringstream in(data.substr(0, 20));
    EXPECT_THROW(read_table_file(in), ParseError);
  }
}

TEST(Encoding, DecodeRejectsBadLengthsAndEntries) {
  BitString shortbits;
  shortbits.push(0, 6);
  EXPECT_THROW(decode_ca(shortbits, 1, 1, 39), ParseError);
  // s = 3 needs 2-bit entries; value 3 is not a state index.
  BitString bits;
  for (int k = 0; k < 243; ++k) bits.push(k == 17 ? 3 : 1, 2);
  EXPECT_THROW(decode_ca(bits, 1, 1, 3), ParseError);
  bits.push_bit(false);
  EXPECT_THROW(decode_ca(bits, 1, 1, 3), ParseError);
}

TEST(Table, BudgetRefusesLargeAutomata) {
  const Automaton A(parse_dimacs("p cnf 3 2\n1 0\n2 3 0\n"));
  EXPECT_THROW(materialize_table(A), BudgetError);
  EXPECT_THROW(materialize_table(unit_automaton(), 1000), BudgetError);
}
