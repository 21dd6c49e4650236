#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "cellinv/automaton.hpp"
#include "cellinv/tableau.hpp"

using namespace cellinv;

namespace {

const char* kExample = "p cnf 3 4\n1 0\n2 -3 0\n-1 -3 0\n1 2 0\n";

// Body cells of the printed 5x5 example, a = (0,1,1): {flag, or} per (i,j).
const int kFlag[4][3] = {{1, 0, 0}, {0, 1, -1}, {-1, 0, -1}, {1, 1, 0}};
const int kOr[4][3] = {{0, 0, 0}, {0, 1, 1}, {1, 1, 1}, {0, 1, 1}};

}  // namespace

TEST(Table, PrintedExampleCellByCell) {
  const auto phi = parse_dimacs(kExample);
  const auto t = build_table(phi, Assignment::parse("011"));
  ASSERT_EQ(t.rows(), 5);
  ASSERT_EQ(t.cols(), 5);
  const int a[3] = {0, 1, 1};
  for (int i = 0; i <= 4; ++i) {
    for (int j = 0; j <= 4; ++j) {
      const CellState& s = t.at(Pos{i, j});
      EXPECT_EQ(s.row, i);
      EXPECT_EQ(s.col, j);
      EXPECT_EQ(s.label, 0);
      if (j >= 1 && j <= 3) {
        EXPECT_EQ(s.a, a[j - 1]);
      } else {
        EXPECT_EQ(s.a, kBox);
      }
      if (i >= 1 && j >= 1 && j <= 3) {
        EXPECT_EQ(s.flag, kFlag[i - 1][j - 1]) << i << "," << j;
        EXPECT_EQ(s.pd, kOr[i - 1][j - 1]) << i << "," << j;
      } else {
        EXPECT_EQ(s.flag, kBox);
        EXPECT_EQ(s.pd, kBox);
      }
    }
  }
}

TEST(Table, ConjunctionColumnIsCumulative) {
  // C_1 is false under (0,1,1), so every cumulative conjunction is false even
  // though C_2..C_4 hold individually.
  const auto phi = parse_dimacs(kExample);
  const auto a = Assignment::parse("011");
  const auto t = build_table(phi, a);
  int running = 1;
  for (int i = 1; i <= 4; ++i) {
    running &= partial_disjunction(phi, a, i, 3) ? 1 : 0;
    EXPECT_EQ(t.at(Pos{i, 4}).pc, running) << i;
    EXPECT_EQ(t.at(Pos{i, 4}).pc, 0);
  }
  EXPECT_EQ(t.at(Pos{0, 4}).pc, kBox);
  EXPECT_TRUE(partial_disjunction(phi, a, 2, 3));
  EXPECT_TRUE(partial_disjunction(phi, a, 3, 3));
  EXPECT_TRUE(partial_disjunction(phi, a, 4, 3));
}

TEST(Table, MembersOfConfigSpace) {
  const auto phi = normalize_odd(parse_dimacs(kExample));
  for (std::uint64_t idx = 0; idx < 8; ++idx) EXPECT_TRUE(in_config_space(build_table(phi, Assignment::from_index(3, idx))));
  EXPECT_THROW(build_table(phi, Assignment::parse("01")), DomainError);
}

TEST(Table, DistinctAssignmentsAreNotSimilar) {
  const auto phi = normalize_odd(parse_dimacs(kExample));
  for (std::uint64_t x = 0; x < 8; ++x) {
    for (std::uint64_t y = 0; y < 8; ++y) {
      const auto tx = build_table(phi, Assignment::from_index(3, x));
      const auto ty = with_labels(build_table(phi, Assignment::from_index(3, y)), 1);
      EXPECT_EQ(similar(tx, ty), x == y);
    }
  }
}

TEST(Witness, PairCollides) {
  const auto phi = parse_dimacs(kExample);
  const Automaton A(phi);
  const auto [c1, c2] = witness_pair(phi, Assignment::parse("100"));
  EXPECT_NE(c1, c2);
  EXPECT_TRUE(similar(c1, c2));
  EXPECT_EQ(c1.n(), 5);
  EXPECT_EQ(A.step(c1), A.step(c2));
  EXPECT_EQ(A.step(c1), c1);
  EXPECT_THROW(witness_pair(phi, Assignment::parse("011")), DomainError);
}

TEST(Witness, WorksForEverySatisfyingAssignment) {
  const auto phi = parse_dimacs("p cnf 3 3\n1 2 0\n-2 3 0\n1 -3 0\n");
  const Automaton A(phi);
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    const auto a = Assignment::from_index(3, idx);
    if (!is_satisfied(phi, a)) continue;
    const auto [c1, c2] = witness_pair(phi, a);
    EXPECT_EQ(A.step(c1), A.step(c2)) << a.str();
  }
}

TEST(PrettyPrint, ShowsComponents) {
  std::ostringstream out;
  pretty_print(out, build_table(parse_dimacs(kExample), Assignment::parse("011")));
  const std::string s = out.str();
  EXPECT_NE(s.find("((1,1), 0, a=0, flag=1, or=0)"), std::string::npos) << s;
  EXPECT_NE(s.find("((2,4), 0, and=0)"), std::string::npos) << s;
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}
