#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "cellinv/analysis.hpp"
#include "cellinv/automaton.hpp"
#include "cellinv/tableau.hpp"

using namespace cellinv;

namespace {

const char* kExample = "p cnf 3 4\n1 0\n2 -3 0\n-1 -3 0\n1 2 0\n";

CellState make(int i, int j, int flag, int a, int pd, int pc, int label) {
  return CellState{static_cast<std::int16_t>(i), static_cast<std::int16_t>(j), static_cast<std::int8_t>(flag),
                   static_cast<std::int8_t>(a),  static_cast<std::int8_t>(pd), static_cast<std::int8_t>(pc),
                   static_cast<std::int8_t>(label)};
}

// Membership written straight from the seven state classes.
bool member(const CellState& s, int n, int m) {
  const int B = kBox;
  auto bit = [](int v) { return v == 0 || v == 1; };
  if (s.row == B && s.col == B && s.flag == B && s.a == B && s.pd == B && s.pc == B && s.label == B) return true;
  if (!bit(s.label) || s.row == B || s.col == B) return false;
  const int i = s.row;
  const int j = s.col;
  const bool bare = s.flag == B && s.a == B && s.pd == B && s.pc == B;
  if (i == 0 && j == 0) return bare;
  if (i >= 1 && i <= n && j == 0) return bare;
  if (i == 0 && j == m + 1) return bare;
  if (i == 0 && j >= 1 && j <= m) return s.flag == B && s.pd == B && s.pc == B && bit(s.a);
  if (i >= 1 && i <= n && j == m + 1) return s.flag == B && s.a == B && s.pd == B && bit(s.pc);
  if (i >= 1 && i <= n && j >= 1 && j <= m) {
    return (s.flag == -1 || s.flag == 0 || s.flag == 1) && bit(s.a) && bit(s.pd) && s.pc == B;
  }
  return false;
}

std::set<CellState> enumerate_states(int n, int m) {
  std::set<CellState> out;
  std::vector<int> rows{kBox}, cols{kBox};
  for (int i = -1; i <= n + 1; ++i) rows.push_back(i);
  for (int j = -1; j <= m + 2; ++j) cols.push_back(j);
  const std::vector<int> flags{kBox, -1, 0, 1};
  const std::vector<int> bits{kBox, 0, 1};
  for (int r : rows)
    for (int c : cols)
      for (int f : flags)
        for (int a : bits)
          for (int pd : bits)
            for (int pc : bits)
              for (int l : bits) {
                const CellState s = make(r, c, f, a, pd, pc, l);
                if (member(s, n, m)) out.insert(s);
              }
  return out;
}

// The snake: row 0 rightwards, odd rows leftwards to column 1, even rows
// rightwards from column 1, the last row into column 0, then up column 0.
std::vector<Pos> snake(int n, int m) {
  std::vector<Pos> path;
  for (int j = 0; j <= m + 1; ++j) path.push_back({0, j});
  for (int i = 1; i <= n; ++i) {
    if (i % 2 == 1) {
      for (int j = m + 1; j >= 1; --j) path.push_back({i, j});
    } else {
      for (int j = 1; j <= m + 1; ++j) path.push_back({i, j});
    }
  }
  for (int i = n; i >= 1; --i) path.push_back({i, 0});
  return path;
}

Configuration table1(const Automaton& A, const std::string& a) { return build_table(A.formula(), Assignment::parse(a)); }

bool any_red(const Automaton& A, const Configuration& c) {
  for (int k = 0; k < c.cell_count(); ++k) {
    if (A.color(c, c.pos(k)) == Color::red) return true;
  }
  return false;
}

}  // namespace

TEST(StateSet, MatchesIndependentEnumeration) {
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {3, 1}, {3, 2}, {5, 3}}) {
    const StateSet st(n, m);
    const auto oracle = enumerate_states(n, m);
    EXPECT_EQ(st.size(), oracle.size());
    EXPECT_EQ(st.size(), state_count(n, m));
    std::set<CellState> got(st.states().begin(), st.states().end());
    EXPECT_EQ(got, oracle) << n << "x" << m;
    for (StateId k = 0; k < st.size(); ++k) EXPECT_EQ(st.index_of(st[k]), k);
    EXPECT_TRUE(st[st.quiescent()].quiescent());
  }
}

TEST(StateSet, KnownSizes) {
  EXPECT_EQ(StateSet(1, 1).size(), 39U);
  EXPECT_EQ(StateSet(5, 3).size(), 407U);
  EXPECT_EQ(StateSet(1, 1).index_width(), 6U);
  EXPECT_THROW(StateSet(2, 1), DomainError);
}

TEST(StateSet, CanonicalOrderIsSorted) {
  const StateSet st(3, 2);
  for (StateId k = 1; k + 1 < st.size(); ++k) {
    const auto p0 = state_pattern(st[k - 1], 3, 2);
    const auto p1 = state_pattern(st[k], 3, 2);
    EXPECT_TRUE(std::tie(p0, st[k - 1]) < std::tie(p1, st[k])) << k;
  }
  EXPECT_EQ(st.index_of(make(9, 9, kBox, kBox, kBox, kBox, 0)), kNoState);
  EXPECT_EQ(st.index_of(make(1, 1, 1, 0, kBox, kBox, 0)), kNoState);
}

TEST(StateSet, DigestSeparatesDimensions) {
  EXPECT_EQ(StateSet(3, 2).digest(), StateSet(3, 2).digest());
  EXPECT_NE(StateSet(3, 2).digest(), StateSet(3, 3).digest());
  EXPECT_NE(StateSet(1, 2).digest(), StateSet(3, 1).digest());
}

TEST(Direction, ArrowGrid6x5) {
  using D = Direction;
  const D R = D::right, L = D::left, V = D::down, U = D::up;
  const std::vector<std::vector<D>> expected{
      {R, R, R, R, V}, {U, V, L, L, L}, {U, R, R, R, V}, {U, V, L, L, L}, {U, R, R, R, V}, {U, L, L, L, L},
  };
  for (int i = 0; i <= 5; ++i) {
    for (int j = 0; j <= 4; ++j) EXPECT_EQ(direction(5, 3, i, j), expected[i][j]) << i << "," << j;
  }
  EXPECT_STREQ(direction_arrow(direction(5, 3, 0, 0)), "->");
  EXPECT_THROW(direction(4, 3, 0, 0), DomainError);
  EXPECT_THROW(direction(5, 3, 6, 0), DomainError);
}

TEST(Successor, Examples) {
  EXPECT_EQ(suc(5, 3, 0, 0), (Pos{0, 1}));
  EXPECT_EQ(suc(5, 3, 5, 1), (Pos{5, 0}));
  EXPECT_EQ(suc(5, 3, 1, 0), (Pos{0, 0}));
  EXPECT_EQ(suc(5, 3, 2, 4), (Pos{3, 4}));
}

TEST(Successor, TracesSnakeCycle) {
  for (int n : {1, 3, 5, 7}) {
    for (int m : {1, 2, 3, 4}) {
      const auto path = snake(n, m);
      ASSERT_EQ(path.size(), static_cast<std::size_t>((n + 1) * (m + 2)));
      for (std::size_t k = 0; k < path.size(); ++k) {
        const Pos next = path[(k + 1) % path.size()];
        EXPECT_EQ(suc(n, m, path[k].r, path[k].c), next) << n << "x" << m << " at " << k;
      }
    }
  }
}

TEST(LocalRules, TableIsAllBlueWhenSatisfied) {
  const Automaton A(parse_dimacs(kExample));
  EXPECT_EQ(A.n(), 5);
  const auto t = table1(A, "100");
  for (int k = 0; k < t.cell_count(); ++k) EXPECT_EQ(A.color(t, t.pos(k)), Color::blue) << k;
}

TEST(LocalRules, UnsatisfyingTableHasOneRedCell) {
  const Automaton A(parse_dimacs(kExample));
  const auto t = table1(A, "011");
  int red = 0;
  for (int k = 0; k < t.cell_count(); ++k) {
    EXPECT_TRUE(A.is_locally_correct(t, t.pos(k)));
    if (A.color(t, t.pos(k)) == Color::red) {
      ++red;
      EXPECT_EQ(t.pos(k), (Pos{5, 4}));
    }
  }
  EXPECT_EQ(red, 1);
}

TEST(LocalRules, SingleViolations) {
  const Automaton A(parse_dimacs(kExample));
  const auto base = table1(A, "100");
  auto violates = [&](Pos p, CellState s, Pos at) {
    Configuration c = base;
    c.set(p, s);
    return A.check(c, at).rule;
  };
  auto s = [&](Pos p) { return base.at(p); };

  CellState x = s({2, 2});
  x.flag = static_cast<std::int8_t>(x.flag == 1 ? 0 : 1);
  EXPECT_EQ(violates({2, 2}, x, {2, 2}), Rule::B);

  x = s({2, 1});
  x.a = static_cast<std::int8_t>(1 - x.a);
  EXPECT_EQ(violates({2, 1}, x, {2, 1}), Rule::C1);

  x = s({3, 4});
  x.pc = static_cast<std::int8_t>(1 - x.pc);
  EXPECT_EQ(violates({3, 4}, x, {3, 4}), Rule::C2);

  x = s({1, 4});
  x.pc = static_cast<std::int8_t>(1 - x.pc);
  EXPECT_EQ(violates({1, 4}, x, {1, 4}), Rule::C3);

  x = s({1, 2});
  x.pd = static_cast<std::int8_t>(1 - x.pd);
  EXPECT_EQ(violates({1, 2}, x, {1, 2}), Rule::D1);

  x = s({1, 1});
  x.pd = static_cast<std::int8_t>(1 - x.pd);
  EXPECT_EQ(violates({1, 1}, x, {1, 1}), Rule::D2);

  x = s({2, 2});
  x.pd = kBox;
  EXPECT_EQ(violates({2, 2}, x, {2, 2}), Rule::E4);

  x = s({0, 0});
  x.a = 0;
  EXPECT_EQ(violates({0, 0}, x, {0, 0}), Rule::E1);

  x = s({0, 1});
  x.flag = 1;
  EXPECT_EQ(violates({0, 1}, x, {0, 1}), Rule::E2);

  x = s({1, 4});
  x.pd = 0;
  EXPECT_EQ(violates({1, 4}, x, {1, 4}), Rule::E3);

  x = s({2, 2});
  x.col = 3;
  EXPECT_EQ(violates({2, 2}, x, {2, 1}), Rule::A);

  x = s({2, 2});
  x.row = kBox;
  EXPECT_EQ(violates({2, 2}, x, {2, 2}), Rule::coord);
}

TEST(LocalRules, OffTableNeighbourMustBeQuiescent) {
  const auto phi = normalize_odd(parse_dimacs(kExample));
  const auto t = build_table(phi, Assignment::parse("100"));
  Neighbourhood nb = t.neighbourhood({0, 1});
  EXPECT_TRUE(local_check(phi, nb).ok);
  nb[4] = t.at(Pos{1, 1});
  EXPECT_EQ(local_check(phi, nb).rule, Rule::A);
}

TEST(LocalRules, ColourIgnoresLabels) {
  const Automaton A(parse_dimacs(kExample));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    Configuration c = mixed_configuration(A, rng);
    Configuration d = c;
    randomize_labels(d, rng);
    for (int k = 0; k < c.cell_count(); ++k) EXPECT_EQ(A.color(c, c.pos(k)), A.color(d, d.pos(k)));
  }
}

TEST(Step, PreservesSkeleton) {
  const Automaton A(parse_dimacs(kExample));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    const Configuration c = mixed_configuration(A, rng);
    const Configuration d = A.step(c);
    EXPECT_TRUE(similar(c, d));
    EXPECT_TRUE(in_config_space(d));
  }
}

TEST(Step, RedUnchangedBlueXorsSuccessor) {
  const Automaton A(parse_dimacs(kExample));
  std::mt19937_64 rng(9);
  for (int t = 0; t < 300; ++t) {
    const Configuration c = mixed_configuration(A, rng);
    const Configuration d = A.step(c);
    for (int k = 0; k < c.cell_count(); ++k) {
      const Pos p = c.pos(k);
      if (A.color(c, p) == Color::red) {
        EXPECT_EQ(d.at(p), c.at(p));
      } else {
        const Pos q = A.successor_of(c, p);
        EXPECT_EQ(c.at(q).row, suc(A.n(), A.m(), c.at(p).row, c.at(p).col).r);
        EXPECT_EQ(d.at(p).label, c.at(p).label ^ c.at(q).label);
      }
    }
  }
}

TEST(Step, ZeroLabelledTableIsFixed) {
  const Automaton A(parse_dimacs(kExample));
  for (std::uint64_t idx = 0; idx < 8; ++idx) {
    const auto t = build_table(A.formula(), Assignment::from_index(3, idx));
    EXPECT_EQ(A.step(t), t);
  }
}

TEST(Step, AllRedConfigurationIsFixed) {
  const Automaton A(parse_dimacs(kExample));
  std::mt19937_64 rng(1);
  Configuration c(A.n(), A.m(), make(0, 0, kBox, kBox, kBox, kBox, 0));
  randomize_labels(c, rng);
  EXPECT_FALSE([&] {
    for (int k = 0; k < c.cell_count(); ++k)
      if (A.color(c, c.pos(k)) == Color::blue) return true;
    return false;
  }());
  EXPECT_EQ(A.step(c), c);
}

TEST(Step, AnyStructuralMutationOfTableMakesARedCell) {
  const Automaton A(parse_dimacs(kExample));
  std::mt19937_64 rng(4);
  for (int t = 0; t < 2000; ++t) {
    Configuration c = build_table(A.formula(), Assignment::parse("100"));
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(c.cell_count()));
    const CellState s = A.states()[random_state(A.states(), rng)];
    if (s.with_label(0) == c.at(k).with_label(0)) continue;
    c.set(c.pos(k), s);
    EXPECT_TRUE(any_red(A, c)) << configuration_text(c);
  }
}

TEST(Step, WrongDimensionsRejected) {
  const Automaton A(parse_dimacs(kExample));
  const Configuration c(1, 1, make(0, 0, kBox, kBox, kBox, kBox, 0));
  EXPECT_THROW(A.step(c), DomainError);
}

TEST(Step, TableIdsAgreeWithStates) {
  const Automaton A(parse_dimacs("p cnf 1 1\n1 0\n"));
  std::mt19937_64 rng(2);
  const auto& st = A.states();
  for (int t = 0; t < 5000; ++t) {
    std::array<StateId, 5> ids{};
    Neighbourhood nb{};
    for (std::size_t k = 0; k < 5; ++k) {
      ids[k] = static_cast<StateId>(rng() % st.size());
      nb[k] = st[ids[k]];
    }
    if (nb[0].quiescent()) {
      EXPECT_EQ(A.f(ids), st.quiescent());
      continue;
    }
    EXPECT_EQ(st[A.f(ids)], A.f(nb));
  }
}
