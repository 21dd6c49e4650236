#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cellinv/bounded.hpp"

using namespace cellinv;

namespace {

// States {0, 1, q = 2}. A cell becomes x xor right, with q read as 0.
struct XorRight {
  std::vector<Offset> offs{{0, 0}, {0, 1}};
  std::size_t state_count() const { return 3; }
  StateId quiescent() const { return 2; }
  std::span<const Offset> offsets() const { return offs; }
  StateId local(std::span<const StateId> w) const {
    if (w[0] == 2) return 2;
    return w[0] ^ (w[1] == 2 ? 0 : w[1]);
  }
};

// Inverse of XorRight on a 1 x 3 strip: xor of the cell and everything to its
// right within reach 2.
struct XorSuffix {
  std::vector<Offset> offs{{0, 0}, {0, 1}, {0, 2}};
  std::size_t state_count() const { return 3; }
  StateId quiescent() const { return 2; }
  std::span<const Offset> offsets() const { return offs; }
  StateId local(std::span<const StateId> w) const {
    if (w[0] == 2) return 2;
    StateId x = 0;
    for (StateId v : w) x ^= v == 2 ? 0 : v;
    return x;
  }
};

struct Identity {
  std::vector<Offset> offs{{0, 0}};
  std::size_t state_count() const { return 3; }
  StateId quiescent() const { return 2; }
  std::span<const Offset> offsets() const { return offs; }
  StateId local(std::span<const StateId> w) const { return w[0]; }
};

static_assert(BoundedCA<XorRight>);
static_assert(BoundedCA<TableCA>);

// Plain-loop oracle for B(A(C)) = C on a 1 x k strip.
bool strip_inverse_oracle(const TableCA& a, const TableCA& b, int k) {
  const int total = 1 << k;
  for (int mask = 0; mask < total; ++mask) {
    std::vector<StateId> x(static_cast<std::size_t>(k) + 4, 2);
    for (int j = 0; j < k; ++j) x[static_cast<std::size_t>(j) + 2] = (mask >> j) & 1;
    std::vector<StateId> y(x.size(), 2);
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      const StateId w[2] = {x[j], x[j + 1]};
      y[j] = a.local(w);
    }
    y.back() = a.local(std::vector<StateId>{x.back(), 2});
    for (int j = 0; j < k; ++j) {
      const auto p = static_cast<std::size_t>(j) + 2;
      std::vector<StateId> w;
      for (const Offset& o : b.offsets()) {
        const auto idx = static_cast<long>(p) + o.dc;
        w.push_back(idx < 0 || idx >= static_cast<long>(y.size()) ? 2 : y[static_cast<std::size_t>(idx)]);
      }
      if (b.local(w) != x[p]) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Grid, ReadsQuiescentOutside) {
  IndexGrid g(2, 3, 9, 0);
  g.at({1, 2}) = 4;
  EXPECT_EQ(g.read({1, 2}), 4U);
  EXPECT_EQ(g.read({-1, 0}), 9U);
  EXPECT_EQ(g.read({0, 3}), 9U);
  EXPECT_EQ(g.pos(5), (Pos{1, 2}));
}

TEST(Apply, XorRightOnStrip) {
  IndexGrid g(1, 3, 2, 0);
  g.cells = {1, 1, 0};
  EXPECT_EQ(apply(XorRight{}, g).cells, (std::vector<StateId>{0, 1, 0}));
  const IndexGrid back = apply_pair(XorRight{}, XorSuffix{}, g);
  EXPECT_EQ(back, g);
}

TEST(Apply, ExtendedKeepsLeakage) {
  // A state leaking left of the rectangle is kept by apply_extended.
  struct CopyRight {
    std::vector<Offset> offs{{0, 0}, {0, 1}};
    std::size_t state_count() const { return 3; }
    StateId quiescent() const { return 2; }
    std::span<const Offset> offsets() const { return offs; }
    StateId local(std::span<const StateId> w) const { return w[1]; }
  };
  IndexGrid g(1, 2, 2, 1);
  const IndexGrid e = apply_extended(CopyRight{}, g, Offset{0, 1});
  EXPECT_EQ(e.cells, (std::vector<StateId>{1, 1, 2, 2}));
}

TEST(Enumeration, OdometerSkipsQuiescent) {
  std::set<std::vector<StateId>> seen;
  auto d = first_assignment(3, 1);
  do {
    for (StateId v : d) EXPECT_NE(v, 1U);
    seen.insert(d);
  } while (next_assignment(d, 4, 1));
  EXPECT_EQ(seen.size(), 27U);
  EXPECT_EQ(bounded_power(3, 3, 100), std::optional<std::uint64_t>(27));
  EXPECT_FALSE(bounded_power(3, 5, 100).has_value());
}

TEST(GlobalCheck, XorInverseAccepted) {
  for (int k = 1; k <= 3; ++k) {
    const auto r = check_inverse_exhaustive(XorRight{}, XorSuffix{}, 1, k);
    EXPECT_TRUE(r.ok) << k;
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.checked, 1U << k);
  }
}

TEST(GlobalCheck, IdentityRejectedWithCounterexample) {
  const auto r = check_inverse_exhaustive(XorRight{}, Identity{}, 1, 3);
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.counterexample.has_value());
  const IndexGrid back = apply_pair(XorRight{}, Identity{}, *r.counterexample);
  EXPECT_NE(back, *r.counterexample);
  EXPECT_EQ(back.read(*r.cell), r.got);
  EXPECT_EQ(r.counterexample->read(*r.cell), r.expected);
}

TEST(GlobalCheck, SuffixTooShortFailsOnLongStrip) {
  EXPECT_TRUE(check_inverse_exhaustive(XorRight{}, XorSuffix{}, 1, 3).ok);
  EXPECT_FALSE(check_inverse_exhaustive(XorRight{}, XorSuffix{}, 1, 4).ok);
}

TEST(GlobalCheck, BudgetEnforced) {
  EXPECT_THROW(check_inverse_exhaustive(XorRight{}, XorSuffix{}, 1, 30, 1000), BudgetError);
}

TEST(GlobalCheck, SampledAgrees) {
  const auto sampler = uniform_grid_sampler(3, 2);
  EXPECT_TRUE(check_inverse_sampled(XorRight{}, XorSuffix{}, 1, 3, 500, sampler, 1).ok);
  const auto r = check_inverse_sampled(XorRight{}, Identity{}, 1, 3, 500, sampler, 1);
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.exhaustive);
}

TEST(LocalCheck, Domain) {
  const auto dom = local_domain(XorRight{}, XorSuffix{}, 1, 5, Pos{0, 1});
  EXPECT_EQ(dom, (std::vector<Pos>{{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
}

TEST(LocalCheck, XorInverse) {
  const auto sampler = uniform_grid_sampler(3, 2);
  const auto ok = check_local_condition(XorRight{}, XorSuffix{}, 1, 3, 1 << 20, 10, sampler, 1);
  EXPECT_TRUE(ok.ok);
  EXPECT_TRUE(ok.exhaustive);
  EXPECT_FALSE(check_local_condition(XorRight{}, Identity{}, 1, 3, 1 << 20, 10, sampler, 1).ok);
  EXPECT_FALSE(check_local_condition(XorRight{}, XorSuffix{}, 1, 4, 1 << 20, 10, sampler, 1).ok);
}

TEST(LocalCheck, SamplesBeyondBudget) {
  const auto sampler = uniform_grid_sampler(3, 2);
  const auto r = check_local_condition(XorRight{}, XorSuffix{}, 1, 3, 2, 50, sampler, 1);
  EXPECT_TRUE(r.ok);
  EXPECT_FALSE(r.exhaustive);
}

TEST(TableCa, TabulateMatchesSource) {
  const TableCA t = tabulate(XorSuffix{});
  EXPECT_EQ(t.rows().size(), 27U);
  std::vector<StateId> w{1, 0, 2};
  EXPECT_EQ(t.local(w), XorSuffix{}.local(w));
  EXPECT_THROW(TableCA(3, 2, {{0, 0}}, {0, 1}), DomainError);
  EXPECT_THROW(TableCA(3, 2, {{0, 0}}, {0, 1, 5}), DomainError);
  EXPECT_THROW(tabulate(XorSuffix{}, 10), BudgetError);
}

TEST(Property, LocalConditionImpliesGlobal) {
  // Random perturbations of the true inverse and random A tables over a 1 x 3
  // strip; whenever the local condition holds the global check must too, and
  // both agree with a plain-loop oracle.
  std::mt19937_64 rng(31);
  const auto sampler = uniform_grid_sampler(3, 2);
  const TableCA a0 = tabulate(XorRight{});
  const TableCA b0 = tabulate(XorSuffix{});
  int local_ok = 0;
  for (int t = 0; t < 400; ++t) {
    TableCA a = a0;
    TableCA b = b0;
    if (t % 2 == 0) {
      for (std::size_t r = 0; r < 6; ++r) a.rows()[r] = static_cast<StateId>(rng() % 2);
    }
    const auto flips = rng() % 3;
    for (std::uint64_t f = 0; f < flips; ++f) b.rows()[rng() % 18] = static_cast<StateId>(rng() % 3);
    const bool local = check_local_condition(a, b, 1, 3, 1 << 20, 0, sampler, 1).ok;
    const bool global = check_inverse_exhaustive(a, b, 1, 3).ok;
    EXPECT_EQ(global, strip_inverse_oracle(a, b, 3));
    if (local) {
      ++local_ok;
      EXPECT_TRUE(global);
    }
  }
  EXPECT_GT(local_ok, 10);
}
