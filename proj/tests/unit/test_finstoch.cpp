#include <gtest/gtest.h>

#include <numeric>

#include "surgery/finstoch.hpp"
#include "test_support.hpp"

namespace surgery {
namespace {

using testing::max_diff;
using testing::smoking_omega;

const VarSpace kA{{"A", 2}};
const VarSpace kB{{"B", 3}};

StochMap random_stoch(Rng& rng, const VarSpace& cod, const VarSpace& dom) {
  return StochMap(random_cpt(rng, cod, dom, 0.0));
}

Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

TEST(VarSpace, UnitHasDimensionOne) {
  VarSpace unit;
  EXPECT_EQ(unit.dim(), 1u);
  EXPECT_TRUE(unit.empty());
}

TEST(VarSpace, DimensionIsProductOfCardinalities) {
  VarSpace s{{"A", 2}, {"B", 3}, {"C", 4}};
  EXPECT_EQ(s.dim(), 24u);
  EXPECT_EQ(s.index_of("C"), 2u);
  EXPECT_THROW(s.index_of("Z"), Error);
}

TEST(VarSpace, RejectsZeroCardinality) { EXPECT_THROW((VarSpace{{"A", 0}}), Error); }

TEST(VarSpace, AmbiguousLookupThrows) {
  VarSpace twice = kA.concat(kA);
  EXPECT_FALSE(twice.has_unique_names());
  try {
    twice.index_of("A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateVariable);
  }
}

TEST(MixedRadix, FirstDigitMostSignificant) {
  MixedRadix r({2, 3, 4});
  std::vector<std::size_t> d{1, 2, 3};
  EXPECT_EQ(r.encode(d), (1u * 3 + 2) * 4 + 3);
  EXPECT_EQ(r.decode(23), d);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r.encode(r.decode(i)), i);
}

TEST(RMatrix, RejectsNegativeAndMisshapen) {
  EXPECT_THROW(RMatrix(kA, kA, mat({{1, -0.1}, {0, 1}})), Error);
  EXPECT_THROW(RMatrix(kA, kB, mat({{1, 0}, {0, 1}})), Error);
}

TEST(StochMap, RejectsNonStochasticColumns) {
  try {
    StochMap(kA, kA, mat({{0.5, 0.2}, {0.4, 0.8}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStochastic);
  }
}

TEST(Compose, IdentityIsNeutral) {
  Rng rng(1);
  StochMap f = random_stoch(rng, kB, kA);
  EXPECT_EQ(compose(identity(kB), f).entries(), f.entries());
  EXPECT_EQ(compose(f, identity(kA)).entries(), f.entries());
}

TEST(Compose, DiscardAfterAnyChannelIsDiscard) {
  Rng rng(2);
  StochMap f = random_stoch(rng, kB, kA);
  EXPECT_LE(max_abs_diff(compose(discard(kB), f), discard(kA)), kTolExact);
}

TEST(Compose, MismatchThrows) {
  try {
    compose(identity(kA), identity(kB));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Compose, SmokingChannelAfterPrior) {
  // (S, C) marginal of the smoking table, read off by hand.
  const double sc[2][2] = {{0.51, 0.12}, {0.12, 0.25}};
  Eigen::MatrixXd c(2, 2);
  for (int s = 0; s < 2; ++s) {
    for (int k = 0; k < 2; ++k) c(k, s) = sc[s][k] / (sc[s][0] + sc[s][1]);
  }
  StochMap channel(VarSpace{{"C", 2}}, VarSpace{{"S", 2}}, c);
  // Pushing the point masses through recovers the columns.
  EXPECT_NEAR(compose(channel, point_state(VarSpace{{"S", 2}}, 0))[1], 0.19, 0.005);
  EXPECT_NEAR(compose(channel, point_state(VarSpace{{"S", 2}}, 1))[1], 0.68, 0.005);
  JointState prior(VarSpace{{"S", 2}}, std::vector<double>{0.63, 0.37});
  EXPECT_NEAR(compose(channel, prior)[1], 0.37, 1e-12);
}

TEST(Tensor, ProductOfUniforms) {
  JointState u = tensor(uniform(kA), uniform(VarSpace{{"B", 2}}));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(u[i], 0.25);
}

TEST(Tensor, IdentitiesTensorToIdentity) {
  EXPECT_EQ(tensor(identity(kA), identity(kB)).entries(), identity(kA.concat(kB)).entries());
}

TEST(Tensor, EntrywiseAgainstLoop) {
  JointState a(VarSpace{{"H", 2}}, std::vector<double>{0.63, 0.37});
  StochMap b(VarSpace{{"T", 2}}, VarSpace{{"S", 2}}, mat({{0.9, 0.3}, {0.1, 0.7}}));
  RMatrix ab = tensor(a.matrix(), b.matrix());
  ASSERT_EQ(ab.rows(), 4u);
  ASSERT_EQ(ab.cols(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t l = 0; l < 2; ++l) EXPECT_DOUBLE_EQ(ab(i * 2 + l, j), a[i] * b(l, j));
    }
  }
}

TEST(Structure, CopyDiscardUniformMatrices) {
  EXPECT_EQ(copy(kA).entries(), mat({{1, 0}, {0, 0}, {0, 0}, {0, 1}}));
  EXPECT_EQ(discard(VarSpace{{"A", 3}}).entries(), mat({{1, 1, 1}}));
  EXPECT_EQ(uniform(kA).values(), Eigen::Vector2d(0.5, 0.5));
}

TEST(Structure, SwapExchangesFactors) {
  StochMap s = swap(kA, kB);
  EXPECT_EQ(s.cod(), kB.concat(kA));
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(j * 2 + i, i * 3 + j), 1.0);
  }
  EXPECT_EQ(compose(swap(kB, kA), s).entries(), identity(kA.concat(kB)).entries());
}

TEST(Structure, CapCupAndTrace) {
  EXPECT_EQ(cap(kA).entries(), mat({{1, 0, 0, 1}}));
  for (std::size_t n = 1; n <= 5; ++n) {
    VarSpace a{{"A", n}};
    EXPECT_DOUBLE_EQ(compose(cap(a), cup(a))(0, 0), static_cast<double>(n));
  }
}

TEST(Structure, Yanking) {
  for (std::size_t n = 1; n <= 5; ++n) {
    VarSpace a{{"A", n}};
    RMatrix id = identity(a);
    RMatrix left = compose(tensor(cap(a), id), tensor(id, cup(a)));
    RMatrix right = compose(tensor(id, cap(a)), tensor(cup(a), id));
    EXPECT_EQ(left.entries(), id.entries()) << n;
    EXPECT_EQ(right.entries(), id.entries()) << n;
  }
}

TEST(Predicates, Stochasticity) {
  EXPECT_TRUE(is_stochastic(copy(kA)));
  EXPECT_FALSE(is_stochastic(cup(kA)));
  EXPECT_TRUE(is_stochastic(smoking_omega().matrix()));
}

TEST(Predicates, FullSupport) {
  EXPECT_TRUE(has_full_support(smoking_omega().matrix()));
  EXPECT_TRUE(has_full_support(uniform(kB).matrix()));
  EXPECT_FALSE(has_full_support(point_state(kA, 0).matrix()));
}

TEST(Marginalize, SmokingOntoS) {
  JointState s = marginalize(smoking_omega(), {"S"});
  EXPECT_NEAR(s[0], 0.63, 1e-15);
  EXPECT_NEAR(s[1], 0.37, 1e-15);
}

TEST(Marginalize, KeepAllIsIdentity) {
  JointState w = smoking_omega();
  EXPECT_EQ(marginalize(w, {"S", "T", "C"}).values(), w.values());
}

TEST(Marginalize, KeepsRelativeOrder) {
  JointState m = marginalize(smoking_omega(), {"C", "S"});
  EXPECT_EQ(m.vars().names(), (std::vector<std::string>{"S", "C"}));
}

TEST(Marginalize, UnknownVariableThrows) { EXPECT_THROW(marginalize(smoking_omega(), {"Q"}), Error); }

TEST(Marginalize, AgreesWithSummationOnAllSubsets) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    VarSpace s = testing::random_space(rng, 1, 4, 4);
    JointState w = random_full_support_state(rng, s, 0.0);
    const auto cards = s.cards();
    for (std::size_t mask = 0; mask < (std::size_t{1} << s.size()); ++mask) {
      std::vector<std::size_t> keep;
      std::vector<std::string> names;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (mask >> k & 1) {
          keep.push_back(k);
          names.push_back(s[k].name);
        }
      }
      auto expect = testing::sum_marginal(w.to_vector(), cards, keep);
      EXPECT_LE(max_diff(marginalize(w, names).to_vector(), expect), 1e-12);
    }
  }
}

TEST(PermuteState, IdentityAndRoundTrip) {
  JointState w = smoking_omega();
  EXPECT_EQ(permute_state(w, {"S", "T", "C"}).values(), w.values());
  JointState t = permute_state(w, {"T", "S", "C"});
  EXPECT_DOUBLE_EQ(t[2], w[4]);  // (T=0, S=1, C=0)
  EXPECT_EQ(permute_state(t, {"S", "T", "C"}).values(), w.values());
}

TEST(PermuteState, SwapsProductFactors) {
  JointState u(VarSpace{{"U", 2}}, std::vector<double>{0.3, 0.7});
  JointState v(VarSpace{{"V", 2}}, std::vector<double>{0.9, 0.1});
  EXPECT_LE(max_abs_diff(permute_state(tensor(u, v), {"V", "U"}).matrix(), tensor(v, u).matrix()), 1e-15);
}

TEST(PermuteState, RejectsNonPermutation) {
  try {
    permute_state(smoking_omega(), {"S", "T"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPermutation);
  }
}

// Properties over random inputs.

TEST(Properties, StochasticityClosedUnderComposeAndTensor) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    VarSpace a{{"A", 1 + rng.below(5)}}, b{{"B", 1 + rng.below(5)}}, c{{"C", 1 + rng.below(5)}};
    StochMap f = random_stoch(rng, b, a), g = random_stoch(rng, c, b);
    EXPECT_TRUE(is_stochastic(compose(g.matrix(), f.matrix()), 1e-12));
    EXPECT_TRUE(is_stochastic(tensor(f.matrix(), g.matrix()), 1e-12));
  }
}

TEST(Properties, DiscardFinality) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    VarSpace a{{"A", 1 + rng.below(5)}}, b{{"B", 1 + rng.below(5)}};
    StochMap f = random_stoch(rng, b, a);
    EXPECT_LE(max_abs_diff(compose(discard(b), f), discard(a)), 1e-12);
  }
}

TEST(Properties, CduAxioms) {
  for (std::size_t n = 1; n <= 5; ++n) {
    VarSpace a{{"A", n}};
    StochMap id = identity(a), cp = copy(a), del = discard(a);
    // coassociativity
    EXPECT_LE(max_abs_diff(compose(tensor(cp, id), cp), compose(tensor(id, cp), cp)), kTolExact);
    // counit on either side
    EXPECT_LE(max_abs_diff(compose(tensor(del, id), cp), id), kTolExact);
    EXPECT_LE(max_abs_diff(compose(tensor(id, del), cp), id), kTolExact);
    // cocommutativity
    EXPECT_LE(max_abs_diff(compose(swap(a, a), cp), cp), kTolExact);
    // discarding the uniform state is the identity on I
    EXPECT_NEAR(compose(del, uniform(a))[0], 1.0, kTolExact);
  }
}

}  // namespace
}  // namespace surgery
