#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

namespace ffdist {
namespace {

const PrimeField F7(7);

PointSet three_points() { return PointSet(F7, {F7.point(0, 0), F7.point(1, 0), F7.point(0, 1)}); }
PointSet two_points() { return PointSet(F7, {F7.point(0, 0), F7.point(1, 0)}); }

std::map<long long, long long> as_map(const DistanceHistogram& h) {
  std::map<long long, long long> out;
  for (const auto& [t, c] : h.entries()) out[static_cast<long long>(t)] = static_cast<long long>(c);
  return out;
}

TEST(NuTest, SmallExamples) {
  const DistanceHistogram two = nu_naive(two_points());
  EXPECT_EQ(two.count(Scalar{0}), 2U);
  EXPECT_EQ(two.count(Scalar{1}), 2U);
  EXPECT_EQ(two.support_size(), 2U);

  const DistanceHistogram three = nu_naive(three_points());
  EXPECT_EQ(three.entries(), (std::vector<std::pair<u64, u64>>{{0, 3}, {1, 4}, {2, 2}}));

  const DistanceHistogram one = nu_naive(PointSet(F7, {F7.point(3, 3)}));
  EXPECT_EQ(one.entries(), (std::vector<std::pair<u64, u64>>{{0, 1}}));
}

TEST(NuTest, FullPlane) {
  const PointSet plane = gen_random(F7, 49, 0);
  const DistanceHistogram h = nu_naive(plane);
  for (u64 t = 0; t < 7; ++t) {
    u64 norms = 0;
    for (u64 x = 0; x < 7; ++x)
      for (u64 y = 0; y < 7; ++y) norms += (x * x + y * y) % 7 == t;
    EXPECT_EQ(h.count(Scalar{t}), 49 * norms) << t;
  }
  EXPECT_EQ(nu_fast(plane), h);
}

TEST(NuTest, EmptySet) {
  const PointSet empty(F7);
  EXPECT_TRUE(nu_naive(empty).entries().empty());
  EXPECT_TRUE(nu_fast(empty).entries().empty());
}

TEST(NuTest, NaiveMatchesOracle) {
  for (u64 seed = 0; seed < 40; ++seed) {
    const PointSet A = gen_random(PrimeField(19), seed % 40, seed);
    EXPECT_EQ(as_map(nu_naive(A)), oracle::nu(A));
  }
}

TEST(NuTest, FastMatchesNaive) {
  const u64 primes[] = {7, 11, 19, 23, 31, 101};
  for (u64 seed = 0; seed < 60; ++seed) {
    const PrimeField F(primes[seed % 6]);
    const PointSet A = gen_random(F, std::min<u64>(seed, F.p() * F.p()), seed);
    EXPECT_EQ(nu_fast(A), nu_naive(A)) << "p=" << F.p() << " seed=" << seed;
  }
}

TEST(NuTest, FastBudget) {
  try {
    (void)nu_fast(gen_random(PrimeField(1031), 4, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBudgetExceeded);
  }
}

TEST(NuTest, Invariants) {
  for (u64 seed = 0; seed < 30; ++seed) {
    const PointSet A = gen_random(PrimeField(23), seed + 1, seed);
    const DistanceHistogram h = nu_naive(A);
    EXPECT_EQ(h.total(), A.size() * A.size());
    // p = 3 mod 4: no two distinct points at distance 0.
    EXPECT_EQ(h.count(Scalar{0}), A.size());
  }
}

TEST(NttTest, GoldilocksReduction) {
  std::mt19937_64 eng(7);
  for (int i = 0; i < 10000; ++i) {
    const u64 a = eng() % ntt::kModulus;
    const u64 b = eng() % ntt::kModulus;
    const u128 expect = static_cast<u128>(a) * b % ntt::kModulus;
    ASSERT_EQ(ntt::mul(a, b), static_cast<u64>(expect));
    ASSERT_EQ(ntt::add(a, b), static_cast<u64>((static_cast<u128>(a) + b) % ntt::kModulus));
  }
}

TEST(NttTest, RoundTrip) {
  std::vector<u64> a(64);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = i * i + 3;
  auto b = a;
  ntt::transform(b, false);
  ntt::transform(b, true);
  EXPECT_EQ(a, b);
}

TEST(DistanceSetTest, Examples) {
  EXPECT_EQ(distance_set(two_points()), (std::vector<Scalar>{Scalar{0}, Scalar{1}}));
  EXPECT_EQ(distance_set(PointSet(F7, {F7.point(4, 4)})), std::vector<Scalar>{Scalar{0}});
  EXPECT_EQ(distance_set(three_points()), (std::vector<Scalar>{Scalar{0}, Scalar{1}, Scalar{2}}));
  EXPECT_EQ(distance_set(three_points(), false), (std::vector<Scalar>{Scalar{1}, Scalar{2}}));
}

TEST(DistanceSetTest, Between) {
  const PointSet P1(F7, {F7.point(0, 0), F7.point(0, 1)});
  const PointSet P2(F7, {F7.point(1, 0)});
  EXPECT_EQ(distance_set_between(P1, P2), (std::vector<Scalar>{Scalar{1}, Scalar{2}}));
  const PointSet s(F7, {F7.point(2, 2)});
  EXPECT_EQ(distance_set_between(s, s), std::vector<Scalar>{Scalar{0}});
  for (u64 seed = 0; seed < 20; ++seed) {
    const PointSet a = gen_random(PrimeField(11), 1 + seed % 9, seed);
    const PointSet b = gen_random(PrimeField(11), 1 + seed % 7, seed + 100);
    std::set<long long> got;
    for (Scalar t : distance_set_between(a, b)) got.insert(static_cast<long long>(t.value));
    EXPECT_EQ(got, oracle::distances_between(a, b));
  }
  EXPECT_THROW((void)distance_set_between(P1, PointSet(PrimeField(11))), Error);
}

TEST(TriplesTest, Examples) {
  EXPECT_EQ(isosceles_triples(two_points()), (TripleCount{4, 0}));
  EXPECT_EQ(isosceles_triples(three_points()), (TripleCount{11, 2}));
  EXPECT_EQ(isosceles_triples(PointSet(F7, {F7.point(1, 1)})), (TripleCount{1, 0}));
}

TEST(TriplesTest, MatchesOracle) {
  for (u64 seed = 0; seed < 20; ++seed) {
    const PointSet A = gen_random(PrimeField(13), 2 + seed, seed);
    EXPECT_EQ(static_cast<long long>(isosceles_triples(A).nondegenerate),
              oracle::nondegenerate_triples(A));
  }
}

TEST(QuadruplesTest, Examples) {
  EXPECT_EQ(distance_quadruples(three_points()), 29U);
  EXPECT_EQ(distance_quadruples(PointSet(F7, {F7.point(0, 0)})), 1U);
  EXPECT_EQ(distance_quadruples(two_points()), 8U);
}

TEST(QuadruplesTest, Cross) {
  EXPECT_EQ(cross_quadruples(PointSet(F7, {F7.point(0, 0)}), PointSet(F7, {F7.point(1, 0)})), 1U);
  EXPECT_EQ(cross_quadruples(PointSet(F7, {F7.point(0, 0), F7.point(0, 1)}),
                             PointSet(F7, {F7.point(1, 0)})),
            2U);
  for (u64 seed = 0; seed < 15; ++seed) {
    const PointSet a = gen_random(PrimeField(11), 1 + seed % 8, seed);
    const PointSet b = gen_random(PrimeField(11), 1 + seed % 9, seed + 50);
    EXPECT_EQ(static_cast<long long>(cross_quadruples(a, b)), oracle::cross_quadruples(a, b));
  }
}

TEST(CircleTest, Examples) {
  const PointSet P2(F7, {F7.point(1, 2), F7.point(6, 2)});
  EXPECT_EQ(circle_count(P2, Scalar{2}, Scalar{1}), 2U);
  EXPECT_EQ(circle_count(P2, Scalar{2}, Scalar{3}), 0U);
  for (u64 x = 0; x < 7; ++x) {
    u64 total = 0;
    for (u64 l = 0; l < 7; ++l) total += circle_count(P2, Scalar{x}, Scalar{l});
    EXPECT_EQ(total, P2.size());
  }
  const PointSet A = gen_random(PrimeField(13), 30, 3);
  for (u64 x = 0; x < 13; ++x)
    for (u64 l = 0; l < 13; ++l)
      EXPECT_EQ(static_cast<long long>(circle_count(A, Scalar{x}, Scalar{l})),
                oracle::circle(A, static_cast<long long>(x), static_cast<long long>(l)));
}

TEST(BisectorEnergyTest, Examples) {
  const PointSet P2(F7, {F7.point(1, 2), F7.point(6, 2)});
  EXPECT_EQ(bisector_energy(P2, Scalar{2}), 4U);
  EXPECT_EQ(bisector_energy(PointSet(F7, {F7.point(5, 1)}), Scalar{3}), 1U);
  // Pair oracle.
  for (u64 seed = 0; seed < 10; ++seed) {
    const PointSet A = gen_random(PrimeField(11), 3 + seed, seed);
    for (u64 x = 0; x < 11; ++x) {
      u64 pairs = 0;
      for (const Point2& u : A)
        for (const Point2& v : A)
          pairs += oracle::dist(u.x.value, u.y.value, 0, x, 11) == oracle::dist(v.x.value, v.y.value, 0, x, 11);
      EXPECT_EQ(bisector_energy(A, Scalar{x}), pairs);
    }
  }
}

TEST(TSumTest, Examples) {
  const TSum a = t_sum(PointSet(F7, {F7.point(0, 0)}), PointSet(F7, {F7.point(1, 0)}));
  EXPECT_EQ(a.by_energy, 1U);
  EXPECT_EQ(a.by_lift, 1U);
  const TSum b = t_sum(PointSet(F7, {F7.point(0, 2)}), PointSet(F7, {F7.point(1, 2), F7.point(6, 2)}));
  EXPECT_EQ(b.by_energy, 4U);
  EXPECT_EQ(b.by_lift, 4U);
}

TEST(TSumTest, RoutesAgree) {
  for (u64 seed = 0; seed < 30; ++seed) {
    const PrimeField F(seed % 2 ? 19 : 13);
    const PointSet P1 = gen_line_subset(F, 1 + seed % 6, seed);
    const PointSet P2 = gen_random(F, seed % 30, seed + 7);
    const TSum t = t_sum(P1, P2);
    EXPECT_EQ(t.by_energy, t.by_lift);
    u64 direct = 0;
    for (const Point2& x : P1)
      for (u64 l = 0; l < F.p(); ++l) {
        const u64 r = circle_count(P2, x.y, Scalar{l});
        direct += r * r;
      }
    EXPECT_EQ(t.by_energy, direct);
  }
}

TEST(TSumTest, NotOnAxis) {
  try {
    (void)t_sum(PointSet(F7, {F7.point(1, 0)}), PointSet(F7, {F7.point(1, 0)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotOnAxis);
  }
}

TEST(LiftTest, Paraboloid) {
  const ParaboloidSet Q = paraboloid_lift(three_points());
  ASSERT_EQ(Q.points.size(), 3U);
  const std::vector<Weighted<Point3>> expect{{{Scalar{0}, Scalar{0}, Scalar{0}}, 1},
                                             {{Scalar{0}, Scalar{1}, Scalar{1}}, 1},
                                             {{Scalar{1}, Scalar{0}, Scalar{1}}, 1}};
  EXPECT_EQ(Q.points, expect);
  EXPECT_TRUE(paraboloid_lift(PointSet(F7)).points.empty());
}

TEST(LiftTest, ParabolaCollapsesMirrorPairs) {
  const WeightedPoints2 lifted = parabola_lift(PointSet(F7, {F7.point(1, 2), F7.point(6, 2)}));
  ASSERT_EQ(lifted.points.size(), 1U);
  EXPECT_EQ(lifted.points[0].point, F7.point(2, 5));
  EXPECT_EQ(lifted.points[0].weight, 2U);
}

TEST(EnergyTest, Examples) {
  EXPECT_EQ(additive_energy(paraboloid_lift(two_points())), 6U);
  EXPECT_EQ(additive_energy(paraboloid_lift(three_points())), 15U);
  EXPECT_EQ(additive_energy_brute(paraboloid_lift(three_points())), 15U);
}

TEST(EnergyTest, FastMatchesBruteAndOracle) {
  for (u64 seed = 0; seed < 12; ++seed) {
    const PointSet A = gen_random(PrimeField(seed % 2 ? 7 : 11), 1 + seed * 3 % 30, seed);
    const ParaboloidSet Q = paraboloid_lift(A);
    const u64 fast = additive_energy(Q);
    EXPECT_EQ(fast, additive_energy_brute(Q));
    EXPECT_EQ(static_cast<long long>(fast), oracle::lifted_energy(A));
    const u64 q = A.size();
    EXPECT_GE(fast, q * q);
    EXPECT_LE(fast, q * q * q);
  }
}

TEST(EnergyTest, WeightedBrute) {
  ParaboloidSet Q{F7, {{{Scalar{0}, Scalar{0}, Scalar{0}}, 2}, {{Scalar{1}, Scalar{0}, Scalar{1}}, 1}}};
  // Expanding the weight-2 point into two copies of a multiset: diffs 0 x5, +d x2, -d x2.
  EXPECT_EQ(additive_energy(Q), 25U + 4U + 4U);
  EXPECT_EQ(additive_energy_brute(Q), 33U);
}

TEST(HistogramCsvTest, Format) {
  std::ostringstream os;
  io::write_histogram(os, nu_naive(three_points()));
  EXPECT_EQ(os.str(), "t,count\n0,3\n1,4\n2,2\n");
}

}  // namespace
}  // namespace ffdist
