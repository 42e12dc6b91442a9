#include "fpsums/incidence.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <vector>

namespace fpsums {
namespace {

std::vector<u64> random_subset(std::mt19937_64& rng, u64 p, std::size_t size,
                               bool nonzero) {
  std::vector<u64> out;
  while (out.size() < size) {
    u64 x = rng() % p;
    if (nonzero && x == 0) continue;
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

u64 full_mass(const FieldContext& ctx, const LineHistogram& hist) {
  u64 total = 0;
  std::vector<u32> row;
  for (u64 a = 0; a < ctx.p(); ++a) {
    hist.slope_row(a, row);
    total += std::accumulate(row.begin(), row.end(), u64{0});
  }
  return total;
}

TEST(LineHistogramOp, TotalMassIsPTimesGridSize) {
  FieldContext ctx(5);
  LineHistogram hist = line_histogram(ctx, {1, 2}, {1, 2});
  EXPECT_EQ(full_mass(ctx, hist), 20u);
}

TEST(LineHistogramOp, SinglePointAtOrigin) {
  FieldContext ctx(7);
  LineHistogram hist = line_histogram(ctx, {0}, {0});
  std::vector<u32> row;
  for (u64 a = 0; a < 7; ++a) {
    hist.slope_row(a, row);
    EXPECT_EQ(row[0], 1u);
    for (u64 b = 1; b < 7; ++b) EXPECT_EQ(row[b], 0u);
  }
}

TEST(LineHistogramOp, FullGridSaturatesEveryLine) {
  FieldContext ctx(7);
  std::vector<u64> all(7);
  std::iota(all.begin(), all.end(), 0);
  LineHistogram hist = line_histogram(ctx, all, all);
  std::vector<u32> row;
  for (u64 a = 0; a < 7; ++a) {
    hist.slope_row(a, row);
    for (u64 b = 0; b < 7; ++b) EXPECT_EQ(row[b], 7u);
  }
}

TEST(LineHistogramOp, RowCountsRespectSetSizes) {
  FieldContext ctx(31);
  std::mt19937_64 rng(7);
  std::vector<u64> a_set = random_subset(rng, 31, 5, false);
  std::vector<u64> b_set = random_subset(rng, 31, 9, false);
  LineHistogram hist = line_histogram(ctx, a_set, b_set);
  std::vector<u32> row;
  for (u64 a = 0; a < 31; ++a) {
    hist.slope_row(a, row);
    for (u64 b = 0; b < 31; ++b) {
      EXPECT_LE(row[b], 5u);
      if (a != 0) EXPECT_LE(row[b], std::min<u64>(5, 9));
      EXPECT_EQ(row[b], hist.iota(a, b));
    }
  }
}

TEST(LineHistogramOp, RejectsEmptySets) {
  FieldContext ctx(7);
  EXPECT_THROW(line_histogram(ctx, {}, {1}), EmptySet);
  EXPECT_THROW(line_histogram(ctx, {1}, {}), EmptySet);
}

// |X n cX| for the dilation x -> cx.
u64 fixed_points(const FieldContext& ctx, const std::vector<u64>& xs, u64 c) {
  u64 count = 0;
  for (u64 x : xs) {
    u64 y = ctx.mul(c, x);
    if (std::find(xs.begin(), xs.end(), y) != xs.end()) ++count;
  }
  return count;
}

TEST(IotaMomentsOp, PinnedExamples) {
  FieldContext f5(5);
  IotaMoments m = iota_moments(f5, {1, 2}, {1, 2}, 1, 1);
  EXPECT_EQ(m.m1, 20u);
  EXPECT_EQ(m.m1_shifted, 20u);
  EXPECT_EQ(m.m2, 28u);  // 16 - 8 + 20

  // The lone point (3, 5) lies on one line of each dilated pair only for
  // a = 1, so the mixed moment is 1 (the unshifted closed form would
  // require the dilations to stabilize the sets).
  FieldContext f7(7);
  IotaMoments s = iota_moments(f7, {3}, {5}, 2, 3);
  EXPECT_EQ(s.m1, 7u);
  EXPECT_EQ(s.m1_shifted, 7u);
  EXPECT_EQ(s.m2, 1u);
}

TEST(IotaMomentsOp, ClosedFormsHoldOnRandomInstances) {
  std::mt19937_64 rng(20260815);
  const u64 primes[] = {5, 7, 11, 13, 31, 101};
  for (int trial = 0; trial < 30; ++trial) {
    u64 p = primes[rng() % 6];
    FieldContext ctx(p);
    std::size_t na = 1 + rng() % std::min<u64>(8, p - 1);
    std::size_t nb = 1 + rng() % std::min<u64>(8, p - 1);
    std::vector<u64> a_set = random_subset(rng, p, na, false);
    std::vector<u64> b_set = random_subset(rng, p, nb, false);
    u64 lambda = 1 + rng() % (p - 1);
    u64 mu = 1 + rng() % (p - 1);
    IotaMoments m = iota_moments(ctx, a_set, b_set, lambda, mu);
    EXPECT_EQ(m.m1, p * na * nb);
    EXPECT_EQ(m.m1_shifted, p * na * nb);
    u64 ia = fixed_points(ctx, a_set, ctx.mul(lambda, ctx.inv(mu)));
    u64 ib = fixed_points(ctx, b_set, mu);
    EXPECT_EQ(m.m2, na * na * nb * nb - ia * nb * nb + p * ia * ib);
  }
}

TEST(IotaMomentsOp, StabilizedFormUnderIdentityDilations) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    FieldContext ctx(31);
    std::size_t na = 1 + rng() % 6, nb = 1 + rng() % 6;
    std::vector<u64> a_set = random_subset(rng, 31, na, false);
    std::vector<u64> b_set = random_subset(rng, 31, nb, false);
    IotaMoments m = iota_moments(ctx, a_set, b_set, 1, 1);
    EXPECT_EQ(m.m2, na * na * nb * nb - na * nb * nb + 31 * na * nb);
  }
  // Subgroup sides with dilations from the subgroup stabilize both sets,
  // so the collapsed form applies with nontrivial scalars too.
  FieldContext ctx(31);
  Subgroup g = ctx.subgroup(6);
  u64 n = g.order;
  IotaMoments m =
      iota_moments(ctx, g.elements, g.elements, g.elements[2], g.elements[4]);
  EXPECT_EQ(m.m2, n * n * n * n - n * n * n + 31 * n * n);
}

TEST(IotaMomentsOp, RejectsZeroScalars) {
  FieldContext ctx(7);
  EXPECT_THROW(iota_moments(ctx, {1}, {1}, 0, 1), ZeroScalar);
  EXPECT_THROW(iota_moments(ctx, {1}, {1}, 1, 0), ZeroScalar);
}

TEST(CollinearTriples, DegenerateAndPinnedCounts) {
  FieldContext f5(5);
  EXPECT_EQ(collinear_triples(f5, {1}, {1}, 1, 1), 0u);
  EXPECT_EQ(collinear_triples_bruteforce(f5, {1}, {1}, 1, 1), 0u);
  // Per-side ratio histogram {0: 2, 1: 2}, so the count is 2^2 + 2^2.
  EXPECT_EQ(collinear_triples(f5, {1, 2}, {1, 2}, 1, 1), 8u);
  EXPECT_EQ(collinear_triples_bruteforce(f5, {1, 2}, {1, 2}, 1, 1), 8u);
}

TEST(CollinearTriples, HistogramMatchesBruteforce) {
  std::mt19937_64 rng(31337);
  const u64 primes[] = {5, 7, 11, 13, 31};
  for (int trial = 0; trial < 40; ++trial) {
    u64 p = primes[rng() % 5];
    FieldContext ctx(p);
    std::size_t n1 = 1 + rng() % 4;
    std::size_t n2 = 1 + rng() % 4;
    std::vector<u64> u1 = random_subset(rng, p, n1, true);
    std::vector<u64> u2 = random_subset(rng, p, n2, true);
    u64 l1 = 1 + rng() % (p - 1);
    u64 l2 = 1 + rng() % (p - 1);
    u64 fast = collinear_triples(ctx, u1, u2, l1, l2);
    u64 slow = collinear_triples_bruteforce(ctx, u1, u2, l1, l2);
    EXPECT_EQ(fast, slow) << "p=" << p;
    EXPECT_EQ(collinear_triples(ctx, u2, u1, l2, l1), fast);
    u128 cap = u128(n1) * n1 * n1 * n2 * n2 * n2;
    EXPECT_LE(u128(fast), cap);
  }
}

TEST(CollinearTriples, SubgroupAgreesWithOracle) {
  FieldContext ctx(7);
  Subgroup g = ctx.subgroup(3);  // {1, 2, 4}
  EXPECT_EQ(collinear_triples(ctx, g.elements, g.elements, 1, 3),
            collinear_triples_bruteforce(ctx, g.elements, g.elements, 1, 3));
}

TEST(CollinearTriples, DilationInvariance) {
  FieldContext ctx(31);
  Subgroup g = ctx.subgroup(6);
  u64 base = collinear_triples(ctx, g.elements, g.elements, 1, 3);
  // Scaling either side by any nonzero c cancels inside the ratios.
  for (u64 c : {u64{2}, u64{17}, g.elements[1]}) {
    std::vector<u64> scaled = dilate_set(ctx, g.elements, c);
    EXPECT_EQ(collinear_triples(ctx, scaled, g.elements, 1, 3), base);
    EXPECT_EQ(collinear_triples(ctx, g.elements, scaled, 1, 3), base);
  }
}

TEST(CollinearTriples, SparseHistogramPathAboveDenseLimit) {
  FieldContext ctx(2147483647);
  std::vector<u64> u1{1, 2, 4, 8};
  std::vector<u64> u2{3, 9, 27};
  EXPECT_EQ(collinear_triples(ctx, u1, u2, 1, 1),
            collinear_triples_bruteforce(ctx, u1, u2, 1, 1));
}

TEST(CollinearTriples, InputValidation) {
  FieldContext ctx(2003);
  std::vector<u64> big(2001);
  std::iota(big.begin(), big.end(), 1);
  EXPECT_THROW(collinear_triples(ctx, big, {1}, 1, 1), TooLarge);
  EXPECT_THROW(collinear_triples(ctx, {1}, {1}, 0, 1), ZeroScalar);
  EXPECT_THROW(collinear_triples(ctx, {0, 1}, {1}, 1, 1), ZeroArgument);
  EXPECT_THROW(collinear_triples_bruteforce(ctx, {1, 2, 3}, big, 1, 1),
               TooLarge);
}

TEST(IotaCubeSum, SinglePointGivesP) {
  FieldContext ctx(5);
  EXPECT_EQ(iota_cube_sum(ctx, {1}, {1}, 1, 1), 5u);
}

TEST(IotaCubeSum, TracksTripleCountWithinQuadraticError) {
  std::mt19937_64 rng(555);
  const u64 primes[] = {7, 11, 13, 31};
  for (int trial = 0; trial < 20; ++trial) {
    u64 p = primes[rng() % 4];
    FieldContext ctx(p);
    std::size_t na = 1 + rng() % 4;
    std::size_t nb = 1 + rng() % 4;
    std::vector<u64> a_set = random_subset(rng, p, na, true);
    std::vector<u64> b_set = random_subset(rng, p, nb, true);
    u64 lambda = 1 + rng() % (p - 1);
    u64 mu = 1 + rng() % (p - 1);
    u64 cube = iota_cube_sum(ctx, a_set, b_set, lambda, mu);
    u64 triples = collinear_triples(ctx, a_set, b_set, lambda, mu);
    double err = std::abs(double(cube) - double(triples));
    EXPECT_LE(err, 4.0 * double(na * na) * double(nb * nb))
        << "p=" << p << " na=" << na << " nb=" << nb;
  }
}

TEST(IotaCubeSum, Validation) {
  FieldContext ctx(7);
  EXPECT_THROW(iota_cube_sum(ctx, {}, {1}, 1, 1), EmptySet);
  EXPECT_THROW(iota_cube_sum(ctx, {1}, {1}, 1, 0), ZeroScalar);
}

TEST(TripleDeviation, ReportFieldsAreConsistent) {
  FieldContext ctx(13);
  Subgroup g = ctx.subgroup(3);  // {1, 3, 9}
  TripleCountReport r = triple_deviation_report(ctx, g, 1);
  EXPECT_EQ(r.triples,
            collinear_triples_bruteforce(ctx, g.elements, g.elements, 1, 1));
  EXPECT_NEAR(r.main_term, std::pow(3.0, 6.0) / 13.0, 1e-12);
  EXPECT_NEAR(r.deviation, std::abs(double(r.triples) - r.main_term), 1e-12);
  EXPECT_NEAR(r.ratio, r.deviation / r.regime_bound, 1e-15);
  EXPECT_GT(r.regime_bound, 0.0);
  EXPECT_TRUE(std::isfinite(r.ratio));
}

TEST(TripleDeviation, RegimeLabels) {
  FieldContext ctx(1009);
  EXPECT_EQ(triple_deviation_report(ctx, ctx.subgroup(144), 5).regime,
            Regime::large);
  EXPECT_EQ(triple_deviation_report(ctx, ctx.subgroup(48), 5).regime,
            Regime::small);
}

TEST(TripleDeviation, OrderCap) {
  FieldContext ctx(10007);
  EXPECT_THROW(triple_deviation_report(ctx, ctx.subgroup(5003), 1), TooLarge);
}

}  // namespace
}  // namespace fpsums
