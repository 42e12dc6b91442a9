#pragma once

// Additive coverage experiments with multiplicative subgroups: the
// three-fold sumset G + lambda*G + mu*G, the shifted ratio set
// {(u - lambda)/(v - mu)}, and a modular Romanoff-style check that every
// residue is a prime plus a sum of three powers of a fixed base.
//
// Sets are materialized exactly as residue-indexed bitmaps (p bits), so
// coverage counts are exact. The three-fold sumset is built by folding
// twice: the scaled pair sums cost |G|^2, and adding the third copy costs
// |pair set| * |G|, which the admissibility guard keeps under budget.

#include <cstdlib>
#include <unordered_set>
#include <vector>

#include "fpsums/bounds.hpp"
#include "fpsums/field.hpp"
#include "fpsums/incidence.hpp"

namespace fpsums {

enum class SumsetKind { three_fold, ratio_shift };

// Coverage report for one constructed set S.
//
// size and missing_nonzero describe S itself. For the three-fold kind,
// covered means every nonzero residue lies in S. For the ratio-shift kind,
// covered refers to the dilated set Q = G*S instead (Q is a union of
// cosets of G, so coverage is decided per coset); product_size is |Q| and
// zero_in_product records whether 0 lies in Q, which happens exactly when
// lambda is an element of G.
//
// regime_bound is the regime-appropriate comparison value: an upper bound
// on the number of missing residues in the three upper regimes, and a
// lower-bound floor |G|^2 / log |G| on the set size in the small regime.
struct SumsetReport {
  SumsetKind kind;
  u64 size;
  u64 missing_nonzero;
  bool covered;
  Regime regime;
  double regime_bound;
  u64 product_size;
  bool zero_in_product;
};

namespace detail {

inline constexpr u64 kFoldBudget = 1'000'000'000;

// Bitmap of G + lambda*G + mu*G. Folds the two scaled copies first, then
// translates the pair set by each element of G.
inline std::vector<bool> three_fold_bitmap(const FieldContext& ctx,
                                           const std::vector<u64>& elements,
                                           u64 lambda, u64 mu) {
  const u64 p = ctx.p();
  const u64 n = elements.size();
  if (u128(n) * n * n > kFoldBudget && u128(n) * p > kFoldBudget) {
    throw TooLarge("three_fold_bitmap: subgroup too large for enumeration");
  }
  std::vector<bool> pair(p, false);
  for (u64 x : elements) {
    const u64 lx = ctx.mul(lambda, x);
    for (u64 y : elements) pair[ctx.add(lx, ctx.mul(mu, y))] = true;
  }
  std::vector<bool> sum(p, false);
  for (u64 a = 0; a < p; ++a) {
    if (!pair[a]) continue;
    for (u64 x : elements) sum[ctx.add(x, a)] = true;
  }
  return sum;
}

}  // namespace detail

inline SumsetReport three_fold_sumset(const FieldContext& ctx,
                                      const Subgroup& g, u64 lambda, u64 mu) {
  if (lambda == 0 || mu == 0) {
    throw ZeroScalar("three_fold_sumset: scalars must be nonzero");
  }
  const u64 p = ctx.p();
  std::vector<bool> sum = detail::three_fold_bitmap(ctx, g.elements, lambda, mu);

  SumsetReport report{};
  report.kind = SumsetKind::three_fold;
  for (u64 a = 0; a < p; ++a) {
    if (sum[a]) ++report.size;
  }
  report.missing_nonzero = (p - 1) - (report.size - (sum[0] ? 1 : 0));
  report.covered = report.missing_nonzero == 0;
  const RegimeBound rb = cor42_deficiency_bound(p, g.order);
  report.regime = rb.regime;
  report.regime_bound = rb.value;
  report.product_size = 0;
  report.zero_in_product = false;
  return report;
}

// Ratio set {(u - lambda)/(v - mu) : u, v in G, v != mu} together with the
// coverage of its dilation Q = G * S. Q is a union of cosets of G plus
// possibly zero, so it is never stored: each nonzero ratio marks its coset
// through a discrete logarithm and |Q| is reconstructed from the count.
inline SumsetReport ratio_shift_set(const FieldContext& ctx, const Subgroup& g,
                                    u64 lambda, u64 mu) {
  if (lambda == 0 || mu == 0) {
    throw ZeroScalar("ratio_shift_set: scalars must be nonzero");
  }
  const u64 p = ctx.p();
  const u64 n = g.order;
  if (u128(n) * n > 100'000'000) {
    throw TooLarge("ratio_shift_set: subgroup too large for pair enumeration");
  }
  if (n == 1 && g.elements[0] == mu) {
    throw EmptyRatioSet("ratio_shift_set: every denominator vanishes");
  }

  std::vector<u64> ratios;
  if (p <= detail::kDenseRatioLimit) {
    std::vector<bool> seen(p, false);
    for (u64 v : g.elements) {
      if (v == mu) continue;
      const u64 inv_den = ctx.inv(ctx.sub(v, mu));
      for (u64 u : g.elements) seen[ctx.mul(ctx.sub(u, lambda), inv_den)] = true;
    }
    for (u64 a = 0; a < p; ++a) {
      if (seen[a]) ratios.push_back(a);
    }
  } else {
    std::unordered_set<u64> seen;
    for (u64 v : g.elements) {
      if (v == mu) continue;
      const u64 inv_den = ctx.inv(ctx.sub(v, mu));
      for (u64 u : g.elements) seen.insert(ctx.mul(ctx.sub(u, lambda), inv_den));
    }
    ratios.assign(seen.begin(), seen.end());
  }

  const u64 cosets = (p - 1) / n;
  std::vector<bool> coset_hit(cosets, false);
  u64 cosets_hit = 0;
  bool zero_ratio = false;
  for (u64 a : ratios) {
    if (a == 0) {
      zero_ratio = true;
      continue;
    }
    const u64 id = ctx.dlog(a) % cosets;
    if (!coset_hit[id]) {
      coset_hit[id] = true;
      ++cosets_hit;
    }
  }

  SumsetReport report{};
  report.kind = SumsetKind::ratio_shift;
  report.size = ratios.size();
  report.missing_nonzero = (p - 1) - (report.size - (zero_ratio ? 1 : 0));
  report.covered = cosets_hit == cosets;
  const RegimeBound rb = cor42_deficiency_bound(p, n);
  report.regime = rb.regime;
  report.regime_bound = rb.value;
  report.product_size = n * cosets_hit + (zero_ratio ? 1 : 0);
  report.zero_in_product = zero_ratio;
  return report;
}

struct RomanoffReport {
  u64 missing;
  u64 order;
  Regime regime;
};

// Counts residue classes mod p that are not of the form ell + s with ell a
// prime below p and s a sum of three powers of the base. The powers of the
// base form the cyclic group it generates, so the sum set is the three-fold
// sumset of that group with unit scalars.
inline RomanoffReport romanoff_coverage(const FieldContext& ctx, i64 base) {
  const u64 p = ctx.p();
  if (p < 5) {
    throw FieldError("romanoff_coverage: modulus must be at least 5");
  }
  if (base > -2 && base < 2) {
    throw FieldError("romanoff_coverage: base must have magnitude at least 2");
  }
  const u64 r = ctx.reduce_signed(base);
  if (r == 0) {
    throw BaseDivisibleByP("romanoff_coverage: base divisible by the modulus");
  }

  const u64 order = ctx.multiplicative_order(r);
  const Subgroup g = ctx.subgroup(order);
  const std::vector<bool> sum = detail::three_fold_bitmap(ctx, g.elements, 1, 1);
  std::vector<u64> sums;
  for (u64 s = 0; s < p; ++s) {
    if (sum[s]) sums.push_back(s);
  }

  std::vector<bool> composite(p, false);
  std::vector<u64> primes;
  for (u64 q = 2; q < p; ++q) {
    if (composite[q]) continue;
    primes.push_back(q);
    for (u64 m = q * q; m < p; m += q) composite[m] = true;
  }

  std::vector<bool> seen(p, false);
  u64 seen_count = 0;
  for (u64 ell : primes) {
    for (u64 s : sums) {
      const u64 c = ctx.add(ell, s);
      if (!seen[c]) {
        seen[c] = true;
        ++seen_count;
      }
    }
    if (seen_count == p) break;
  }

  RomanoffReport report{};
  report.missing = p - seen_count;
  report.order = order;
  report.regime = cor42_deficiency_bound(p, order).regime;
  return report;
}

}  // namespace fpsums
