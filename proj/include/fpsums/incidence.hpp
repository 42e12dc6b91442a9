// Line-incidence histograms over F_p x F_p and exact collinear-triple
// counting.  Lines are the graphs y = ax + b; vertical lines are not part
// of the family.
//
// The full histogram over all (a, b) has p^2 cells, so it is never stored.
// LineHistogram materializes one slope row at a time (a dense length-p
// array over intercepts) and the moment accumulators stream over slopes.

#pragma once

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "fpsums/bounds.hpp"
#include "fpsums/field.hpp"

namespace fpsums {

namespace detail {

// Sorted duplicate-free copy, validated against the field.
inline std::vector<u64> canonical_set(const FieldContext& ctx,
                                      std::vector<u64> xs,
                                      bool forbid_zero) {
  for (u64 x : xs) {
    if (x >= ctx.p()) throw FieldError("set element outside the field");
    if (forbid_zero && x == 0) {
      throw ZeroArgument("set elements must be nonzero");
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace detail

class LineHistogram {
 public:
  LineHistogram(const FieldContext& ctx, std::vector<u64> a, std::vector<u64> b)
      : ctx_(&ctx),
        a_(detail::canonical_set(ctx, std::move(a), false)),
        b_(detail::canonical_set(ctx, std::move(b), false)) {
    if (a_.empty() || b_.empty()) {
      throw EmptySet("line_histogram: point sets must be nonempty");
    }
  }

  // Overwrites row with the counts for slope a: row[b] = |l_{a,b} n (A x B)|.
  void slope_row(u64 a, std::vector<u32>& row) const {
    row.assign(ctx_->p(), 0);
    for (u64 x : a_) {
      const u64 ax = ctx_->mul(a, x);
      for (u64 y : b_) ++row[ctx_->sub(y, ax)];
    }
  }

  // Single-line count, O(|A| log |B|).
  u64 iota(u64 slope, u64 intercept) const {
    u64 count = 0;
    for (u64 x : a_) {
      const u64 y = ctx_->add(ctx_->mul(slope, x), intercept);
      if (std::binary_search(b_.begin(), b_.end(), y)) ++count;
    }
    return count;
  }

  const std::vector<u64>& set_a() const { return a_; }
  const std::vector<u64>& set_b() const { return b_; }
  const FieldContext& ctx() const { return *ctx_; }

 private:
  const FieldContext* ctx_;
  std::vector<u64> a_;
  std::vector<u64> b_;
};

inline LineHistogram line_histogram(const FieldContext& ctx,
                                    std::vector<u64> a, std::vector<u64> b) {
  return LineHistogram(ctx, std::move(a), std::move(b));
}

// First and second moments of the histogram against its (lambda, mu)
// dilated copy.  Both obey exact closed forms: m1 = m1_shifted = p|A||B|,
// and with I_A = |A n (lambda/mu)A|, I_B = |B n mu B| counting the points
// fixed by the two dilations,
//   m2 = |A|^2|B|^2 - I_A |B|^2 + p I_A I_B.
// When both dilations stabilize their sets (in particular for
// lambda = mu = 1) this collapses to |A|^2|B|^2 - |A||B|^2 + p|A||B|, the
// form the second moment is usually quoted in.
struct IotaMoments {
  u64 m1 = 0;
  u64 m1_shifted = 0;
  u64 m2 = 0;
};

inline IotaMoments iota_moments(const FieldContext& ctx,
                                const std::vector<u64>& a_set,
                                const std::vector<u64>& b_set, u64 lambda,
                                u64 mu) {
  if (lambda == 0 || mu == 0) {
    throw ZeroScalar("iota_moments: dilation scalars must be nonzero");
  }
  LineHistogram hist(ctx, a_set, b_set);
  const u64 p = ctx.p();
  IotaMoments m;
  std::vector<u32> row, shifted;
  for (u64 a = 0; a < p; ++a) {
    hist.slope_row(a, row);
    hist.slope_row(ctx.mul(lambda, a), shifted);
    for (u64 b = 0; b < p; ++b) {
      const u64 x = row[b];
      const u64 y = shifted[ctx.mul(mu, b)];
      m.m1 += x;
      m.m1_shifted += y;
      m.m2 += x * y;
    }
  }
  return m;
}

// Third mixed moment sum_{a,b} iota(l_{a,b}) * iota(l_{lambda a, mu b})^2.
// Tracks the collinear-triple count below up to O(|A|^2|B|^2).
inline u64 iota_cube_sum(const FieldContext& ctx,
                         const std::vector<u64>& a_set,
                         const std::vector<u64>& b_set, u64 lambda, u64 mu) {
  if (lambda == 0 || mu == 0) {
    throw ZeroScalar("iota_cube_sum: dilation scalars must be nonzero");
  }
  LineHistogram hist(ctx, a_set, b_set);
  const u64 p = ctx.p();
  u64 total = 0;
  std::vector<u32> row, shifted;
  for (u64 a = 0; a < p; ++a) {
    hist.slope_row(a, row);
    hist.slope_row(ctx.mul(lambda, a), shifted);
    for (u64 b = 0; b < p; ++b) {
      const u64 y = shifted[ctx.mul(mu, b)];
      total += row[b] * y * y;
    }
  }
  return total;
}

namespace detail {

// Ratio histograms stay dense while a length-p count array is affordable.
constexpr u64 kDenseRatioLimit = u64{1} << 24;

// Feeds every ratio (u - lambda*v) / (u - lambda*w) with nonzero
// denominator to the sink.  O(n^2) inversions, O(n^3) multiplications.
template <typename Sink>
void ratio_histogram(const FieldContext& ctx, const std::vector<u64>& set,
                     u64 lambda, Sink&& bump) {
  for (u64 u : set) {
    for (u64 w : set) {
      const u64 den = ctx.sub(u, ctx.mul(lambda, w));
      if (den == 0) continue;
      const u64 inv_den = ctx.inv(den);
      for (u64 v : set) {
        bump(ctx.mul(ctx.sub(u, ctx.mul(lambda, v)), inv_den));
      }
    }
  }
}

}  // namespace detail

// Number of sextuples (u_i, v_i, w_i) in U_1^3 x U_2^3 with
// (u_1 - l_1 v_1)/(u_1 - l_1 w_1) = (u_2 - l_2 v_2)/(u_2 - l_2 w_2),
// counted over the tuples where both denominators are nonzero.  Zero
// numerators are allowed: a fraction with zero numerator is defined, so
// ratio 0 is a legal common value.
inline u64 collinear_triples(const FieldContext& ctx, std::vector<u64> u1,
                             std::vector<u64> u2, u64 lambda1, u64 lambda2) {
  if (lambda1 == 0 || lambda2 == 0) {
    throw ZeroScalar("collinear_triples: shifts must be nonzero");
  }
  u1 = detail::canonical_set(ctx, std::move(u1), true);
  u2 = detail::canonical_set(ctx, std::move(u2), true);
  if (u1.size() > 2000 || u2.size() > 2000) {
    throw TooLarge("collinear_triples: sets capped at 2000 elements");
  }
  if (u1.empty() || u2.empty()) return 0;

  const u64 p = ctx.p();
  const bool same_side = u1 == u2 && lambda1 == lambda2;
  if (p <= detail::kDenseRatioLimit) {
    std::vector<u32> h1(p, 0);
    detail::ratio_histogram(ctx, u1, lambda1, [&](u64 r) { ++h1[r]; });
    std::vector<u32> h2;
    if (!same_side) {
      h2.assign(p, 0);
      detail::ratio_histogram(ctx, u2, lambda2, [&](u64 r) { ++h2[r]; });
    }
    const std::vector<u32>& rhs = same_side ? h1 : h2;
    u64 total = 0;
    for (u64 r = 0; r < p; ++r) total += u64(h1[r]) * rhs[r];
    return total;
  }

  std::unordered_map<u64, u64> h1;
  detail::ratio_histogram(ctx, u1, lambda1, [&](u64 r) { ++h1[r]; });
  std::unordered_map<u64, u64> h2;
  if (!same_side) {
    detail::ratio_histogram(ctx, u2, lambda2, [&](u64 r) { ++h2[r]; });
  }
  const bool h1_smaller = same_side || h1.size() <= h2.size();
  const std::unordered_map<u64, u64>& probe = h1_smaller ? h1 : h2;
  const std::unordered_map<u64, u64>& table = same_side ? h1 : (h1_smaller ? h2 : h1);
  u64 total = 0;
  for (const auto& [r, c] : probe) {
    auto it = table.find(r);
    if (it != table.end()) total += c * it->second;
  }
  return total;
}

// Literal enumeration of the defining equation, cross-multiplied.  Ground
// truth for the histogram path; deliberately has no shared machinery with
// it beyond field arithmetic.
inline u64 collinear_triples_bruteforce(const FieldContext& ctx,
                                        std::vector<u64> u1,
                                        std::vector<u64> u2, u64 lambda1,
                                        u64 lambda2) {
  if (lambda1 == 0 || lambda2 == 0) {
    throw ZeroScalar("collinear_triples_bruteforce: shifts must be nonzero");
  }
  u1 = detail::canonical_set(ctx, std::move(u1), true);
  u2 = detail::canonical_set(ctx, std::move(u2), true);
  if (u1.size() * u2.size() > 64) {
    throw TooLarge("collinear_triples_bruteforce: |U1|*|U2| capped at 64");
  }
  u64 count = 0;
  for (u64 a : u1)
    for (u64 b : u1)
      for (u64 c : u1) {
        const u64 den1 = ctx.sub(a, ctx.mul(lambda1, c));
        if (den1 == 0) continue;
        const u64 num1 = ctx.sub(a, ctx.mul(lambda1, b));
        for (u64 x : u2)
          for (u64 y : u2)
            for (u64 z : u2) {
              const u64 den2 = ctx.sub(x, ctx.mul(lambda2, z));
              if (den2 == 0) continue;
              const u64 num2 = ctx.sub(x, ctx.mul(lambda2, y));
              if (ctx.mul(num1, den2) == ctx.mul(num2, den1)) ++count;
            }
      }
  return count;
}

// How far the triple count of a subgroup strays from its main term n^6/p,
// measured against the regime bound for that order.
struct TripleCountReport {
  u64 triples = 0;
  double main_term = 0;
  double deviation = 0;
  Regime regime = Regime::small;
  double regime_bound = 0;
  double ratio = 0;  // deviation / regime_bound
};

inline TripleCountReport triple_deviation_report(const FieldContext& ctx,
                                                 const Subgroup& g,
                                                 u64 lambda) {
  if (g.order > 2000) {
    throw TooLarge("triple_deviation_report: subgroup order capped at 2000");
  }
  TripleCountReport r;
  r.triples = collinear_triples(ctx, g.elements, g.elements, 1, lambda);
  const double n = double(g.order);
  r.main_term = std::pow(n, 6.0) / double(ctx.p());
  r.deviation = std::abs(double(r.triples) - r.main_term);
  RegimeBound rb = thm11_bound(ctx.p(), g.order);
  r.regime = rb.regime;
  r.regime_bound = rb.value;
  r.ratio = r.deviation / r.regime_bound;
  return r;
}

}  // namespace fpsums
