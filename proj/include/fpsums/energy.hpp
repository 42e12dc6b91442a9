// Multiplicative energy and difference-product statistics, plus the exact
// bridge between collinear-triple counts and the energy of shifted sets.

#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "fpsums/bounds.hpp"
#include "fpsums/field.hpp"
#include "fpsums/incidence.hpp"

namespace fpsums {

// Number of solutions to u1 v1 = u2 v2 over U x V: the second moment of
// the product histogram h(t) = #{(u, v) : uv = t}.  Zero elements are
// allowed and counted literally.
inline u64 mult_energy(const FieldContext& ctx, const std::vector<u64>& u_in,
                       const std::vector<u64>& v_in) {
  std::vector<u64> u = detail::canonical_set(ctx, u_in, false);
  std::vector<u64> v = detail::canonical_set(ctx, v_in, false);
  if (u.empty() || v.empty()) {
    throw EmptySet("mult_energy: sets must be nonempty");
  }
  const u64 p = ctx.p();
  u64 total = 0;
  if (p <= detail::kDenseRatioLimit) {
    std::vector<u32> h(p, 0);
    for (u64 x : u)
      for (u64 y : v) ++h[ctx.mul(x, y)];
    for (u64 t = 0; t < p; ++t) total += u64(h[t]) * h[t];
  } else {
    std::unordered_map<u64, u64> h;
    for (u64 x : u)
      for (u64 y : v) ++h[ctx.mul(x, y)];
    for (const auto& [t, c] : h) total += c * c;
  }
  return total;
}

namespace detail {

// Dense product histograms need u64 cells, so they get a tighter memory cap
// than the u32 ratio histograms.
constexpr u64 kDenseProductLimit = u64{1} << 22;

}  // namespace detail

// Number of solutions to (u1-v1)(u2-v2) = (u3-v3)(u4-v4) over U^8.  The
// zero fiber has the closed form h(0) = 2n^3 - n^2 (pairs of difference
// pairs where at least one factor vanishes); the nonzero fibers come from
// convolving the nonzero-difference histogram with itself over its
// support.  Returns u128: for subgroup-sized inputs the count tracks
// n^8 / p, which overflows 64 bits well inside the accepted range.
inline u128 d_times(const FieldContext& ctx, const std::vector<u64>& u_in) {
  std::vector<u64> u = detail::canonical_set(ctx, u_in, true);
  if (u.empty()) throw EmptySet("d_times: set must be nonempty");
  if (u.size() > 5000) throw TooLarge("d_times: set capped at 5000 elements");
  const u64 n = u.size();
  const u64 p = ctx.p();

  std::unordered_map<u64, u64> diff;
  for (u64 a : u)
    for (u64 b : u) {
      if (a != b) ++diff[ctx.sub(a, b)];
    }

  u128 total = 0;
  if (p <= detail::kDenseProductLimit) {
    std::vector<u64> h(p, 0);
    for (const auto& [x, cx] : diff)
      for (const auto& [y, cy] : diff) h[ctx.mul(x, y)] += cx * cy;
    for (u64 t = 1; t < p; ++t) total += u128(h[t]) * h[t];
  } else {
    std::unordered_map<u64, u64> h;
    for (const auto& [x, cx] : diff)
      for (const auto& [y, cy] : diff) h[ctx.mul(x, y)] += cx * cy;
    for (const auto& [t, c] : h) total += u128(c) * c;
  }
  const u128 h0 = u128(2) * n * n * n - u128(n) * n;
  return total + h0 * h0;
}

// Exact relation between the triple count of a subgroup pair and the
// multiplicative energy of reciprocal-shifted copies.  Dividing the two
// linear forms u - lambda*v and u - lambda*w by the unit u turns each side
// of the triple equation into 1 - lambda*a with a ranging over the
// subgroup, and 1 - lambda*a = -lambda * (a - 1/lambda).  The energy of
// G - 1/lambda against H - 1/mu therefore counts the same cross equation
// with the nonvanishing constraints dropped, so
//   product_form - triples = |G| |H| * #{solutions using a vanishing form}
// and the gap is nonnegative by construction.  Shifting by lambda itself
// instead of its inverse does not have this property.
struct TEnergyRelation {
  u64 triples = 0;
  u64 product_form = 0;
  i64 gap = 0;  // product_form - triples
};

inline TEnergyRelation t_energy_relation(const FieldContext& ctx,
                                         const Subgroup& g, const Subgroup& h,
                                         u64 lambda, u64 mu) {
  if (lambda == 0 || mu == 0) {
    throw ZeroScalar("t_energy_relation: shifts must be nonzero");
  }
  if (g.order > 500 || h.order > 500) {
    throw TooLarge("t_energy_relation: subgroup orders capped at 500");
  }
  TEnergyRelation r;
  r.triples = collinear_triples(ctx, g.elements, h.elements, lambda, mu);
  std::vector<u64> gs =
      translate_set(ctx, g.elements, ctx.neg(ctx.inv(lambda)));
  std::vector<u64> hs = translate_set(ctx, h.elements, ctx.neg(ctx.inv(mu)));
  r.product_form = g.order * h.order * mult_energy(ctx, gs, hs);
  r.gap = i64(r.product_form) - i64(r.triples);
  return r;
}

// Deviation of the shifted-subgroup energy from its main term n^4 / p,
// measured against the regime bound for that order.
struct EnergyReport {
  u64 energy = 0;
  double main_term = 0;
  double deviation = 0;
  Regime regime = Regime::small;
  double regime_bound = 0;
  double ratio = 0;  // deviation / regime_bound
};

inline EnergyReport energy_deviation_report(const FieldContext& ctx,
                                            const Subgroup& g, u64 lambda) {
  if (lambda == 0) {
    throw ZeroScalar("energy_deviation_report: shift must be nonzero");
  }
  if (g.order > 5000) {
    throw TooLarge("energy_deviation_report: subgroup order capped at 5000");
  }
  std::vector<u64> shifted = translate_set(ctx, g.elements, lambda);
  EnergyReport r;
  r.energy = mult_energy(ctx, shifted, shifted);
  r.main_term = std::pow(double(g.order), 4.0) / double(ctx.p());
  r.deviation = std::abs(double(r.energy) - r.main_term);
  RegimeBound rb = cor41_bound(ctx.p(), g.order);
  r.regime = rb.regime;
  r.regime_bound = rb.value;
  r.ratio = r.deviation / r.regime_bound;
  return r;
}

// Compares the difference-product count against its triple-count majorant
// n^2 T(U) + n^6.
struct DxCheck {
  u128 lhs = 0;  // d_times(U)
  u128 rhs = 0;  // n^2 T(U) + n^6
  double ratio = 0;
};

inline DxCheck dx_vs_t_check(const FieldContext& ctx,
                             const std::vector<u64>& u_in) {
  std::vector<u64> u = detail::canonical_set(ctx, u_in, true);
  if (u.empty()) throw EmptySet("dx_vs_t_check: set must be nonempty");
  if (u.size() > 300) {
    throw TooLarge("dx_vs_t_check: set capped at 300 elements");
  }
  const u64 n = u.size();
  DxCheck c;
  c.lhs = d_times(ctx, u);
  const u64 triples = collinear_triples(ctx, u, u, 1, 1);
  c.rhs = u128(n) * n * triples + u128(n) * n * n * n * n * n;
  c.ratio = double(c.lhs) / double(c.rhs);
  return c;
}

}  // namespace fpsums
