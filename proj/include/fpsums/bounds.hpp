// Closed-form bound calculators for sparse exponential sums over prime
// fields, plus a small report type that compares them against a measured
// sum.  Everything here is a pure function of its arguments.
//
// Conventions shared by all calculators:
//   - log means natural log.
//   - Logs of set/subgroup orders are clamped below at log 2, so the
//     small-regime formulas stay positive for singleton inputs.
//   - Piecewise bounds return the value together with a Regime label; the
//     cases are tested in order, so exactly one label fires per input.
//   - Implied constants are taken to be 1.  Consumers that want to rescale
//     get the raw formula value.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "fpsums/charsum.hpp"
#include "fpsums/field.hpp"

namespace fpsums {

enum class Regime { large, middle, middle_log, small };

constexpr const char* regime_name(Regime r) {
  switch (r) {
    case Regime::large: return "large";
    case Regime::middle: return "middle";
    case Regime::middle_log: return "middle_log";
    case Regime::small: return "small";
  }
  return "invalid";
}

struct RegimeBound {
  double value;
  Regime regime;
};

namespace detail {

inline double safe_log(double n) { return std::log(std::max(n, 2.0)); }

// n >= p^{2/3}, decided exactly in integers as n^3 >= p^2.
inline bool at_least_p_two_thirds(u64 n, u64 p) {
  return u128(n) * n * n >= u128(p) * p;
}

// The two threshold scales that key the piecewise bounds: sqrt(p) * log p
// and sqrt(p * log p).  For p >= 3 the former is the larger.
inline double sqrtp_logp(u64 p) {
  return std::sqrt(double(p)) * std::log(double(p));
}

inline double sqrt_plogp(u64 p) {
  return std::sqrt(double(p) * std::log(double(p)));
}

}  // namespace detail

// Parameter pack for the trinomial-sum bound below.  d, e, f are the gcds
// of the three exponents with p-1 under a chosen assignment of exponents
// to roles, and g = d/gcd(d,f), h = e/gcd(e,f).  Only assignments with
// f >= g >= h are admissible.
struct GcdParams {
  u64 d = 0;
  u64 e = 0;
  u64 f = 0;
  u64 g = 0;
  u64 h = 0;
  std::array<u64, 3> assignment{};  // exponents in (d, e, f) role order
};

// Piecewise bound on |S| for a trinomial with parameters q, keyed by how
// g and h compare with sqrt(p log p).  Continuous across both seams.
inline RegimeBound thm16_bound(u64 p, const GcdParams& q) {
  const double P = double(p);
  const double logp = std::log(P);
  const double cut = detail::sqrt_plogp(p);
  const double f = double(q.f), g = double(q.g), h = double(q.h);
  if (h >= cut) {
    return {std::pow(P, 7.0 / 8.0) * std::pow(f, 1.0 / 8.0), Regime::large};
  }
  if (g >= cut) {
    return {std::pow(P, 15.0 / 16.0) * std::pow(f / h, 1.0 / 8.0) *
                std::pow(logp, 1.0 / 16.0),
            Regime::middle};
  }
  return {P * std::pow(f / (g * h), 1.0 / 8.0) * std::pow(logp, 1.0 / 8.0),
          Regime::small};
}

// Chooses the role assignment for (k, l, m).  The bound is symmetric in
// the three monomials, so any permutation with f >= g >= h is legitimate;
// we return the one whose bound value is smallest.  At least one
// permutation is always admissible: putting the largest gcd in the f role
// forces f >= g and f >= h, and the remaining two roles can be swapped to
// order g and h.
inline GcdParams gcd_params(u64 p, u64 k, u64 l, u64 m) {
  if (k == 0 || l == 0 || m == 0) {
    throw ZeroArgument("gcd_params: exponents must be positive");
  }
  const u64 n = p - 1;
  const std::array<u64, 3> exps{k, l, m};
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  GcdParams best;
  double best_value = 0;
  bool found = false;
  for (const auto& perm : kPerms) {
    GcdParams q;
    q.assignment = {exps[perm[0]], exps[perm[1]], exps[perm[2]]};
    q.d = std::gcd(q.assignment[0], n);
    q.e = std::gcd(q.assignment[1], n);
    q.f = std::gcd(q.assignment[2], n);
    q.g = q.d / std::gcd(q.d, q.f);
    q.h = q.e / std::gcd(q.e, q.f);
    if (q.f < q.g || q.g < q.h) continue;
    double value = thm16_bound(p, q).value;
    if (!found || value < best_value) {
      best = q;
      best_value = value;
      found = true;
    }
  }
  if (!found) throw FieldError("gcd_params: no admissible role assignment");
  return best;
}

// Classical degree bound: max exponent times sqrt(p).  Exponents are used
// as given; callers that reduce mod p-1 first get the sharper value.
inline double weil_bound(u64 p, const SparsePoly& psi) {
  if (psi.terms.empty()) throw FieldError("weil_bound: empty polynomial");
  u64 max_exp = 0;
  for (const PolyTerm& t : psi.terms) max_exp = std::max(max_exp, t.exp);
  return double(max_exp) * std::sqrt(double(p));
}

inline double ccp1_bound(u64 p, u64 k, u64 l, u64 m) {
  const double prod = double(k) * double(l) * double(m);
  const double top = double(std::max({k, l, m}));
  return std::pow(prod / top, 0.25) * std::pow(double(p), 7.0 / 8.0);
}

inline double cp_bound(u64 p, u64 k, u64 l, u64 m) {
  const double prod = double(k) * double(l) * double(m);
  return std::pow(prod, 1.0 / 9.0) * std::pow(double(p), 5.0 / 6.0);
}

inline double ccp2_bound(u64 p, u64 k, u64 l, u64 m) {
  const u64 D = std::gcd(std::gcd(k, l), std::gcd(m, p - 1));
  const double P = double(p);
  const double prod = double(k) * double(l) * double(m);
  return std::sqrt(double(D)) * std::pow(P, 7.0 / 8.0) +
         std::pow(prod, 0.25) * std::pow(P, 5.0 / 8.0);
}

// Deviation bound for the collinear-triple count of a subgroup of order n:
// |T - n^6/p| is at most the returned value (up to the implied constant).
inline RegimeBound thm11_bound(u64 p, u64 n) {
  const double P = double(p), N = double(n);
  if (detail::at_least_p_two_thirds(n, p)) {
    return {std::sqrt(P) * std::pow(N, 3.5), Regime::large};
  }
  if (N >= detail::sqrtp_logp(p)) {
    return {std::pow(N, 5.0) / std::sqrt(P), Regime::middle};
  }
  return {std::pow(N, 4.0) * detail::safe_log(N), Regime::small};
}

// Deviation bound for the multiplicative energy of a shifted subgroup:
// |E(G + lambda) - n^4/p| up to the implied constant.  Same regime cuts
// as thm11_bound.
inline RegimeBound cor41_bound(u64 p, u64 n) {
  const double P = double(p), N = double(n);
  if (detail::at_least_p_two_thirds(n, p)) {
    return {std::sqrt(P) * std::pow(N, 1.5), Regime::large};
  }
  if (N >= detail::sqrtp_logp(p)) {
    return {std::pow(N, 3.0) / std::sqrt(P), Regime::middle};
  }
  return {std::pow(N, 2.0) * detail::safe_log(N), Regime::small};
}

// Bound on the difference-product count D of a subgroup of order n.
inline RegimeBound cor34_bound(u64 p, u64 n) {
  const double P = double(p), N = double(n);
  if (N >= detail::sqrt_plogp(p)) {
    return {std::pow(N, 8.0) / P, Regime::large};
  }
  return {std::pow(N, 6.0) * detail::safe_log(N), Regime::small};
}

// Bound on the weighted trilinear sum over three subgroups of orders
// F >= G >= H (sorted here if given out of order).
inline RegimeBound lemma35_bound(u64 p, u64 forder, u64 gorder, u64 horder) {
  std::array<u64, 3> o{forder, gorder, horder};
  std::sort(o.begin(), o.end(), std::greater<>());
  const double P = double(p), logp = std::log(P);
  const double F = double(o[0]), G = double(o[1]), H = double(o[2]);
  const double cut = detail::sqrt_plogp(p);
  const double f78 = std::pow(F, 7.0 / 8.0);
  if (H >= cut) {
    return {f78 * G * H, Regime::large};
  }
  if (G >= cut) {
    return {std::pow(P, 1.0 / 16.0) * f78 * G * std::pow(H, 7.0 / 8.0) *
                std::pow(logp, 1.0 / 16.0),
            Regime::middle};
  }
  return {std::pow(P, 1.0 / 8.0) * f78 * std::pow(G * H, 7.0 / 8.0) *
              std::pow(logp, 1.0 / 8.0),
          Regime::small};
}

inline double bilinear_bound(u64 p, u64 nx, u64 ny) {
  return std::sqrt(double(p) * double(nx) * double(ny));
}

// How many nonzero residues the three-fold sumset of a subgroup of order n
// can miss.  The first three regimes bound the deficiency p - |S| from
// above; the small regime instead returns the guaranteed floor n^2 / log n
// on |S| itself, since no deficiency bound is available there.
inline RegimeBound cor42_deficiency_bound(u64 p, u64 n) {
  const double P = double(p), N = double(n), logp = std::log(P);
  if (detail::at_least_p_two_thirds(n, p)) {
    return {std::pow(P, 2.5) * std::pow(N, -2.5), Regime::large};
  }
  if (N >= detail::sqrtp_logp(p)) {
    return {std::pow(P, 1.5) / N, Regime::middle};
  }
  if (N > detail::sqrt_plogp(p)) {
    return {P * P / (N * N) * logp, Regime::middle_log};
  }
  return {N * N / detail::safe_log(N), Regime::small};
}

// Side-by-side comparison of a measured trinomial sum against every bound
// above that applies to it.
struct BoundReport {
  double actual = 0;
  double trivial = 0;  // p - 1
  double weil = 0;
  double ccp1 = 0;
  double cp = 0;
  double ccp2 = 0;
  double thm16 = 0;
  Regime thm16_regime = Regime::small;
  GcdParams params;
  const char* best = "";  // name of the smallest bound

  struct Entry {
    const char* name;
    double value;
    double ratio;  // actual / value
  };

  std::array<Entry, 6> entries() const {
    auto mk = [&](const char* name, double v) {
      return Entry{name, v, actual / v};
    };
    return {mk("trivial", trivial), mk("weil", weil), mk("ccp1", ccp1),
            mk("cp", cp),           mk("ccp2", ccp2), mk("thm16", thm16)};
  }
};

inline BoundReport bound_report(const FieldContext& ctx, const SparsePoly& psi,
                                CharacterId j) {
  if (!psi.is_trinomial()) {
    throw NotATrinomial("bound_report: need exactly three monomials");
  }
  validate_poly(ctx, psi);
  validate_char(ctx, j);
  const u64 k = psi.terms[0].exp, l = psi.terms[1].exp, m = psi.terms[2].exp;
  BoundReport r;
  r.actual = std::abs(eval_sparse_sum(ctx, psi, j));
  r.trivial = double(ctx.p() - 1);
  r.weil = weil_bound(ctx.p(), psi);
  r.ccp1 = ccp1_bound(ctx.p(), k, l, m);
  r.cp = cp_bound(ctx.p(), k, l, m);
  r.ccp2 = ccp2_bound(ctx.p(), k, l, m);
  r.params = gcd_params(ctx.p(), k, l, m);
  RegimeBound t16 = thm16_bound(ctx.p(), r.params);
  r.thm16 = t16.value;
  r.thm16_regime = t16.regime;
  r.best = "trivial";
  double best_value = r.trivial;
  for (const auto& e : r.entries()) {
    if (e.value < best_value) {
      best_value = e.value;
      r.best = e.name;
    }
  }
  return r;
}

}  // namespace fpsums
