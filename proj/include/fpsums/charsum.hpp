#pragma once
// Exponential sums with sparse polynomials over F_p.
//
// The central quantity is
//
//     S_chi(Psi) = sum_{x in F_p^*} chi(x) e_p(Psi(x)),
//
// where e_p(u) = exp(2*pi*i*u/p), chi is the multiplicative character of
// index j (chi(x) = e(j*ind(x)/(p-1)) with ind the discrete log base the
// context's primitive root), and Psi(X) = sum a_i X^{k_i} is a sparse
// polynomial with nonzero coefficients and pairwise distinct exponents.
//
// Evaluation strategy and precision:
//   * x runs over powers of the primitive root, so each monomial advances by
//     one modular multiplication per step and the character index by one
//     addition mod p-1.  No per-point exponentiation is needed.
//   * Exponents are reduced mod p-1 up front (x^{p-1} = 1 on F_p^*).  A term
//     whose exponent reduces to 0 contributes the constant a_i.
//   * Roots of unity come from precomputed tables of size p and p-1 when
//     p <= 10^7, otherwise from std::polar per point.  Accumulation is
//     compensated (Neumaier), keeping the error orders of magnitude below
//     the 1e-6 * p tolerance used by the identity checks.
//
// eval_sum_subgroup_decomposed recomputes S_chi(Psi) for trinomials through
// the subgroup-averaging identity (substituting x -> xyz and averaging over
// y in G_d, z in G_e with d = gcd(k, p-1), e = gcd(l, p-1), which kills y^k
// and z^l), so it serves as an independent oracle for the direct evaluator.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <vector>

#include "fpsums/field.hpp"

namespace fpsums {

using cdouble = std::complex<double>;

using CharacterId = u64;  // j in [0, p-2]; j = 0 is the principal character

struct PolyTerm {
  u64 coeff = 0;  // in [1, p-1]
  u64 exp = 0;    // >= 1, reduced mod p-1 only at evaluation time
};

struct SparsePoly {
  std::vector<PolyTerm> terms;
  bool is_trinomial() const { return terms.size() == 3; }
};

inline void validate_poly(const FieldContext& ctx, const SparsePoly& psi) {
  if (psi.terms.empty()) throw FieldError("polynomial needs at least one term");
  for (const PolyTerm& t : psi.terms) {
    if (t.coeff % ctx.p() == 0) throw ZeroCoefficient("coefficient is 0 mod p");
    if (t.exp == 0) throw FieldError("exponents must be >= 1");
  }
  for (std::size_t i = 0; i < psi.terms.size(); ++i) {
    for (std::size_t k = i + 1; k < psi.terms.size(); ++k) {
      if (psi.terms[i].exp == psi.terms[k].exp) {
        throw FieldError("exponents must be pairwise distinct");
      }
    }
  }
}

inline void validate_char(const FieldContext& ctx, CharacterId j) {
  if (j > ctx.p() - 2) throw FieldError("character index must lie in [0, p-2]");
}

namespace detail {

constexpr u64 kRootTableLimit = 10'000'000;

// Complex Neumaier summation, one compensation per component.
struct KahanSum {
  double re = 0, re_c = 0, im = 0, im_c = 0;
  static void step(double& s, double& c, double x) {
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void add(cdouble z) {
    step(re, re_c, z.real());
    step(im, im_c, z.imag());
  }
  cdouble value() const { return {re + re_c, im + im_c}; }
};

// e(k/n) for k = 0..n-1.  Entry 0 is exactly 1.
inline std::vector<cdouble> unit_roots(u64 n) {
  std::vector<cdouble> t(n);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (u64 k = 0; k < n; ++k) t[k] = std::polar(1.0, w * static_cast<double>(k));
  return t;
}

inline cdouble unit(u64 k, u64 n) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(n));
}

}  // namespace detail

// e_p(u) for a canonical residue u.  Exactly 1+0i at u = 0.
inline cdouble additive_char(const FieldContext& ctx, u64 u) {
  assert(u < ctx.p());
  return detail::unit(u, ctx.p());
}

// chi_j(x) = e(j * ind(x) / (p-1)).  The principal character returns exactly 1.
inline cdouble mult_char(const FieldContext& ctx, CharacterId j, u64 x) {
  if (x % ctx.p() == 0) throw ZeroArgument("multiplicative character at zero");
  validate_char(ctx, j);
  if (j == 0) return {1.0, 0.0};
  const u64 n = ctx.p() - 1;
  const u64 idx = static_cast<u64>(u128(j) * ctx.dlog(x) % n);
  return detail::unit(idx, n);
}

inline cdouble eval_sparse_sum(const FieldContext& ctx, const SparsePoly& psi,
                               CharacterId j) {
  validate_poly(ctx, psi);
  validate_char(ctx, j);
  const u64 p = ctx.p(), n = p - 1;
  const std::size_t t = psi.terms.size();

  std::vector<u64> cur(t), step(t);
  for (std::size_t i = 0; i < t; ++i) {
    cur[i] = psi.terms[i].coeff % p;                      // a_i * 1^{k_i}
    step[i] = ctx.pow(ctx.primitive_root(), psi.terms[i].exp % n);
  }

  const bool tabled = p <= detail::kRootTableLimit;
  std::vector<cdouble> ep, chi;
  if (tabled) {
    ep = detail::unit_roots(p);
    if (j != 0) chi = detail::unit_roots(n);
  }

  detail::KahanSum acc;
  u64 chi_idx = 0;  // (j * i) mod (p-1) while x = g0^i
  for (u64 i = 0; i < n; ++i) {
    u64 arg = 0;
    for (std::size_t k = 0; k < t; ++k) arg += cur[k];
    arg %= p;
    cdouble term = tabled ? ep[arg] : detail::unit(arg, p);
    if (j != 0) term *= tabled ? chi[chi_idx] : detail::unit(chi_idx, n);
    acc.add(term);
    for (std::size_t k = 0; k < t; ++k) cur[k] = ctx.mul(cur[k], step[k]);
    chi_idx += j;
    if (chi_idx >= n) chi_idx -= n;
  }
  return acc.value();
}

// Subgroup-averaged trinomial evaluation:
//
//   S = (1/(d*e)) sum_{x in F_p^*} sum_{y in G_d} sum_{z in G_e}
//         chi(x)chi(y)chi(z) e_p(a x^k z^k + b x^l y^l + c x^m y^m z^m),
//
// the expansion of chi(xyz) e_p(Psi(xyz)) that uses y^k = z^l = 1.  Cost is
// O(p * d * e); d and e are gcds of the first two exponents with p-1.
inline cdouble eval_sum_subgroup_decomposed(const FieldContext& ctx,
                                            const SparsePoly& psi,
                                            CharacterId j) {
  validate_poly(ctx, psi);
  validate_char(ctx, j);
  if (!psi.is_trinomial()) {
    throw NotATrinomial("subgroup decomposition needs exactly 3 terms");
  }
  const u64 p = ctx.p(), n = p - 1;
  const u64 k = psi.terms[0].exp, l = psi.terms[1].exp, m = psi.terms[2].exp;
  const u64 a = psi.terms[0].coeff % p, b = psi.terms[1].coeff % p,
            c = psi.terms[2].coeff % p;
  const u64 rk = k % n, rl = l % n, rm = m % n;
  const Subgroup gd = ctx.subgroup(std::gcd(k, n));
  const Subgroup ge = ctx.subgroup(std::gcd(l, n));

  const bool tabled = p <= detail::kRootTableLimit;
  std::vector<cdouble> ep, chi;
  if (tabled) {
    ep = detail::unit_roots(p);
    chi = detail::unit_roots(n);
  }
  auto ep_at = [&](u64 u) { return tabled ? ep[u] : detail::unit(u, p); };
  auto chi_at = [&](u64 u) { return tabled ? chi[u] : detail::unit(u, n); };

  // Per-subgroup-element powers and weighted character indices.
  const std::size_t nd = gd.elements.size(), ne = ge.elements.size();
  std::vector<u64> y_l(nd), y_m(nd), jd_y(nd), z_k(ne), z_m(ne), jd_z(ne);
  for (std::size_t i = 0; i < nd; ++i) {
    y_l[i] = ctx.pow(gd.elements[i], rl);
    y_m[i] = ctx.pow(gd.elements[i], rm);
    jd_y[i] = static_cast<u64>(u128(j) * ctx.dlog(gd.elements[i]) % n);
  }
  for (std::size_t i = 0; i < ne; ++i) {
    z_k[i] = ctx.pow(ge.elements[i], rk);
    z_m[i] = ctx.pow(ge.elements[i], rm);
    jd_z[i] = static_cast<u64>(u128(j) * ctx.dlog(ge.elements[i]) % n);
  }

  detail::KahanSum acc;
  for (u64 x = 1; x < p; ++x) {
    const u64 ax = ctx.mul(a, ctx.pow(x, rk));
    const u64 bx = ctx.mul(b, ctx.pow(x, rl));
    const u64 cx = ctx.mul(c, ctx.pow(x, rm));
    const u64 jd_x = static_cast<u64>(u128(j) * ctx.dlog(x) % n);
    for (std::size_t iy = 0; iy < nd; ++iy) {
      const u64 by = ctx.mul(bx, y_l[iy]);
      const u64 cy = ctx.mul(cx, y_m[iy]);
      u64 jd_xy = jd_x + jd_y[iy];
      if (jd_xy >= n) jd_xy -= n;
      for (std::size_t iz = 0; iz < ne; ++iz) {
        const u64 arg = ctx.add(ctx.mul(ax, z_k[iz]),
                                ctx.add(by, ctx.mul(cy, z_m[iz])));
        u64 idx = jd_xy + jd_z[iz];
        if (idx >= n) idx -= n;
        acc.add(ep_at(arg) * chi_at(idx));
      }
    }
  }
  return acc.value() / static_cast<double>(u64(nd) * ne);
}

// Dense row-major weight tables for the trilinear sum: rho over F x G, sigma
// over F x H, tau over G x H.  Every entry must have modulus <= 1.
struct WeightTable {
  std::size_t nf = 0, ng = 0, nh = 0;
  std::vector<cdouble> rho, sigma, tau;

  static WeightTable filled(std::size_t nf, std::size_t ng, std::size_t nh,
                            cdouble value) {
    WeightTable w;
    w.nf = nf; w.ng = ng; w.nh = nh;
    w.rho.assign(nf * ng, value);
    w.sigma.assign(nf * nh, value);
    w.tau.assign(ng * nh, value);
    return w;
  }
  static WeightTable ones(std::size_t nf, std::size_t ng, std::size_t nh) {
    return filled(nf, ng, nh, {1.0, 0.0});
  }

  cdouble rho_at(std::size_t iu, std::size_t iv) const { return rho[iu * ng + iv]; }
  cdouble sigma_at(std::size_t iu, std::size_t iw) const { return sigma[iu * nh + iw]; }
  cdouble tau_at(std::size_t iv, std::size_t iw) const { return tau[iv * nh + iw]; }
};

// T = sum_{u in F} sum_{v in G} sum_{w in H} rho_{u,v} sigma_{u,w} tau_{v,w}
//     e_p(a*u*v*w), by direct triple loop.
inline cdouble eval_trilinear(const FieldContext& ctx, const Subgroup& f,
                              const Subgroup& g, const Subgroup& h, u64 a,
                              const WeightTable& w) {
  if (a % ctx.p() == 0) throw ZeroCoefficient("trilinear coefficient is 0");
  const u128 cells = u128(f.order) * g.order * h.order;
  if (cells > 1'000'000'000) throw TooLarge("trilinear loop above 1e9 cells");
  if (w.nf != f.elements.size() || w.ng != g.elements.size() ||
      w.nh != h.elements.size()) {
    throw FieldError("weight table dimensions do not match the subgroups");
  }
  for (const auto* tab : {&w.rho, &w.sigma, &w.tau}) {
    for (cdouble z : *tab) {
      if (std::abs(z) > 1.0 + 1e-9) throw FieldError("weight modulus exceeds 1");
    }
  }

  const u64 p = ctx.p();
  const bool tabled = p <= detail::kRootTableLimit;
  std::vector<cdouble> ep;
  if (tabled) ep = detail::unit_roots(p);

  detail::KahanSum acc;
  for (std::size_t iu = 0; iu < f.elements.size(); ++iu) {
    const u64 au = ctx.mul(a % p, f.elements[iu]);
    for (std::size_t iv = 0; iv < g.elements.size(); ++iv) {
      const u64 auv = ctx.mul(au, g.elements[iv]);
      const cdouble rho_uv = w.rho_at(iu, iv);
      for (std::size_t iw = 0; iw < h.elements.size(); ++iw) {
        const u64 arg = ctx.mul(auv, h.elements[iw]);
        const cdouble e = tabled ? ep[arg] : detail::unit(arg, p);
        acc.add(rho_uv * w.sigma_at(iu, iw) * w.tau_at(iv, iw) * e);
      }
    }
  }
  return acc.value();
}

}  // namespace fpsums
