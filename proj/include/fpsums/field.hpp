#pragma once
// Prime-field context: modular arithmetic, primitive roots, discrete logs,
// multiplicative subgroups.
//
// Residues are uint64_t values kept in canonical form [0, p).  The modulus is
// capped below 2^31 so every product fits an unsigned __int128 intermediate
// without overflow checks.  A FieldContext is immutable after construction and
// safe to share across threads; every operation is a pure function.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fpsums {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Precondition failures carry distinct types so callers (tests, the CLI exit
// code mapping) can tell them apart without string matching.
struct FieldError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CompositeModulus : FieldError { using FieldError::FieldError; };
struct EvenModulus : FieldError { using FieldError::FieldError; };
struct TooLarge : FieldError { using FieldError::FieldError; };
struct NotADivisor : FieldError { using FieldError::FieldError; };
struct ZeroArgument : FieldError { using FieldError::FieldError; };
struct ZeroDilation : FieldError { using FieldError::FieldError; };
struct NotATrinomial : FieldError { using FieldError::FieldError; };
struct ZeroCoefficient : FieldError { using FieldError::FieldError; };
struct EmptySet : FieldError { using FieldError::FieldError; };
struct ZeroScalar : FieldError { using FieldError::FieldError; };
struct BaseDivisibleByP : FieldError { using FieldError::FieldError; };
struct EmptyRatioSet : FieldError { using FieldError::FieldError; };

// The unique multiplicative subgroup of F_p^* of order d, d | p-1.
struct Subgroup {
  u64 order = 0;
  u64 generator = 1;           // primitive_root^((p-1)/order)
  std::vector<u64> elements;   // sorted ascending; always contains 1
};

class FieldContext {
 public:
  // Largest p for which the dense dlog table is built (8 bytes -> ~40 MB at
  // the cap with u32 entries).  Above it dlog falls back to baby-step
  // giant-step per query.
  static constexpr u64 kDlogTableLimit = 10'000'000;

  explicit FieldContext(u64 p) : p_(p) {
    if (p >= (u64{1} << 31)) throw TooLarge("modulus must be below 2^31");
    if (p == 2) throw EvenModulus("modulus 2 is excluded; need an odd prime");
    if (p < 2 || !is_prime(p)) {
      throw CompositeModulus("modulus " + std::to_string(p) + " is not prime");
    }
    factor_p1_ = factorize(p - 1);
    g0_ = find_primitive_root();
    if (p_ <= kDlogTableLimit) {
      dlog_.assign(p_, 0);
      u64 x = 1;
      for (u64 i = 0; i + 1 < p_; ++i) {
        dlog_[x] = static_cast<u32>(i);
        x = mul(x, g0_);
      }
    }
  }

  u64 p() const { return p_; }
  u64 primitive_root() const { return g0_; }
  bool has_dlog_table() const { return !dlog_.empty(); }

  // Prime factorization of p-1 as (prime, multiplicity), ascending.
  const std::vector<std::pair<u64, int>>& factor_p1() const { return factor_p1_; }

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;               // a,b < 2^31, no wrap
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(u128(a) * b % p_); }

  u64 pow(u64 base, u64 exp) const {
    u64 r = 1 % p_, b = base % p_;
    while (exp) {
      if (exp & 1) r = mul(r, b);
      b = mul(b, b);
      exp >>= 1;
    }
    return r;
  }

  u64 inv(u64 a) const {
    if (a % p_ == 0) throw ZeroArgument("inverse of zero");
    return pow(a, p_ - 2);
  }

  // Canonical residue of a signed value.
  u64 reduce_signed(i64 v) const {
    i64 r = v % static_cast<i64>(p_);
    if (r < 0) r += static_cast<i64>(p_);
    return static_cast<u64>(r);
  }

  // Index of x base primitive_root, in [0, p-2].  Dense table when present,
  // baby-step giant-step otherwise.
  u64 dlog(u64 x) const {
    if (x == 0) throw ZeroArgument("dlog of zero");
    assert(x < p_);
    if (!dlog_.empty()) return dlog_[x];
    return dlog_bsgs(x);
  }

  Subgroup subgroup(u64 d) const {
    if (d == 0 || (p_ - 1) % d != 0) {
      throw NotADivisor("subgroup order " + std::to_string(d) +
                        " does not divide p-1 = " + std::to_string(p_ - 1));
    }
    Subgroup s;
    s.order = d;
    s.generator = pow(g0_, (p_ - 1) / d);
    s.elements.reserve(d);
    u64 x = 1;
    for (u64 i = 0; i < d; ++i) {
      s.elements.push_back(x);
      x = mul(x, s.generator);
    }
    std::sort(s.elements.begin(), s.elements.end());
    return s;
  }

  // Smallest t >= 1 with g^t = 1: start from p-1 and strip prime factors.
  u64 multiplicative_order(u64 g) const {
    if (g % p_ == 0) throw ZeroArgument("order of zero");
    u64 t = p_ - 1;
    for (const auto& [q, e] : factor_p1_) {
      for (int i = 0; i < e && t % q == 0 && pow(g, t / q) == 1; ++i) t /= q;
    }
    return t;
  }

 private:
  static bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 i = 3; i * i <= n; i += 2) {
      if (n % i == 0) return false;
    }
    return true;
  }

  static std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> f;
    for (u64 q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
      if (n % q) continue;
      int e = 0;
      while (n % q == 0) { n /= q; ++e; }
      f.emplace_back(q, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
  }

  u64 find_primitive_root() const {
    for (u64 g = 2; g < p_; ++g) {
      bool ok = true;
      for (const auto& [q, e] : factor_p1_) {
        if (pow(g, (p_ - 1) / q) == 1) { ok = false; break; }
      }
      if (ok) return g;
    }
    return 1;  // p = 3 handled above; unreachable for prime p >= 3
  }

  u64 dlog_bsgs(u64 x) const {
    const u64 n = p_ - 1;
    u64 m = 1;
    while (m * m < n) ++m;
    std::unordered_map<u64, u64> baby;
    baby.reserve(m * 2);
    u64 cur = 1;
    for (u64 j = 0; j < m; ++j) {
      baby.emplace(cur, j);
      cur = mul(cur, g0_);
    }
    const u64 step = pow(g0_, n - m % n);  // g0^{-m}
    u64 gamma = x;
    for (u64 i = 0; i <= m; ++i) {
      auto it = baby.find(gamma);
      if (it != baby.end()) return (i * m + it->second) % n;
      gamma = mul(gamma, step);
    }
    throw std::logic_error("dlog: no index found for a unit element");
  }

  u64 p_ = 0;
  u64 g0_ = 0;
  std::vector<std::pair<u64, int>> factor_p1_;
  std::vector<u32> dlog_;
};

inline FieldContext make_field(u64 p) { return FieldContext(p); }

// Elementwise u -> u + lambda mod p.  Output sorted ascending.
inline std::vector<u64> translate_set(const FieldContext& ctx,
                                      const std::vector<u64>& set, u64 lambda) {
  std::vector<u64> out;
  out.reserve(set.size());
  for (u64 u : set) out.push_back(ctx.add(u % ctx.p(), lambda % ctx.p()));
  std::sort(out.begin(), out.end());
  return out;
}

// Elementwise u -> lambda*u mod p, lambda != 0.  Output sorted ascending.
inline std::vector<u64> dilate_set(const FieldContext& ctx,
                                   const std::vector<u64>& set, u64 lambda) {
  if (lambda % ctx.p() == 0) throw ZeroDilation("dilation by zero");
  std::vector<u64> out;
  out.reserve(set.size());
  for (u64 u : set) out.push_back(ctx.mul(u % ctx.p(), lambda % ctx.p()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fpsums
