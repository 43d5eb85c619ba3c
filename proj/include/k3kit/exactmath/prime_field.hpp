#pragma once

#include <cstdint>
#include <vector>

#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

// F_p with a runtime modulus. Elements are uint64_t in [0, p); products go
// through unsigned __int128 so any prime below 2^63 is safe.
class Fp {
 public:
  explicit Fp(uint64_t p) : p_(p) {
    if (p < 2) throw k3_error("Fp: modulus must be >= 2");
    BigInt z(static_cast<unsigned long>(p));
    if (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
      throw k3_error("Fp: modulus is not prime");
  }

  uint64_t modulus() const { return p_; }

  uint64_t reduce(long long x) const {
    long long r = x % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return static_cast<uint64_t>(r);
  }

  uint64_t reduce(const BigInt& z) const {
    BigInt r = z % BigInt(static_cast<unsigned long>(p_));
    if (sgn(r) < 0) r += BigInt(static_cast<unsigned long>(p_));
    return r.get_ui();
  }

  // num * den^{-1}; throws when p divides the denominator.
  uint64_t reduce(const BigRat& q) const {
    uint64_t d = reduce(denom(q));
    if (d == 0) throw k3_error("Fp::reduce: denominator divisible by p");
    return mul(reduce(numer(q)), inv(d));
  }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    if (s >= p_) s -= p_;
    return s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }

  uint64_t pow(uint64_t a, uint64_t e) const {
    uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  uint64_t inv(uint64_t a) const {
    if (a == 0) throw k3_error("Fp::inv: zero");
    return pow(a, p_ - 2);  // p prime
  }

  uint64_t div(uint64_t a, uint64_t b) const { return mul(a, inv(b)); }

  // Legendre symbol (a/p) as -1, 0, 1. Requires odd p.
  int legendre(uint64_t a) const {
    if (p_ == 2) throw k3_error("Fp::legendre: p = 2");
    if (a == 0) return 0;
    uint64_t t = pow(a, (p_ - 1) / 2);
    return t == 1 ? 1 : -1;
  }

  bool is_square(uint64_t a) const { return a == 0 || p_ == 2 || legendre(a) == 1; }

  // Tonelli-Shanks; requires is_square(a).
  uint64_t sqrt(uint64_t a) const {
    if (a == 0) return 0;
    if (p_ == 2) return a;
    if (p_ % 4 == 3) return pow(a, (p_ + 1) / 4);
    uint64_t q = p_ - 1, s = 0;
    while (q % 2 == 0) q /= 2, ++s;
    uint64_t z = 2;
    while (legendre(z) != -1) ++z;
    uint64_t m = s, c = pow(z, q), t = pow(a, q), r = pow(a, (q + 1) / 2);
    while (t != 1) {
      uint64_t i = 0, tt = t;
      while (tt != 1) tt = mul(tt, tt), ++i;
      uint64_t b = c;
      for (uint64_t j = 0; j + i + 1 < m; ++j) b = mul(b, b);
      m = i;
      c = mul(b, b);
      t = mul(t, c);
      r = mul(r, b);
    }
    return r;
  }

 private:
  uint64_t p_;
};

}  // namespace k3kit
