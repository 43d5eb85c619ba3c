#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace k3kit {

using BigInt = mpz_class;
using BigRat = mpq_class;

struct k3_error : std::runtime_error {
  explicit k3_error(const std::string& what) : std::runtime_error(what) {}
};

inline BigInt numer(const BigRat& q) { return q.get_num(); }
inline BigInt denom(const BigRat& q) { return q.get_den(); }

inline int sgn(const BigRat& q) { return mpq_sgn(q.get_mpq_t()); }
inline int sgn(const BigInt& z) { return mpz_sgn(z.get_mpz_t()); }

inline BigInt int_pow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

// b^e for possibly negative e; throws on 0^negative.
inline BigRat rat_pow(const BigRat& b, long e) {
  if (e == 0) return BigRat(1);
  if (b == 0 && e < 0) throw k3_error("rat_pow: zero to negative power");
  BigRat base = e > 0 ? b : BigRat(1) / b;
  unsigned long k = e > 0 ? static_cast<unsigned long>(e)
                          : static_cast<unsigned long>(-e);
  BigRat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
  r.canonicalize();
  return r;
}

inline bool is_perfect_square(const BigInt& z) {
  return sgn(z) >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

inline BigInt isqrt_exact(const BigInt& z) {
  if (!is_perfect_square(z)) throw k3_error("isqrt_exact: not a square");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

// Square class test in Q*: q a nonzero square iff num and den are both squares
// (q canonical).
inline bool is_rat_square(const BigRat& q) {
  return sgn(q) >= 0 && is_perfect_square(numer(q)) && is_perfect_square(denom(q));
}

inline long vp(BigInt z, const BigInt& p) {
  if (sgn(z) == 0) throw k3_error("vp: valuation of zero");
  long v = 0;
  BigInt q, r;
  for (;;) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t());
    if (sgn(r) != 0) return v;
    z = q;
    ++v;
  }
}

inline long vp(const BigRat& q, const BigInt& p) {
  return vp(numer(q), p) - vp(denom(q), p);
}

// Representative of c mod m in (-m/2, m/2].
inline BigInt sym_mod(const BigInt& c, const BigInt& m) {
  BigInt r = c % m;
  if (sgn(r) < 0) r += m;
  if (2 * r > m) r -= m;
  return r;
}

inline std::string to_string(const BigRat& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline BigRat parse_rat(const std::string& s) {
  BigRat q;
  if (q.set_str(s, 10) != 0) throw k3_error("parse_rat: bad literal '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace k3kit
