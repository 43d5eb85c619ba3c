#pragma once

#include <map>
#include <set>
#include <vector>

#include "k3kit/exactmath/matrix.hpp"
#include "k3kit/exactmath/rational.hpp"
#include "k3kit/lattice/lattice.hpp"

namespace k3kit {

namespace detail {

// One nontrivial factor of an odd composite n, by Pollard rho with Floyd
// cycling. The polynomial offset is bumped whenever a cycle closes without
// producing a proper divisor.
inline BigInt rho_split(const BigInt& n) {
  for (BigInt c = 1;; ++c) {
    BigInt x = 2, y = 2, d = 1;
    auto f = [&](const BigInt& v) -> BigInt { return (v * v + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(BigInt(x - y), n);
    }
    if (d != n) return d;
  }
}

inline void factor_into(const BigInt& n, std::map<BigInt, long>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
    ++out[n];
    return;
  }
  BigInt d = rho_split(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

}  // namespace detail

// Prime factorization of |n|, as prime -> exponent. Small primes by trial
// division, the rest split by rho with a Miller-Rabin certificate per factor.
inline std::map<BigInt, long> factor_z(const BigInt& n0) {
  if (sgn(n0) == 0) throw k3_error("factor_z: factoring zero");
  BigInt n = abs(n0);
  std::map<BigInt, long> out;
  for (BigInt d = 2; d < 10000 && d * d <= n; d += (d == 2 ? 1 : 2))
    while (sgn(n % d) == 0) {
      ++out[d];
      n /= d;
    }
  if (n > 1) detail::factor_into(n, out);
  return out;
}

// Squarefree representative of the square class of q in Q^* / (Q^*)^2,
// with the sign of q.
inline BigInt square_class(const BigRat& q) {
  if (sgn(q) == 0) throw k3_error("square_class: zero");
  BigInt m = numer(q) * denom(q);
  BigInt out = sgn(m) < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_z(m))
    if (e % 2) out *= p;
  return out;
}

namespace detail {

// Legendre symbol of a p-adic unit u at an odd prime, via the reduction
// u = numer/denom mod p and multiplicativity across the fraction bar.
inline int legendre_unit(const BigRat& u, const BigInt& p) {
  int s = mpz_legendre(numer(u).get_mpz_t(), p.get_mpz_t()) *
          mpz_legendre(denom(u).get_mpz_t(), p.get_mpz_t());
  if (s == 0) throw k3_error("legendre_unit: argument not a unit");
  return s;
}

// Residue of a 2-adic unit n/d mod 8; d^{-1} = d mod 8 for odd d.
inline long unit_mod8(const BigRat& u) {
  BigInt m = (numer(u) * denom(u)) % 8;
  if (sgn(m) < 0) m += 8;
  return m.get_si();
}

inline BigRat strip_p(const BigRat& a, const BigInt& p, long v) {
  if (v >= 0) return a / BigRat(int_pow(p, static_cast<unsigned long>(v)));
  return a * BigRat(int_pow(p, static_cast<unsigned long>(-v)));
}

}  // namespace detail

// Hilbert symbol (a, b)_p for nonzero rationals. The place is a prime, or 0
// for the real place, where the symbol is -1 exactly when both arguments are
// negative.
inline int hilbert_symbol(const BigRat& a, const BigRat& b, const BigInt& p) {
  if (sgn(a) == 0 || sgn(b) == 0) throw k3_error("hilbert_symbol: zero argument");
  if (sgn(p) == 0) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  if (mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
    throw k3_error("hilbert_symbol: place is neither 0 nor a prime");
  long alpha = vp(a, p), beta = vp(b, p);
  BigRat u = detail::strip_p(a, p, alpha), w = detail::strip_p(b, p, beta);
  if (p == 2) {
    long um = detail::unit_mod8(u), wm = detail::unit_mod8(w);
    long eps_u = (um % 4 == 3) ? 1 : 0, eps_w = (wm % 4 == 3) ? 1 : 0;
    long om_u = (um == 3 || um == 5) ? 1 : 0, om_w = (wm == 3 || wm == 5) ? 1 : 0;
    long e = eps_u * eps_w + alpha * om_w + beta * om_u;
    return (e % 2) ? -1 : 1;
  }
  long eps_p = ((p - 1) / 2 % 2 == 0) ? 0 : 1;
  int s = ((alpha * beta * eps_p) % 2) ? -1 : 1;
  if (beta % 2) s *= detail::legendre_unit(u, p);
  if (alpha % 2) s *= detail::legendre_unit(w, p);
  return s;
}

namespace detail {

inline int hasse_from_diag(const std::vector<BigRat>& d, const BigInt& p) {
  int s = 1;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) s *= hilbert_symbol(d[i], d[j], p);
  return s;
}

}  // namespace detail

// Hasse-Witt invariant of the quadratic form of L over Q_p: the product of
// Hilbert symbols (d_i, d_j)_p over i < j for any rational diagonalization.
inline int hasse_invariant(const Lattice& L, const BigInt& p) {
  if (!nondegenerate(L)) throw k3_error("hasse_invariant: degenerate form");
  DiagonalizeResult d = diagonalize_symmetric(RatMatrix::from_int(L.gram));
  return detail::hasse_from_diag(d.diag, p);
}

// Isometry of the quadratic spaces A (x) Q and B (x) Q, decided by the full
// invariant set: rank, signature, discriminant square class, and the Hasse
// invariant at 2 and at each odd prime where either form can ramify (the
// symbols agree for free at every other place, the real one included since
// the signatures match).
inline bool rationally_isometric(const Lattice& A, const Lattice& B) {
  if (!nondegenerate(A) || !nondegenerate(B))
    throw k3_error("rationally_isometric: degenerate form");
  if (A.rank != B.rank) return false;
  if (A.sig_pos != B.sig_pos || A.sig_neg != B.sig_neg) return false;
  if (square_class(BigRat(A.disc)) != square_class(BigRat(B.disc))) return false;
  std::set<BigInt> places = {2};
  auto diag_of = [&places](const Lattice& L) {
    DiagonalizeResult d = diagonalize_symmetric(RatMatrix::from_int(L.gram));
    for (const BigRat& c : d.diag)
      for (const auto& [p, e] : factor_z(BigInt(numer(c) * denom(c))))
        if (p != 2 && e % 2) places.insert(p);
    return d.diag;
  };
  std::vector<BigRat> da = diag_of(A), db = diag_of(B);
  for (const BigInt& p : places)
    if (detail::hasse_from_diag(da, p) != detail::hasse_from_diag(db, p)) return false;
  return true;
}

}  // namespace k3kit
