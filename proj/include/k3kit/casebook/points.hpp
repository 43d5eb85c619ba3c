#pragma once

#include <vector>

#include "k3kit/casebook/weierstrass.hpp"

namespace k3kit {

// A point on a Weierstrass model with coordinates in the coefficient field.
// infinity = true is the zero of the group law; x, y are then ignored.
struct CurvePoint {
  bool infinity = true;
  MultiRat x, y;

  static CurvePoint zero(int nvars) {
    CurvePoint p;
    p.infinity = true;
    p.x = MultiRat::constant(nvars, BigRat(0));
    p.y = p.x;
    return p;
  }
  static CurvePoint affine(MultiRat x, MultiRat y) {
    CurvePoint p;
    p.infinity = false;
    p.x = std::move(x);
    p.y = std::move(y);
    return p;
  }
};

inline bool point_eq(const CurvePoint& p, const CurvePoint& q) {
  if (p.infinity || q.infinity) return p.infinity == q.infinity;
  return p.x == q.x && p.y == q.y;
}

inline bool is_on_curve(const WeierstrassModel& m, const CurvePoint& p) {
  if (p.infinity) return true;
  MultiRat lhs = p.y * p.y + m.a1 * p.x * p.y + m.a3 * p.y;
  MultiRat rhs = p.x * p.x * p.x + m.a2 * p.x * p.x + m.a4 * p.x + m.a6;
  return (lhs - rhs).is_zero();
}

inline CurvePoint ec_neg(const WeierstrassModel& m, const CurvePoint& p) {
  if (p.infinity) return p;
  return CurvePoint::affine(p.x, -p.y - m.a1 * p.x - m.a3);
}

// Chord-tangent addition with the full a1..a6 formulas. Both inputs must lie
// on the curve; the precondition is checked so a bad caller fails loudly
// instead of producing an off-curve "sum".
inline CurvePoint ec_add(const WeierstrassModel& m, const CurvePoint& p,
                         const CurvePoint& q) {
  if (!is_on_curve(m, p) || !is_on_curve(m, q))
    throw k3_error("ec_add: point not on curve");
  if (p.infinity) return q;
  if (q.infinity) return p;
  MultiRat lambda, nu;
  if (p.x == q.x) {
    // Same x: either inverse points or a doubling.
    if (q.y == (-p.y - m.a1 * p.x - m.a3))
      return CurvePoint::zero(static_cast<int>(m.names.size()));
    MultiRat den = BigRat(2) * p.y + m.a1 * p.x + m.a3;
    lambda = (BigRat(3) * p.x * p.x + BigRat(2) * m.a2 * p.x + m.a4 -
              m.a1 * p.y) /
             den;
    nu = (-(p.x * p.x * p.x) + m.a4 * p.x + BigRat(2) * m.a6 - m.a3 * p.y) /
         den;
  } else {
    lambda = (q.y - p.y) / (q.x - p.x);
    nu = p.y - lambda * p.x;
  }
  MultiRat x3 = lambda * lambda + m.a1 * lambda - m.a2 - p.x - q.x;
  MultiRat y3 = -(lambda + m.a1) * x3 - nu - m.a3;
  return CurvePoint::affine(x3, y3);
}

// n P by double-and-add; negative n negates first.
inline CurvePoint ec_mul(const WeierstrassModel& m, long n,
                         const CurvePoint& p) {
  CurvePoint base = p;
  if (n < 0) {
    base = ec_neg(m, p);
    n = -n;
  }
  CurvePoint acc = CurvePoint::zero(static_cast<int>(m.names.size()));
  while (n > 0) {
    if (n & 1) acc = ec_add(m, acc, base);
    n >>= 1;
    if (n > 0) base = ec_add(m, base, base);
  }
  return acc;
}

} // namespace k3kit
