#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3kit/exactmath/multipoly.hpp"

namespace k3kit {

// A Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with
// coefficients in Q(v_0, ..., v_{n-1}). fiber_var picks the variable playing
// the role of the base coordinate of an elliptic fibration (-1 when the model
// is a single curve over the full rational function field, e.g. a generic
// member with no distinguished parameter). The b/c invariants and the
// discriminant are derived once in the constructor, which also insists the
// model is nonsingular and that the syzygy c4^3 - c6^2 = 1728 disc holds as
// computed; the latter is an internal arithmetic check, not a mathematical
// hypothesis.
struct WeierstrassModel {
  std::vector<std::string> names;
  int fiber_var = -1;
  MultiRat a1, a2, a3, a4, a6;
  MultiRat b2, b4, b6, b8, c4, c6, disc;

  WeierstrassModel(std::vector<std::string> names_, int fiber_var_,
                   MultiRat a1_, MultiRat a2_, MultiRat a3_, MultiRat a4_,
                   MultiRat a6_)
      : names(std::move(names_)), fiber_var(fiber_var_), a1(std::move(a1_)),
        a2(std::move(a2_)), a3(std::move(a3_)), a4(std::move(a4_)),
        a6(std::move(a6_)) {
    const int nv = static_cast<int>(names.size());
    for (const MultiRat* c : {&a1, &a2, &a3, &a4, &a6})
      if (c->nvars() != nv)
        throw k3_error("WeierstrassModel: coefficient ring mismatch");
    if (fiber_var < -1 || fiber_var >= nv)
      throw k3_error("WeierstrassModel: fiber variable out of range");
    b2 = a1 * a1 + BigRat(4) * a2;
    b4 = BigRat(2) * a4 + a1 * a3;
    b6 = a3 * a3 + BigRat(4) * a6;
    b8 = a1 * a1 * a6 + BigRat(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 -
         a4 * a4;
    c4 = b2 * b2 - BigRat(24) * b4;
    c6 = -(b2 * b2 * b2) + BigRat(36) * b2 * b4 - BigRat(216) * b6;
    disc = -(b2 * b2) * b8 - BigRat(8) * (b4 * b4 * b4) -
           BigRat(27) * (b6 * b6) + BigRat(9) * b2 * b4 * b6;
    if (disc.is_zero())
      throw k3_error("WeierstrassModel: singular model (disc = 0)");
    if (!(c4 * c4 * c4 - c6 * c6 == BigRat(1728) * disc))
      throw k3_error("WeierstrassModel: c4^3 - c6^2 != 1728 disc");
  }

  MultiRat j() const { return c4 * c4 * c4 / disc; }

  bool short_odd() const { return a1.is_zero() && a3.is_zero(); }
};

// Short-form constructor y^2 = x^3 + a2 x^2 + a4 x + a6.
inline WeierstrassModel short_model(std::vector<std::string> names,
                                    int fiber_var, MultiRat a2, MultiRat a4,
                                    MultiRat a6) {
  const int nv = static_cast<int>(names.size());
  MultiRat zero = MultiRat::constant(nv, BigRat(0));
  return WeierstrassModel(std::move(names), fiber_var, zero, std::move(a2),
                          zero, std::move(a4), std::move(a6));
}

// Apply a coefficient substitution to every a-invariant, landing in a new
// ring. img[i] is the image of variable i as an element of the target ring.
inline WeierstrassModel substitute_model(const WeierstrassModel& m,
                                         const std::vector<MultiRat>& img,
                                         std::vector<std::string> out_names,
                                         int out_fiber) {
  const int nv = static_cast<int>(out_names.size());
  return WeierstrassModel(std::move(out_names), out_fiber,
                          substitute(m.a1, img, nv), substitute(m.a2, img, nv),
                          substitute(m.a3, img, nv), substitute(m.a4, img, nv),
                          substitute(m.a6, img, nv));
}

// The change of variables (x, y) -> (x/u^2, y/u^3): a_i picks up u^i. Used to
// clear denominators after a base change; u must be a nonzero element of the
// coefficient field.
inline WeierstrassModel rescale_model(const WeierstrassModel& m,
                                      const MultiRat& u) {
  if (u.is_zero()) throw k3_error("rescale_model: zero scale");
  MultiRat u2 = u * u;
  MultiRat u3 = u2 * u;
  MultiRat u4 = u2 * u2;
  MultiRat u6 = u3 * u3;
  return WeierstrassModel(m.names, m.fiber_var, m.a1 * u, m.a2 * u2, m.a3 * u3,
                          m.a4 * u4, m.a6 * u6);
}

// For a short-odd model, the rescale (X, Y) -> (l2 X, l3 Y) with l3^2 = l2^3
// divides a2 by l2, a4 by l2^2, a6 by l2^3. Only l2 is needed, so the scale
// can be a non-square (it encodes a twist combined with a square rescale).
inline WeierstrassModel apply_rescale(const WeierstrassModel& m,
                                      const MultiRat& l2) {
  if (!m.short_odd()) throw k3_error("apply_rescale: model not short-odd");
  if (l2.is_zero()) throw k3_error("apply_rescale: zero scale");
  return short_model(m.names, m.fiber_var, m.a2 / l2, m.a4 / (l2 * l2),
                     m.a6 / (l2 * l2 * l2));
}

// Find l2 with apply_rescale(m, l2) == target, if one exists. Both models
// must be short-odd in the same ring. The candidate is pinned down by the
// first usable coefficient ratio and then every coefficient is re-checked
// exactly, so a successful return is a proof.
inline std::optional<MultiRat> find_rescale(const WeierstrassModel& m,
                                            const WeierstrassModel& target) {
  if (!m.short_odd() || !target.short_odd())
    throw k3_error("find_rescale: models not short-odd");
  if (m.names.size() != target.names.size())
    throw k3_error("find_rescale: coefficient ring mismatch");
  // Zero patterns must agree slot by slot.
  if (m.a2.is_zero() != target.a2.is_zero() ||
      m.a4.is_zero() != target.a4.is_zero() ||
      m.a6.is_zero() != target.a6.is_zero())
    return std::nullopt;
  MultiRat l2 = MultiRat::constant(static_cast<int>(m.names.size()), BigRat(1));
  if (!m.a2.is_zero()) {
    l2 = m.a2 / target.a2;
  } else if (!m.a4.is_zero() && !m.a6.is_zero()) {
    // l2^2 and l2^3 are known, so l2 is their ratio.
    l2 = (m.a6 / target.a6) / (m.a4 / target.a4);
  } else {
    // A single nonzero slot of weight 2 or 3 would need an exact root;
    // no chain in this library produces that shape.
    throw k3_error("find_rescale: unsupported coefficient pattern");
  }
  WeierstrassModel scaled = apply_rescale(m, l2);
  if (scaled.a2 == target.a2 && scaled.a4 == target.a4 &&
      scaled.a6 == target.a6)
    return l2;
  return std::nullopt;
}

// Quadratic twist by d of a short-odd model: y^2 = x^3 + d a2 x^2 + d^2 a4 x
// + d^3 a6. j is preserved; disc changes by d^6.
inline WeierstrassModel quadratic_twist(const WeierstrassModel& m,
                                        const MultiRat& d) {
  if (!m.short_odd()) throw k3_error("quadratic_twist: model not short-odd");
  if (d.is_zero()) throw k3_error("quadratic_twist: twist by zero");
  return short_model(m.names, m.fiber_var, d * m.a2, d * d * m.a4,
                     d * d * d * m.a6);
}

inline WeierstrassModel quadratic_twist(const WeierstrassModel& m, long d) {
  return quadratic_twist(
      m, MultiRat::constant(static_cast<int>(m.names.size()), BigRat(d)));
}

// Exact polynomial square root. Recurses on the leading coefficient in the
// first variable of positive degree and then peels leading terms of the
// remainder; returns nullopt when f is not a perfect square. Termination:
// each round strictly lowers the top degree of p - h^2 in the chosen
// variable.
inline std::optional<MultiPoly> mp_sqrt(const MultiPoly& p) {
  if (p.is_zero()) return MultiPoly::constant(p.nvars, BigRat(0));
  if (p.is_constant()) {
    BigRat c = p.constant_value();
    if (!is_rat_square(c)) return std::nullopt;
    BigInt sn = isqrt_exact(numer(c));
    BigInt sd = isqrt_exact(denom(c));
    return MultiPoly::constant(p.nvars, BigRat(sn) / BigRat(sd));
  }
  int v = -1;
  for (int i = 0; i < p.nvars; ++i)
    if (p.degree_in(i) > 0) {
      v = i;
      break;
    }
  long n = p.degree_in(v);
  if (n % 2 != 0) return std::nullopt;
  auto lead_root = mp_sqrt(coeff_in(p, v, n));
  if (!lead_root) return std::nullopt;
  MultiPoly two_lead = BigRat(2) * *lead_root;
  MultiPoly h = *lead_root * MultiPoly::var(p.nvars, v,
                                            static_cast<unsigned>(n / 2));
  MultiPoly rem = p - h * h;
  while (!rem.is_zero()) {
    long d = rem.degree_in(v);
    if (d < n / 2) return std::nullopt;
    auto q = mp_divexact(coeff_in(rem, v, d), two_lead);
    if (!q) return std::nullopt;
    h = h + *q * MultiPoly::var(p.nvars, v, static_cast<unsigned>(d - n / 2));
    rem = p - h * h;
  }
  return h;
}

// Square root of a rational function; both halves of the canonical form must
// be squares (the representative is num/den coprime with normalized den, so
// squareness of f forces squareness of each half up to rational content,
// which mp_sqrt absorbs).
inline std::optional<MultiRat> mr_sqrt(const MultiRat& f) {
  auto sn = mp_sqrt(f.num);
  if (!sn) return std::nullopt;
  auto sd = mp_sqrt(f.den);
  if (!sd) return std::nullopt;
  return MultiRat(*sn, *sd);
}

// A genus-one quartic y^2 = a s^4 + b s^3 + c s^2 + d s + e over the
// coefficient field, with s the variable at index var. The right-hand side
// must be squarefree in s (after clearing denominators) and the coefficients
// must not involve s.
struct GenusOneQuartic {
  std::vector<std::string> names;
  int var = 0;
  MultiRat a, b, c, d, e;

  GenusOneQuartic(std::vector<std::string> names_, int var_, MultiRat a_,
                  MultiRat b_, MultiRat c_, MultiRat d_, MultiRat e_)
      : names(std::move(names_)), var(var_), a(std::move(a_)),
        b(std::move(b_)), c(std::move(c_)), d(std::move(d_)),
        e(std::move(e_)) {
    const int nv = static_cast<int>(names.size());
    if (var < 0 || var >= nv)
      throw k3_error("GenusOneQuartic: variable out of range");
    for (const MultiRat* f : {&a, &b, &c, &d, &e}) {
      if (f->nvars() != nv)
        throw k3_error("GenusOneQuartic: coefficient ring mismatch");
      if (f->num.degree_in(var) > 0 || f->den.degree_in(var) > 0)
        throw k3_error("GenusOneQuartic: coefficient involves the variable");
    }
    MultiRat q = rhs();
    if (q.is_zero()) throw k3_error("GenusOneQuartic: zero right-hand side");
    // Squarefreeness in s of the cleared numerator. Content in the remaining
    // parameters is irrelevant: only the s-degree of the gcd matters.
    MultiPoly num = q.num;
    MultiPoly g = mp_gcd(num, derivative(num, var));
    if (g.degree_in(var) > 0)
      throw k3_error("GenusOneQuartic: repeated root in the quartic");
  }

  MultiRat rhs() const {
    const int nv = static_cast<int>(names.size());
    MultiRat s = MultiRat::var(nv, var);
    return ((((a * s) + b) * s + c) * s + d) * s + e;
  }
};

// Jacobian of a genus-one quartic, as a Weierstrass model over the same
// coefficient ring. Generic case: the classical binary-quartic invariants
//   I = 12ae - 3bd + c^2,
//   J = 72ace - 27ad^2 - 27b^2 e + 9bcd - 2c^3
// give Y^2 = X^3 - 27 I X - 27 J. When a = 0 the quartic is already a cubic
// and multiplying by b^2 completes it directly: X = bs, Y = by turns
// y^2 = bs^3 + cs^2 + ds + e into Y^2 = X^3 + c X^2 + bd X + b^2 e, which is
// the Jacobian on the nose (the map is defined over the base). A quartic
// with a = b = 0 is degenerate (degree <= 2) and rejected.
inline WeierstrassModel jacobian_of_quartic(const GenusOneQuartic& q,
                                            int out_fiber = -1) {
  if (q.a.is_zero()) {
    if (q.b.is_zero())
      throw k3_error("jacobian_of_quartic: degenerate quartic (deg <= 2)");
    return short_model(q.names, out_fiber, q.c, q.b * q.d, q.b * q.b * q.e);
  }
  MultiRat I = BigRat(12) * q.a * q.e - BigRat(3) * q.b * q.d + q.c * q.c;
  MultiRat J = BigRat(72) * q.a * q.c * q.e - BigRat(27) * q.a * q.d * q.d -
               BigRat(27) * q.b * q.b * q.e + BigRat(9) * q.b * q.c * q.d -
               BigRat(2) * q.c * q.c * q.c;
  const int nv = static_cast<int>(q.names.size());
  MultiRat zero = MultiRat::constant(nv, BigRat(0));
  return short_model(q.names, out_fiber, zero, BigRat(-27) * I,
                     BigRat(-27) * J);
}

} // namespace k3kit
