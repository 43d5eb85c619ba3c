#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3kit/casebook/points.hpp"
#include "k3kit/casebook/weierstrass.hpp"

namespace k3kit {

// The five explicit extremal rational elliptic surfaces used by the case
// chains, each as a Weierstrass model over Q(t) with fiber variable t.
//   legendre  y^2 = x(x-1)(x-t)                      I2* I2 I2   at oo,0,1
//   II*       y^2 = x^3 - 3x - 2(2t-1)               II* I1 I1   at oo,0,1
//   III*      y^2 = x(x^2 - 2x + t)                  III* I2 I1  at oo,0,1
//   IV*       y^2 = x^3 + 9x^2 + 24tx + 16t^2        IV* I3 I1   at oo,0,1
//   I5I5      y^2 = x^3 + (t^2+1)x^2
//                   - 4t(t^2+t-1)x + 4t^2(t^2+1)     I5 I5 I1 I1 at 0,oo,...
inline WeierstrassModel extremal_model(const std::string& name) {
  std::vector<std::string> names{"t"};
  MultiRat t = MultiRat::var(1, 0);
  MultiRat one = MultiRat::constant(1, BigRat(1));
  MultiRat zero = MultiRat::constant(1, BigRat(0));
  if (name == "legendre")
    return short_model(names, 0, -(one + t), t, zero);
  if (name == "II*" || name == "IIstar")
    return short_model(names, 0, zero, MultiRat::constant(1, BigRat(-3)),
                       BigRat(-2) * (BigRat(2) * t - one));
  if (name == "III*" || name == "IIIstar")
    return short_model(names, 0, MultiRat::constant(1, BigRat(-2)), t, zero);
  if (name == "IV*" || name == "IVstar")
    return short_model(names, 0, MultiRat::constant(1, BigRat(9)),
                       BigRat(24) * t, BigRat(16) * t * t);
  if (name == "I5I5")
    return short_model(names, 0, t * t + one,
                       BigRat(-4) * t * (t * t + t - one),
                       BigRat(4) * t * t * (t * t + one));
  throw k3_error("extremal_model: unknown model name '" + name + "'");
}

// A hypersurface model: one polynomial with a declared degree in each
// variable (-1 leaves a variable unconstrained, used for parameters) and
// optional quasi-homogeneity witnesses. Every declared fact is checked at
// construction, so carrying a SurfaceModel around certifies its shape.
struct SurfaceModel {
  std::vector<std::string> names;
  MultiPoly poly;
  std::vector<long> degrees;
  std::vector<std::vector<long>> weight_rows;

  SurfaceModel(std::vector<std::string> names_, MultiPoly poly_,
               std::vector<long> degrees_,
               std::vector<std::vector<long>> weight_rows_ = {})
      : names(std::move(names_)), poly(std::move(poly_)),
        degrees(std::move(degrees_)), weight_rows(std::move(weight_rows_)) {
    const int nv = static_cast<int>(names.size());
    if (poly.nvars != nv || static_cast<int>(degrees.size()) != nv)
      throw k3_error("SurfaceModel: ring/degree shape mismatch");
    if (poly.is_zero()) throw k3_error("SurfaceModel: zero polynomial");
    for (int v = 0; v < nv; ++v)
      if (degrees[v] >= 0 && poly.degree_in(v) != degrees[v])
        throw k3_error("SurfaceModel: declared degree mismatch in " +
                       names[v]);
    for (const auto& row : weight_rows) {
      if (static_cast<int>(row.size()) != nv)
        throw k3_error("SurfaceModel: weight row shape mismatch");
      bool first = true;
      long w0 = 0;
      for (const auto& [mono, coef] : poly.terms) {
        (void)coef;
        long w = 0;
        for (int v = 0; v < nv; ++v) w += row[v] * static_cast<long>(mono[v]);
        if (first) {
          w0 = w;
          first = false;
        } else if (w != w0) {
          throw k3_error("SurfaceModel: not quasi-homogeneous for a "
                         "declared weight row");
        }
      }
    }
  }
};

namespace detail {

// Re-embed a coefficient from the parameter ring into a larger ring whose
// first `shift` variables are new geometric coordinates.
inline MultiRat lift_params(const MultiRat& f, int shift, int out_nv) {
  std::vector<MultiRat> img;
  img.reserve(static_cast<size_t>(f.nvars()));
  for (int i = 0; i < f.nvars(); ++i)
    img.push_back(MultiRat::var(out_nv, shift + i));
  return substitute(f, img, out_nv);
}

// Convert a rational expression whose denominator is a nonzero constant
// into a plain polynomial.
inline MultiPoly as_poly(const MultiRat& f, const char* where) {
  if (!f.den.is_constant())
    throw k3_error(std::string(where) + ": coefficients must be polynomial");
  return f.num / f.den.constant_value();
}

} // namespace detail

// The two models attached to a product of two curves in short Weierstrass
// form y^2 = x^3 + a2 x^2 + a4 x + a6 (first factor, coordinate z) and
// y^2 = x^3 + a2' x^2 + a4' x + a6' (second factor, coordinate x):
//   pencil       (z^3 + a2 z^2 + a4 z + a6) t^2 = x^3 + a2' x^2 + a4' x + a6'
// cubic in x and z, quadratic in the pencil parameter t = y'/y. When both
// inputs are Legendre curves y^2 = x(x-1)(x-tau) the double Legendre form
//   legendre222  y^2 = w(w-1)(w-tau2) u(u-1)(u-tau1)
// is attached as well (tau_i read off the inputs).
struct KummerProductModels {
  SurfaceModel pencil;
  std::optional<SurfaceModel> legendre222;
};

inline KummerProductModels kummer_product_models(const WeierstrassModel& E1,
                                                 const WeierstrassModel& E2) {
  if (!E1.short_odd() || !E2.short_odd())
    throw k3_error("kummer_product_models: inputs must be short-odd");
  if (E1.names.size() != E2.names.size())
    throw k3_error("kummer_product_models: parameter ring mismatch");
  const int np = static_cast<int>(E1.names.size());
  const int nv = 3 + np;
  std::vector<std::string> names{"x", "z", "t"};
  names.insert(names.end(), E1.names.begin(), E1.names.end());

  using detail::as_poly;
  using detail::lift_params;
  MultiRat x = MultiRat::var(nv, 0);
  MultiRat z = MultiRat::var(nv, 1);
  MultiRat t = MultiRat::var(nv, 2);
  MultiRat cz = ((z + lift_params(E1.a2, 3, nv)) * z + lift_params(E1.a4, 3, nv)) * z +
                lift_params(E1.a6, 3, nv);
  MultiRat cx = ((x + lift_params(E2.a2, 3, nv)) * x + lift_params(E2.a4, 3, nv)) * x +
                lift_params(E2.a6, 3, nv);
  MultiRat pencil_expr = cz * t * t - cx;
  std::vector<long> degs(static_cast<size_t>(nv), -1);
  degs[0] = 3;
  degs[1] = 3;
  degs[2] = 2;
  SurfaceModel pencil(names, as_poly(pencil_expr, "kummer_product_models"),
                      degs);

  auto legendre_param = [](const WeierstrassModel& E) -> std::optional<MultiRat> {
    const int n = static_cast<int>(E.names.size());
    MultiRat one = MultiRat::constant(n, BigRat(1));
    if (E.a6.is_zero() && E.a2 == -(one + E.a4)) return E.a4;
    return std::nullopt;
  };
  std::optional<SurfaceModel> legendre222;
  auto tau1 = legendre_param(E1);
  auto tau2 = legendre_param(E2);
  if (tau1 && tau2) {
    std::vector<std::string> lnames{"y", "w", "u"};
    lnames.insert(lnames.end(), E1.names.begin(), E1.names.end());
    MultiRat y = MultiRat::var(nv, 0);
    MultiRat w = MultiRat::var(nv, 1);
    MultiRat u = MultiRat::var(nv, 2);
    MultiRat one = MultiRat::constant(nv, BigRat(1));
    MultiRat expr = y * y -
                    w * (w - one) * (w - lift_params(*tau2, 3, nv)) * u *
                        (u - one) * (u - lift_params(*tau1, 3, nv));
    std::vector<long> ldegs(static_cast<size_t>(nv), -1);
    ldegs[0] = 2;
    ldegs[1] = 3;
    ldegs[2] = 3;
    legendre222.emplace(lnames, as_poly(expr, "kummer_product_models"), ldegs);
  }
  return KummerProductModels{std::move(pencil), std::move(legendre222)};
}

// Hodge numbers of the resolved double cover of (P^1)^3 branched over the
// three pulled-back Legendre quartics (h^{1,1}, h^{2,1}); module constants
// consumed by reports.
struct HodgeNumbers {
  long h11;
  long h21;
};
inline constexpr HodgeNumbers kummer3_hodge{51, 3};

// The Kummer-type threefold attached to three Legendre curves and the pencil
// of K3 fibers inside it.
//   threefold     y^2 = prod_i x_i z_i (x_i - z_i)(x_i - t_i z_i)
// quasi-homogeneous of weighted degree 4 for each of the three scaling
// actions (y weight 2, the i-th pair (x_i, z_i) weight 1). Substituting
// y = u x1 z1 x2 z2 x3 z3 and clearing the product once gives the pencil
// member
//   pencil_fiber  u^2 prod_i x_i z_i = prod_i (x_i - z_i)(x_i - t_i z_i)
// of multidegree (2,2,2) in the three (x_i : z_i) factors (the three weight
// rows below witness exactly that).
struct Kummer3Models {
  SurfaceModel threefold;
  SurfaceModel pencil_fiber;
};

inline Kummer3Models kummer3_models() {
  const int nv = 10; // y/u, x1, z1, x2, z2, x3, z3, t1, t2, t3
  auto X = [&](int i) { return MultiRat::var(nv, 1 + 2 * i); };
  auto Z = [&](int i) { return MultiRat::var(nv, 2 + 2 * i); };
  auto T = [&](int i) { return MultiRat::var(nv, 7 + i); };
  MultiRat head = MultiRat::var(nv, 0);

  MultiRat quartics = MultiRat::constant(nv, BigRat(1));
  MultiRat xz = MultiRat::constant(nv, BigRat(1));
  MultiRat far = MultiRat::constant(nv, BigRat(1));
  for (int i = 0; i < 3; ++i) {
    quartics = quartics * X(i) * Z(i) * (X(i) - Z(i)) * (X(i) - T(i) * Z(i));
    xz = xz * X(i) * Z(i);
    far = far * (X(i) - Z(i)) * (X(i) - T(i) * Z(i));
  }

  std::vector<std::string> tnames{"y",  "x1", "z1", "x2", "z2",
                                  "x3", "z3", "t1", "t2", "t3"};
  std::vector<long> tdegs{2, 3, 3, 3, 3, 3, 3, -1, -1, -1};
  std::vector<std::vector<long>> tweights{
      {2, 1, 1, 0, 0, 0, 0, 0, 0, 0},
      {2, 0, 0, 1, 1, 0, 0, 0, 0, 0},
      {2, 0, 0, 0, 0, 1, 1, 0, 0, 0}};
  SurfaceModel threefold(tnames,
                         detail::as_poly(head * head - quartics,
                                         "kummer3_models"),
                         tdegs, tweights);

  std::vector<std::string> pnames{"u",  "x1", "z1", "x2", "z2",
                                  "x3", "z3", "t1", "t2", "t3"};
  std::vector<long> pdegs{2, 2, 2, 2, 2, 2, 2, -1, -1, -1};
  std::vector<std::vector<long>> pweights{
      {0, 1, 1, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 1, 1, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 1, 1, 0, 0, 0}};
  SurfaceModel pencil_fiber(pnames,
                            detail::as_poly(head * head * xz - far,
                                            "kummer3_models"),
                            pdegs, pweights);
  return Kummer3Models{std::move(threefold), std::move(pencil_fiber)};
}

// Three-curve coincidence data: the base parameter s of the common K3 pencil
// member satisfies
//   quadratic   s^2 - (t1 + t2 + t3 - 1) s + t1 t2 t3 = 0,
// equivalently t3 = cover_map(s, t1, t2) with
//   cover_map   s(s - t1 - t2 + 1)/(s - t1 t2),
// which exhibits the s-line as a double cover of the t3-line. Both facts are
// re-checked on construction.
struct Coincidence3 {
  std::vector<std::string> names; // s, t1, t2, t3
  MultiPoly quadratic;
  MultiRat cover_map;
};

inline Coincidence3 coincidence3() {
  const int nv = 4;
  MultiRat s = MultiRat::var(nv, 0);
  MultiRat t1 = MultiRat::var(nv, 1);
  MultiRat t2 = MultiRat::var(nv, 2);
  MultiRat t3 = MultiRat::var(nv, 3);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat quad = s * s - (t1 + t2 + t3 - one) * s + t1 * t2 * t3;
  MultiRat cover = s * (s - t1 - t2 + one) / (s - t1 * t2);
  // Substituting t3 = cover_map must kill the quadratic identically.
  std::vector<MultiRat> img{s, t1, t2, cover};
  if (!substitute(quad, img, nv).is_zero())
    throw k3_error("coincidence3: cover map does not solve the quadratic");
  return Coincidence3{{"s", "t1", "t2", "t3"},
                      detail::as_poly(quad, "coincidence3"), cover};
}

// Elimination certificate for the three-curve coincidence: insisting the
// 2x2 matrix family [[T - a, bT], [1, (T - 1)(T - d)]] drops rank at
// T = t1, t2, t3 gives (t_i - 1)(t_i - a)(t_i - d) - b t_i = 0. Solving the
// first equation for b and clearing denominators leaves g2, g3; their
// resultant in d factors as unit * quadratic_a, reproducing the coincidence
// quadratic in a. The factorization is verified exactly at construction.
struct Coincidence3Elimination {
  std::vector<std::string> names; // a, d, t1, t2, t3
  MultiRat b_solution;
  MultiPoly g2, g3;
  MultiPoly resultant_d;
  MultiPoly unit;
  MultiPoly quadratic_a;
};

inline Coincidence3Elimination coincidence3_eliminated() {
  const int nv = 5;
  MultiRat a = MultiRat::var(nv, 0);
  MultiRat d = MultiRat::var(nv, 1);
  MultiRat t1 = MultiRat::var(nv, 2);
  MultiRat t2 = MultiRat::var(nv, 3);
  MultiRat t3 = MultiRat::var(nv, 4);
  MultiRat one = MultiRat::constant(nv, BigRat(1));

  MultiRat b = (t1 - one) * (t1 - a) * (t1 - d) / t1;
  auto incidence = [&](const MultiRat& ti) {
    return (ti - one) * (ti - a) * (ti - d) - b * ti;
  };
  // t1 * incidence(t_i) is polynomial; that scaling is the denominators of
  // b_solution being cleared, not extra content.
  MultiPoly g2 = detail::as_poly(t1 * incidence(t2), "coincidence3_eliminated");
  MultiPoly g3 = detail::as_poly(t1 * incidence(t3), "coincidence3_eliminated");
  MultiPoly res = resultant(g2, g3, 1);
  MultiPoly unit = detail::as_poly(t1 * (t1 - t2) * (t1 - t3) * (t2 - t3),
                                   "coincidence3_eliminated");
  MultiPoly quad = detail::as_poly(a * a - (t1 + t2 + t3 - one) * a +
                                       t1 * t2 * t3,
                                   "coincidence3_eliminated");
  if (!(res == unit * quad))
    throw k3_error("coincidence3_eliminated: resultant factorization failed");
  return Coincidence3Elimination{{"a", "d", "t1", "t2", "t3"},
                                 b,
                                 std::move(g2),
                                 std::move(g3),
                                 std::move(res),
                                 std::move(unit),
                                 std::move(quad)};
}

// Four-curve coincidence: the universal curve
//   y^2 + e1 xy = x^3 + (-e2 + e3 - 2 e4) x^2 + (1 - e1 + e2 - e3 + e4) e4 x
// over Q(t1, ..., t4) (e_i the elementary symmetric functions), with the six
// sections P_ij and the 2-torsion section T = (0, 0):
//   P_ij = (t_i(t_i-1) t_j(t_j-1),
//           t_i(t_i-1) t_j(t_j-1) (-t_i t_j + t_i' t_j' - t_i' - t_j'))
// where (i', j') is the complementary pair. Every section is checked to lie
// on the curve at construction; the group-law facts (2T = O, P_ij + T =
// P_i'j', independence is not claimed) live in the verification suite.
struct Coincidence4 {
  WeierstrassModel model;
  std::vector<std::pair<int, int>> pairs;
  std::vector<CurvePoint> points;
  CurvePoint torsion;
};

inline Coincidence4 coincidence4() {
  const int nv = 4;
  std::vector<std::string> names{"t1", "t2", "t3", "t4"};
  std::vector<MultiRat> t;
  for (int i = 0; i < 4; ++i) t.push_back(MultiRat::var(nv, i));
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat zero = MultiRat::constant(nv, BigRat(0));

  MultiRat e1 = t[0] + t[1] + t[2] + t[3];
  MultiRat e2 = zero;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) e2 = e2 + t[i] * t[j];
  MultiRat e3 = zero;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) e3 = e3 + t[i] * t[j] * t[k];
  MultiRat e4 = t[0] * t[1] * t[2] * t[3];

  WeierstrassModel model(names, -1, e1, -e2 + e3 - BigRat(2) * e4, zero,
                         (one - e1 + e2 - e3 + e4) * e4, zero);

  std::vector<std::pair<int, int>> pairs{{1, 2}, {1, 3}, {1, 4},
                                         {2, 3}, {2, 4}, {3, 4}};
  std::vector<CurvePoint> points;
  for (auto [i, j] : pairs) {
    int ip = 0, jp = 0;
    for (int k = 1; k <= 4; ++k)
      if (k != i && k != j) (ip == 0 ? ip : jp) = k;
    MultiRat ti = t[i - 1], tj = t[j - 1];
    MultiRat tip = t[ip - 1], tjp = t[jp - 1];
    MultiRat X = ti * (ti - one) * tj * (tj - one);
    MultiRat Y = X * (-(ti * tj) + tip * tjp - tip - tjp);
    CurvePoint P = CurvePoint::affine(X, Y);
    if (!is_on_curve(model, P))
      throw k3_error("coincidence4: section fails the curve equation");
    points.push_back(std::move(P));
  }
  CurvePoint T2 = CurvePoint::affine(zero, zero);
  if (!is_on_curve(model, T2))
    throw k3_error("coincidence4: torsion section fails the curve equation");
  return Coincidence4{std::move(model), std::move(pairs), std::move(points),
                      std::move(T2)};
}

// The pair (C, E) over Q(t1, t2, t3)(t): C is the coincidence4 curve viewed
// as an elliptic surface over the t = t4 line (degrees of a_i in t are
// 1, 2, 0, 4, 0, within the rational-surface bound deg a_i <= i), E the
// Legendre curve with parameter t. Their fiber configurations along the
// t-line share no additive place, which is what makes the fiber product
// usable; that geometric fact is asserted by the verification suite from
// the computed configurations.
struct Z3Model {
  WeierstrassModel C;
  WeierstrassModel E;
};

inline Z3Model z3_model() {
  Coincidence4 c4 = coincidence4();
  WeierstrassModel C(c4.model.names, 3, c4.model.a1, c4.model.a2, c4.model.a3,
                     c4.model.a4, c4.model.a6);
  const int nv = 4;
  MultiRat t = MultiRat::var(nv, 3);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat zero = MultiRat::constant(nv, BigRat(0));
  WeierstrassModel E(C.names, 3, zero, -(one + t), zero, t, zero);
  return Z3Model{std::move(C), std::move(E)};
}

} // namespace k3kit
