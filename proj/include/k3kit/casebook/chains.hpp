#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3kit/casebook/analyze.hpp"
#include "k3kit/casebook/models.hpp"
#include "k3kit/casebook/points.hpp"

namespace k3kit {

// Quadratic base change of an elliptic curve E/Q(t) to the double cover
//   t = s(s - t1 - t2 + 1)/(s - t1 t2)
// of the t-line, followed by the fixed quadratic twist u = s - t1 t2 (the
// change (x, y) -> (x/u^2, y/u^3)), which clears every denominator the base
// change introduces. The result is an elliptic surface over Q(t1, t2) with
// fiber coordinate s and polynomial coefficients; failure to clear the
// denominators is a hard error rather than a silent rational model. The
// construction stays valid on the t1 = t2 diagonal (the cover degenerates
// only over t1 t2 = 0 style loci, which the coefficient field never pins).
inline WeierstrassModel z2_surface(const WeierstrassModel& E) {
  if (E.names.size() != 1 || E.fiber_var != 0)
    throw k3_error("z2_surface: input must be a curve over Q(t) with "
                   "fiber variable t");
  const int nv = 3;
  std::vector<std::string> names{"s", "t1", "t2"};
  MultiRat s = MultiRat::var(nv, 0);
  MultiRat t1 = MultiRat::var(nv, 1);
  MultiRat t2 = MultiRat::var(nv, 2);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat cover = s * (s - t1 - t2 + one) / (s - t1 * t2);
  MultiRat u = s - t1 * t2;
  WeierstrassModel pulled = substitute_model(E, {cover}, names, 0);
  WeierstrassModel out = rescale_model(pulled, u);
  for (const MultiRat* c : {&out.a1, &out.a2, &out.a3, &out.a4, &out.a6})
    if (!c->den.is_constant())
      throw k3_error("z2_surface: twist by s - t1 t2 did not clear "
                     "denominators");
  return out;
}

// The double-II*-fiber surface attached to two curves in short odd form
// y^2 = x^3 + a2 x^2 + a4 x + a6 (unprimed) and the primed analogue:
//   Y^2 = X^3 + A2 X^2 + A4 X + A6 over Q(...)(T),
//   A2 = 4 a2 a2',
//   A4 = 16 (a2^2 a4' - 3 a4 a4' + a4 a2'^2),
//   A6 = disc T - (c6 a6' - 32 a2 a4 a2' a4' + 864 a6 a6' + c6' a6)
//        + disc'/T.
// The two middle-bracket signs are fixed by fiberwise point counts over
// F_103 across all sign choices; the count test in the suite repeats that
// refutation. Everything is char-0 arithmetic here, so the char-2
// degeneration of the construction cannot arise.
inline WeierstrassModel inose_surface(const WeierstrassModel& E1,
                                      const WeierstrassModel& E2, int T_var) {
  if (!E1.short_odd() || !E2.short_odd())
    throw k3_error("inose_surface: inputs must be short-odd");
  if (E1.names.size() != E2.names.size())
    throw k3_error("inose_surface: coefficient ring mismatch");
  const int nv = static_cast<int>(E1.names.size());
  if (T_var < 0 || T_var >= nv)
    throw k3_error("inose_surface: pencil variable out of range");
  for (const WeierstrassModel* E : {&E1, &E2})
    for (const MultiRat* c : {&E->a2, &E->a4, &E->a6})
      if (c->num.degree_in(T_var) > 0 || c->den.degree_in(T_var) > 0)
        throw k3_error("inose_surface: input coefficients involve the "
                       "pencil variable");
  MultiRat T = MultiRat::var(nv, T_var);
  const MultiRat &a2 = E1.a2, &a4 = E1.a4, &a6 = E1.a6;
  const MultiRat &b2 = E2.a2, &b4 = E2.a4, &b6 = E2.a6;
  MultiRat A2 = BigRat(4) * a2 * b2;
  MultiRat A4 = BigRat(16) * (a2 * a2 * b4 - BigRat(3) * a4 * b4 +
                              a4 * b2 * b2);
  MultiRat mid = E1.c6 * b6 - BigRat(32) * a2 * a4 * b2 * b4 +
                 BigRat(864) * a6 * b6 + E2.c6 * a6;
  MultiRat A6 = E1.disc * T - mid + E2.disc / T;
  return short_model(E1.names, T_var, A2, A4, A6);
}

// Complete the cube: (x, y) -> (x - a2/3, y) kills the x^2 term of a
// short-odd model. j and the fiber geometry are untouched.
inline WeierstrassModel depressed_model(const WeierstrassModel& m) {
  if (!m.short_odd()) throw k3_error("depressed_model: model not short-odd");
  BigRat third = BigRat(1) / BigRat(3);
  MultiRat a4 = m.a4 - third * (m.a2 * m.a2);
  MultiRat a6 = m.a6 + (BigRat(2) / BigRat(27)) * (m.a2 * m.a2 * m.a2) -
                third * (m.a2 * m.a4);
  const int nv = static_cast<int>(m.names.size());
  return short_model(m.names, m.fiber_var,
                     MultiRat::constant(nv, BigRat(0)), a4, a6);
}

// One rendered step of a case verification and the full replay report. The
// steps list every intermediate model of the substitution chain; failure
// stores the first nonzero difference verbatim.
struct CaseStep {
  std::string label;
  std::vector<std::string> lines;
};

struct CaseReport {
  std::string name;
  bool ok = false;
  std::vector<CaseStep> steps;
  std::string failure;
  std::string found_alpha;
  std::string found_lambda2;
};

inline std::string render_model(const WeierstrassModel& m) {
  std::string lhs = "y^2";
  if (!m.a1.is_zero()) lhs += " + (" + to_string(m.a1, m.names) + ")*x*y";
  if (!m.a3.is_zero()) lhs += " + (" + to_string(m.a3, m.names) + ")*y";
  std::string rhs = "x^3";
  if (!m.a2.is_zero()) rhs += " + (" + to_string(m.a2, m.names) + ")*x^2";
  if (!m.a4.is_zero()) rhs += " + (" + to_string(m.a4, m.names) + ")*x";
  if (!m.a6.is_zero()) rhs += " + " + to_string(m.a6, m.names);
  return lhs + " = " + rhs;
}

namespace detail {

struct case_failure {
  std::string label;
  std::string diff;
};

inline void require_zero(const std::string& label, const MultiRat& diff,
                         const std::vector<std::string>& names) {
  if (!diff.is_zero()) throw case_failure{label, to_string(diff, names)};
}

inline void require_that(const std::string& label, bool ok,
                         const std::string& what) {
  if (!ok) throw case_failure{label, what};
}

inline void require_model_eq(const std::string& label,
                             const WeierstrassModel& got,
                             const WeierstrassModel& want) {
  const std::pair<const MultiRat*, const MultiRat*> slots[] = {
      {&got.a1, &want.a1}, {&got.a2, &want.a2}, {&got.a3, &want.a3},
      {&got.a4, &want.a4}, {&got.a6, &want.a6}};
  const char* slot_names[] = {"a1", "a2", "a3", "a4", "a6"};
  for (int i = 0; i < 5; ++i) {
    MultiRat diff = *slots[i].first - *slots[i].second;
    if (!diff.is_zero())
      throw case_failure{label, std::string(slot_names[i]) +
                                    " differs by " +
                                    to_string(diff, got.names)};
  }
}

// ---- legendre_to_kummer -------------------------------------------------

inline void case_legendre(CaseReport& r) {
  WeierstrassModel E = extremal_model("legendre");
  WeierstrassModel z2 = z2_surface(E);
  const int nv = 3;
  MultiRat s = MultiRat::var(nv, 0);
  MultiRat t1 = MultiRat::var(nv, 1);
  MultiRat t2 = MultiRat::var(nv, 2);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat delta = t1 + t2 - one;
  MultiRat u = s - t1 * t2;
  MultiRat cover = s * (s - delta) / u;

  require_zero("base-changed surface: a2",
               z2.a2 - (-(u * u + s * (s - delta) * u)), z2.names);
  require_zero("base-changed surface: a4",
               z2.a4 - s * (s - delta) * u * u * u, z2.names);
  require_zero("base-changed surface: a6", z2.a6, z2.names);
  require_zero("base-changed surface: j pulls back",
               z2.j() - substitute(E.j(), {cover}, nv), z2.names);
  r.steps.push_back(
      {"quadratic base change t = s(s - t1 - t2 + 1)/(s - t1 t2), twist by "
       "u = s - t1 t2",
       {render_model(z2)}});

  // The substitution happens on the untwisted generic fiber
  // y^2 = x(x - 1)(x - t(s)); x, its two shifts, and their product.
  const int n4 = 4;
  std::vector<std::string> names4{"s", "w", "t1", "t2"};
  MultiRat s4 = MultiRat::var(n4, 0);
  MultiRat w4 = MultiRat::var(n4, 1);
  MultiRat t14 = MultiRat::var(n4, 2);
  MultiRat t24 = MultiRat::var(n4, 3);
  MultiRat one4 = MultiRat::constant(n4, BigRat(1));
  MultiRat delta4 = t14 + t24 - one4;
  MultiRat den4 = (s4 - t14 * t24) * (w4 - one4);
  MultiRat ts4 = s4 * (s4 - delta4) / (s4 - t14 * t24);

  MultiRat x1 = -((s4 - delta4) * (s4 - t14 * w4)) / den4;
  MultiRat x2 = -((s4 - t14) * (s4 - t24 - (t14 - one4) * w4)) / den4;
  MultiRat x3 = -((s4 - delta4) * (s4 - t14) * w4) / den4;
  require_zero("x - 1 factors as stated", (x1 - one4) - x2, names4);
  require_zero("x - t factors as stated", (x1 - ts4) - x3, names4);
  r.steps.push_back(
      {"substitute x = -(s - t1 - t2 + 1)(s - t1 w)/((s - t1 t2)(w - 1))",
       {"x - 1 = " + to_string(x2, names4),
        "x - t = " + to_string(x3, names4)}});

  MultiRat prod = x1 * x2 * x3;
  MultiRat target = -(w4 * (w4 - one4) * (s4 - t14 * t24) * (s4 - t14 * w4) *
                      (s4 - t24 - (t14 - one4) * w4));
  auto S = mr_sqrt(prod / target);
  require_that("product is a square times the quintic form", S.has_value(),
               "square factor extraction failed");
  require_zero("square factor verifies", (*S) * (*S) * target - prod, names4);
  r.steps.push_back(
      {"absorb the square: y = S y' with S = " + to_string(*S, names4),
       {"y'^2 = " + to_string(target, names4)}});

  // s = -(w - t2) u + t1 w lands in Q(w, u, t1, t2).
  std::vector<std::string> names5{"w", "u", "t1", "t2"};
  MultiRat w5 = MultiRat::var(n4, 0);
  MultiRat u5 = MultiRat::var(n4, 1);
  MultiRat t15 = MultiRat::var(n4, 2);
  MultiRat t25 = MultiRat::var(n4, 3);
  MultiRat one5 = MultiRat::constant(n4, BigRat(1));
  std::vector<MultiRat> img{-(w5 - t25) * u5 + t15 * w5, w5, t15, t25};
  MultiRat target2 = substitute(target, img, n4);
  MultiRat ktarget = w5 * (w5 - one5) * (w5 - t25) * u5 * (u5 - one5) *
                     (u5 - t15);
  auto S2 = mr_sqrt(target2 / ktarget);
  require_that("second square factor exists", S2.has_value(),
               "square factor extraction failed");
  require_zero("second square factor is w - t2", *S2 - (w5 - t25), names5);
  require_zero("double Legendre form reached",
               (*S2) * (*S2) * ktarget - target2, names5);
  r.steps.push_back(
      {"substitute s = -(w - t2)u + t1 w and absorb (w - t2)^2",
       {"y^2 = " + to_string(ktarget, names5)}});

  // The reached form is the attached double-Legendre model of the product.
  MultiRat p1 = MultiRat::var(2, 0);
  MultiRat p2 = MultiRat::var(2, 1);
  MultiRat pone = MultiRat::constant(2, BigRat(1));
  MultiRat pzero = MultiRat::constant(2, BigRat(0));
  WeierstrassModel E1({"t1", "t2"}, -1, pzero, -(pone + p1), pzero, p1, pzero);
  WeierstrassModel E2({"t1", "t2"}, -1, pzero, -(pone + p2), pzero, p2, pzero);
  KummerProductModels km = kummer_product_models(E1, E2);
  require_that("double Legendre model attached", km.legendre222.has_value(),
               "kummer_product_models did not recognize Legendre inputs");
  const int n5 = 5;
  std::vector<MultiRat> lift{MultiRat::var(n5, 1), MultiRat::var(n5, 2),
                             MultiRat::var(n5, 3), MultiRat::var(n5, 4)};
  MultiRat y5 = MultiRat::var(n5, 0);
  MultiRat final_expr = y5 * y5 - substitute(ktarget, lift, n5);
  require_that("matches kummer_product_models.legendre222",
               km.legendre222->poly == detail::as_poly(final_expr,
                                                       "case_legendre"),
               "polynomial mismatch against the attached model");
  r.steps.push_back({"compare with kummer_product_models(E1, E2).legendre222",
                     {"exact match"}});
}

// ---- II* ---------------------------------------------------------------

inline void case_iistar(CaseReport& r) {
  WeierstrassModel E = extremal_model("II*");
  WeierstrassModel z2 = z2_surface(E);
  const int nv = 3;
  MultiRat s = MultiRat::var(nv, 0);
  MultiRat t1 = MultiRat::var(nv, 1);
  MultiRat t2 = MultiRat::var(nv, 2);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat u = s - t1 * t2;
  MultiRat Q = BigRat(2) * s * s - (BigRat(2) * t1 + BigRat(2) * t2 - one) * s +
               t1 * t2;

  require_zero("base-changed surface: a2", z2.a2, z2.names);
  require_zero("base-changed surface: a4",
               z2.a4 - (BigRat(-3) * mr_pow(u, 4)), z2.names);
  require_zero("base-changed surface: a6",
               z2.a6 - (BigRat(-2) * Q * mr_pow(u, 5)), z2.names);
  r.steps.push_back(
      {"quadratic base change and twist: two II* fibers at s = t1 t2, oo",
       {render_model(z2)}});

  // s = t2(T t1 - t2 + 1)/T; the leftover unit is s - t1 t2 = -t2(t2-1)/T.
  std::vector<std::string> names3{"T", "t1", "t2"};
  MultiRat T = MultiRat::var(nv, 0);
  MultiRat v1 = MultiRat::var(nv, 1);
  MultiRat v2 = MultiRat::var(nv, 2);
  MultiRat one3 = MultiRat::constant(nv, BigRat(1));
  MultiRat sT = v2 * (T * v1 - v2 + one3) / T;
  WeierstrassModel M = substitute_model(z2, {sT, v1, v2}, names3, 0);
  MultiRat uhat = sT - v1 * v2;
  require_zero("unit after base change", uhat - (-(v2 * (v2 - one3)) / T),
               names3);
  WeierstrassModel undone = rescale_model(M, one3 / uhat);

  MultiRat disp6 = BigRat(2) * (BigRat(2) * v1 * (v1 - one3) * T -
                                (BigRat(2) * v1 - one3) * (BigRat(2) * v2 - one3) +
                                BigRat(2) * v2 * (v2 - one3) / T);
  WeierstrassModel display = short_model(names3, 0,
                                         MultiRat::constant(nv, BigRat(0)),
                                         MultiRat::constant(nv, BigRat(-3)),
                                         disp6);
  require_model_eq("printed two-II* display reproduced", undone, display);
  require_zero("j agrees across the base change",
               M.j() - substitute(z2.j(), {sT, v1, v2}, nv), names3);
  r.steps.push_back(
      {"substitute s = t2(T t1 - t2 + 1)/T and undo the unit "
       "(x, y) -> (x uhat^2, y uhat^3), uhat = -t2(t2 - 1)/T",
       {render_model(display)}});

  // Independent identity: the display is the Inose surface of the two input
  // curves after a combined twist-rescale by -12.
  MultiRat zero3 = MultiRat::constant(nv, BigRat(0));
  WeierstrassModel C1 = short_model(names3, -1, zero3,
                                    MultiRat::constant(nv, BigRat(-3)),
                                    BigRat(-2) * (BigRat(2) * v1 - one3));
  WeierstrassModel C2 = short_model(names3, -1, zero3,
                                    MultiRat::constant(nv, BigRat(-3)),
                                    BigRat(-2) * (BigRat(2) * v2 - one3));
  WeierstrassModel Ino = inose_surface(C1, C2, 0);
  auto l2 = find_rescale(Ino, display);
  require_that("display is a rescale of the Inose surface", l2.has_value(),
               "no rescale found");
  require_zero("the combined scale is -12",
               *l2 - MultiRat::constant(nv, BigRat(-12)), names3);
  require_model_eq("equivalently: (-1)-twist rescaled by 12",
                   apply_rescale(quadratic_twist(Ino, -1),
                                 MultiRat::constant(nv, BigRat(12))),
                   display);
  require_zero("j preserved by twist and rescale", display.j() - Ino.j(),
               names3);
  r.found_lambda2 = to_string(*l2, names3);
  r.steps.push_back({"display == rescale(Inose surface, lambda^2 = -12)",
                     {render_model(Ino)}});
}

// ---- III* --------------------------------------------------------------

inline void case_iiistar(CaseReport& r) {
  WeierstrassModel E = extremal_model("III*");
  WeierstrassModel z2 = z2_surface(E);
  const int nv = 3;
  {
    MultiRat s = MultiRat::var(nv, 0);
    MultiRat t1 = MultiRat::var(nv, 1);
    MultiRat t2 = MultiRat::var(nv, 2);
    MultiRat one = MultiRat::constant(nv, BigRat(1));
    MultiRat delta = t1 + t2 - one;
    MultiRat u = s - t1 * t2;
    require_zero("base-changed surface: a2", z2.a2 - BigRat(-2) * u * u,
                 z2.names);
    require_zero("base-changed surface: a4",
                 z2.a4 - s * (s - delta) * u * u * u, z2.names);
    require_zero("base-changed surface: a6", z2.a6, z2.names);
  }
  r.steps.push_back(
      {"quadratic base change and twist: two III* fibers at s = t1 t2, oo",
       {render_model(z2)}});

  // x = (s - delta) w, y = (s - delta) y' turns the fiber equation into a
  // quartic in s over Q(w, t1, t2).
  const int n4 = 4;
  std::vector<std::string> names4{"s", "w", "t1", "t2"};
  MultiRat s4 = MultiRat::var(n4, 0);
  MultiRat w4 = MultiRat::var(n4, 1);
  MultiRat t14 = MultiRat::var(n4, 2);
  MultiRat t24 = MultiRat::var(n4, 3);
  MultiRat one4 = MultiRat::constant(n4, BigRat(1));
  MultiRat delta4 = t14 + t24 - one4;
  MultiRat u4 = s4 - t14 * t24;
  std::vector<MultiRat> lift{s4, t14, t24};
  MultiRat a2l = substitute(z2.a2, lift, n4);
  MultiRat a4l = substitute(z2.a4, lift, n4);
  MultiRat xw = (s4 - delta4) * w4;
  MultiRat quartic_expr = (s4 - delta4) * w4 * w4 * w4 -
                          BigRat(2) * u4 * u4 * w4 * w4 +
                          s4 * u4 * u4 * u4 * w4;
  require_zero("quartic substitution identity",
               xw * xw * xw + a2l * xw * xw + a4l * xw -
                   (s4 - delta4) * (s4 - delta4) * quartic_expr,
               names4);

  // Coefficients in powers of s, frozen from the printed hyperelliptic
  // quartic.
  MultiPoly qp = detail::as_poly(quartic_expr, "case_iiistar");
  auto sc = [&](long k) { return MultiRat(coeff_in(qp, 0, k)); };
  MultiRat qa = sc(4), qb = sc(3), qc = sc(2), qd = sc(1), qe = sc(0);
  MultiRat TT1 = t14, TT2 = t24;
  require_zero("quartic s^4 coefficient", qa - w4, names4);
  require_zero("quartic s^3 coefficient", qb - BigRat(-3) * TT1 * TT2 * w4,
               names4);
  require_zero("quartic s^2 coefficient",
               qc - (BigRat(3) * TT1 * TT1 * TT2 * TT2 * w4 -
                     BigRat(2) * w4 * w4),
               names4);
  require_zero("quartic s^1 coefficient",
               qd - (-(TT1 * TT1 * TT1 * TT2 * TT2 * TT2 * w4 -
                       BigRat(4) * TT1 * TT2 * w4 * w4 - w4 * w4 * w4)),
               names4);
  require_zero("quartic s^0 coefficient",
               qe - (BigRat(-2) * TT1 * TT1 * TT2 * TT2 * w4 * w4 -
                     (TT1 + TT2 - one4) * w4 * w4 * w4),
               names4);
  GenusOneQuartic quartic(names4, 0, qa, qb, qc, qd, qe);
  r.steps.push_back({"project from the 2-torsion: x = (s - t1 - t2 + 1)w "
                     "gives the hyperelliptic quartic in s",
                     {"y^2 = (" + to_string(qa, names4) + ")s^4 + (" +
                      to_string(qb, names4) + ")s^3 + (" +
                      to_string(qc, names4) + ")s^2 + (" +
                      to_string(qd, names4) + ")s + (" +
                      to_string(qe, names4) + ")"}});

  WeierstrassModel J = jacobian_of_quartic(quartic, 1);
  r.steps.push_back({"Jacobian of the quartic over Q(w, t1, t2)",
                     {render_model(J)}});

  // w = -t2^2(t2 - 1)T; the printed target reappears after T -> alpha T
  // (the substitution lands on the parameter-swapped form) and the
  // lambda-rescale found below.
  std::vector<std::string> names3{"T", "t1", "t2"};
  MultiRat T = MultiRat::var(nv, 0);
  MultiRat v1 = MultiRat::var(nv, 1);
  MultiRat v2 = MultiRat::var(nv, 2);
  MultiRat one3 = MultiRat::constant(nv, BigRat(1));
  MultiRat zero3 = MultiRat::constant(nv, BigRat(0));
  std::vector<MultiRat> imgJ{zero3, -(v2 * v2 * (v2 - one3)) * T, v1, v2};
  WeierstrassModel JT = substitute_model(J, imgJ, names3, 0);

  WeierstrassModel target = short_model(
      names3, 0, MultiRat::constant(nv, BigRat(4)),
      BigRat(4) * v1 + BigRat(4) * v2 - BigRat(3) * v1 * v2,
      -(v1 * v1 * (v1 - one3)) * T + BigRat(2) * v1 * v2 -
          v2 * v2 * (v2 - one3) / T);

  // Bounded search for the base-parameter unit alpha absorbing the swap:
  // signed monomials in t1, t1 - 1, t2, t2 - 1 with exponents in [-2, 2],
  // numeric prefilter at (t1, t2) = (5, 7), exact symbolic confirmation.
  WeierstrassModel J5 = substitute_model(
      JT,
      {MultiRat::var(1, 0), MultiRat::constant(1, BigRat(5)),
       MultiRat::constant(1, BigRat(7))},
      {"T"}, 0);
  std::optional<MultiRat> alpha_found, lambda2_found;
  for (int sign = 0; sign < 2 && !alpha_found; ++sign) {
    for (long e1 = -2; e1 <= 2 && !alpha_found; ++e1)
      for (long e2 = -2; e2 <= 2 && !alpha_found; ++e2)
        for (long e3 = -2; e3 <= 2 && !alpha_found; ++e3)
          for (long e4 = -2; e4 <= 2 && !alpha_found; ++e4) {
            BigRat anum = (sign ? BigRat(-1) : BigRat(1)) *
                          rat_pow(BigRat(5), e1) * rat_pow(BigRat(4), e2) *
                          rat_pow(BigRat(7), e3) * rat_pow(BigRat(6), e4);
            WeierstrassModel cand5 = substitute_model(
                target,
                {MultiRat(MultiPoly::constant(1, anum)) * MultiRat::var(1, 0),
                 MultiRat::constant(1, BigRat(5)),
                 MultiRat::constant(1, BigRat(7))},
                {"T"}, 0);
            if (!find_rescale(J5, depressed_model(cand5))) continue;
            MultiRat alpha = (sign ? BigRat(-1) : BigRat(1)) *
                             (mr_pow(v1, e1) * mr_pow(v1 - one3, e2) *
                              mr_pow(v2, e3) * mr_pow(v2 - one3, e4));
            WeierstrassModel cand = substitute_model(
                target, {alpha * T, v1, v2}, names3, 0);
            auto l2 = find_rescale(JT, depressed_model(cand));
            if (!l2) continue;
            alpha_found = alpha;
            lambda2_found = *l2;
          }
  }
  require_that("alpha search succeeded", alpha_found.has_value(),
               "no unit in the search grid matches");
  r.found_alpha = to_string(*alpha_found, names3);
  r.found_lambda2 = to_string(*lambda2_found, names3);
  WeierstrassModel target_alpha =
      substitute_model(target, {(*alpha_found) * T, v1, v2}, names3, 0);
  require_model_eq("Jacobian reproduces the printed display after "
                   "T -> alpha T, completing the cube, and the rescale",
                   apply_rescale(JT, *lambda2_found),
                   depressed_model(target_alpha));
  require_zero("j agrees with the printed display",
               JT.j() - target_alpha.j(), names3);
  r.steps.push_back(
      {"substitute w = -t2^2(t2 - 1)T; printed display reached after "
       "T -> alpha T with alpha = " + r.found_alpha +
           " and lambda^2 = " + r.found_lambda2,
       {render_model(target)}});

  // Independent identity: the printed display is the rescale by 4 of the
  // Inose surface of the two input curves.
  WeierstrassModel C1 = short_model(names3, -1,
                                    MultiRat::constant(nv, BigRat(-2)), v1,
                                    zero3);
  WeierstrassModel C2 = short_model(names3, -1,
                                    MultiRat::constant(nv, BigRat(-2)), v2,
                                    zero3);
  WeierstrassModel Ino = inose_surface(C1, C2, 0);
  auto l2b = find_rescale(Ino, target);
  require_that("display is a rescale of the Inose surface", l2b.has_value(),
               "no rescale found");
  require_zero("the Inose rescale is 4",
               *l2b - MultiRat::constant(nv, BigRat(4)), names3);
  r.steps.push_back({"display == rescale(Inose surface, lambda^2 = 4)",
                     {render_model(Ino)}});
}

// ---- IV* ---------------------------------------------------------------

inline void case_ivstar(CaseReport& r) {
  WeierstrassModel E = extremal_model("IV*");
  WeierstrassModel z2 = z2_surface(E);
  const int nv = 3;
  MultiRat s = MultiRat::var(nv, 0);
  MultiRat t1 = MultiRat::var(nv, 1);
  MultiRat t2 = MultiRat::var(nv, 2);
  MultiRat one = MultiRat::constant(nv, BigRat(1));
  MultiRat delta = t1 + t2 - one;
  MultiRat u = s - t1 * t2;
  require_zero("base-changed surface: a2", z2.a2 - BigRat(9) * u * u,
               z2.names);
  require_zero("base-changed surface: a4",
               z2.a4 - BigRat(24) * s * (s - delta) * mr_pow(u, 3), z2.names);
  require_zero("base-changed surface: a6",
               z2.a6 - BigRat(16) * s * s * (s - delta) * (s - delta) *
                           mr_pow(u, 4),
               z2.names);
  r.steps.push_back(
      {"quadratic base change and twist: two IV* fibers at s = t1 t2, oo",
       {render_model(z2)}});

  // The 3-torsion section and its tangent line.
  MultiRat sig_y = BigRat(4) * s * (s - delta) * u * u;
  CurvePoint sigma = CurvePoint::affine(MultiRat::constant(nv, BigRat(0)),
                                        sig_y);
  require_that("sigma = (0, 4s(s - t1 - t2 + 1)(s - t1 t2)^2) on the surface",
               is_on_curve(z2, sigma), "section fails the curve equation");
  require_that("3 sigma = O", ec_mul(z2, 3, sigma).infinity,
               "section is not 3-torsion");
  // ell = 3u x + sig_y is tangent at sigma: ell^2 equals the right side
  // coefficient by coefficient.
  require_zero("tangent line squares to the cubic: x^2 slot",
               BigRat(9) * u * u - z2.a2, z2.names);
  require_zero("tangent line squares to the cubic: x slot",
               BigRat(2) * (BigRat(3) * u) * sig_y - z2.a4, z2.names);
  require_zero("tangent line squares to the cubic: 1 slot",
               sig_y * sig_y - z2.a6, z2.names);
  r.steps.push_back({"3-torsion section sigma and tangent line "
                     "ell = 3(s - t1 t2)x + 4s(s - t1 - t2 + 1)(s - t1 t2)^2",
                     {"ell^2 = a2 x^2 + a4 x + a6 exactly"}});

  // y = ell - 8 w s^2 u^4 / c with c = t2^3(t2 - 1), then x = 2 s u^2 x'
  // and division by 8 s^3 u^6 extracts the plane cubic. (The printed
  // direction of the coordinate relation is inverted: it is x that equals
  // 2 s (s - t1 t2)^2 x'.)
  const int n5 = 5;
  std::vector<std::string> names5{"xp", "s", "w", "t1", "t2"};
  MultiRat xp = MultiRat::var(n5, 0);
  MultiRat s5 = MultiRat::var(n5, 1);
  MultiRat w5 = MultiRat::var(n5, 2);
  MultiRat t15 = MultiRat::var(n5, 3);
  MultiRat t25 = MultiRat::var(n5, 4);
  MultiRat one5 = MultiRat::constant(n5, BigRat(1));
  MultiRat delta5 = t15 + t25 - one5;
  MultiRat u5 = s5 - t15 * t25;
  MultiRat c5 = t25 * t25 * t25 * (t25 - one5);
  MultiRat x5 = BigRat(2) * s5 * u5 * u5 * xp;
  MultiRat ell = BigRat(3) * u5 * x5 +
                 BigRat(4) * s5 * (s5 - delta5) * u5 * u5;
  MultiRat beta = BigRat(8) * w5 * s5 * s5 * mr_pow(u5, 4) / c5;
  MultiRat rel = -(x5 * x5 * x5) - BigRat(2) * ell * beta + beta * beta;
  MultiRat cubic = c5 * c5 * xp * xp * xp +
                   BigRat(12) * c5 * w5 * u5 * xp +
                   BigRat(8) * c5 * w5 * (s5 - delta5) -
                   BigRat(8) * w5 * w5 * s5 * u5 * u5;
  require_zero("plane cubic extracted",
               -(c5 * c5) * rel - BigRat(8) * mr_pow(s5, 3) * mr_pow(u5, 6) *
                                      cubic,
               names5);
  r.steps.push_back(
      {"y = ell - 8 w s^2 (s - t1 t2)^4 / (t2^3(t2 - 1)), x = 2 s (s - t1 "
       "t2)^2 x': the fiber equation becomes a plane cubic",
       {to_string(cubic, names5) + " = 0"}});

  // The corrected printed Jacobian of that cubic family (the two middle
  // signs differ from the printed display; the count test re-refutes the
  // printed signs) and the twist identity the chain asserts.
  std::vector<std::string> names3{"w", "t1", "t2"};
  MultiRat w3 = MultiRat::var(nv, 0);
  MultiRat v1 = MultiRat::var(nv, 1);
  MultiRat v2 = MultiRat::var(nv, 2);
  MultiRat one3 = MultiRat::constant(nv, BigRat(1));
  MultiRat zero3 = MultiRat::constant(nv, BigRat(0));
  auto q8 = [&](const MultiRat& t) {
    return BigRat(8) * t * t - BigRat(36) * t + BigRat(27) * one3;
  };
  WeierstrassModel JIV = short_model(
      names3, 0, zero3,
      BigRat(-3) * (BigRat(8) * v1 - BigRat(9) * one3) *
          (BigRat(8) * v2 - BigRat(9) * one3),
      BigRat(2) * (BigRat(32) * mr_pow(v1, 3) * (v1 - one3) * w3 -
                   q8(v1) * q8(v2) +
                   BigRat(32) * mr_pow(v2, 3) * (v2 - one3) / w3));
  r.steps.push_back({"Jacobian of the cubic family (middle signs certified "
                     "by fiber counts)",
                     {render_model(JIV)}});

  // The inputs to the Inose surface are the depressed (2-torsion-free)
  // forms of the two IV* curves; j is untouched by the depression.
  WeierstrassModel dep1 =
      short_model(names3, -1, zero3,
                  BigRat(3) * (BigRat(8) * v1 - BigRat(9) * one3),
                  BigRat(2) * q8(v1));
  WeierstrassModel dep2 =
      short_model(names3, -1, zero3,
                  BigRat(3) * (BigRat(8) * v2 - BigRat(9) * one3),
                  BigRat(2) * q8(v2));
  require_zero("first input matches the IV* fiber j",
               dep1.j() - substitute(E.j(), {v1}, nv), names3);
  require_zero("second input matches the IV* fiber j",
               dep2.j() - substitute(E.j(), {v2}, nv), names3);
  WeierstrassModel Ino = inose_surface(dep1, dep2, 0);
  WeierstrassModel tw = quadratic_twist(Ino, -3);
  auto l2 = find_rescale(tw, JIV);
  require_that("Jacobian is a rescale of the (-3)-twisted Inose surface",
               l2.has_value(), "no rescale found");
  require_zero("the rescale is 36", *l2 - MultiRat::constant(nv, BigRat(36)),
               names3);
  require_model_eq("twist identity", apply_rescale(tw, *l2), JIV);
  require_zero("j preserved through twist and rescale", JIV.j() - Ino.j(),
               names3);
  r.found_lambda2 = to_string(*l2, names3);
  r.steps.push_back(
      {"Jacobian == rescale(quadratic_twist(Inose surface, -3), 36)",
       {render_model(Ino)}});
}

} // namespace detail

// Replay one verified identity chain. Every substitution is performed
// exactly and every intermediate model is listed in the report; the first
// failed identity aborts the chain with the nonzero difference rendered in
// the failure slot.
inline CaseReport verify_case(const std::string& name) {
  CaseReport r;
  r.name = name;
  try {
    if (name == "legendre_to_kummer")
      detail::case_legendre(r);
    else if (name == "IIstar")
      detail::case_iistar(r);
    else if (name == "IIIstar")
      detail::case_iiistar(r);
    else if (name == "IVstar")
      detail::case_ivstar(r);
    else
      throw k3_error("verify_case: unknown case '" + name + "'");
    r.ok = true;
  } catch (const detail::case_failure& f) {
    r.ok = false;
    r.failure = f.label + ": " + f.diff;
  }
  return r;
}

inline std::vector<std::string> verify_case_names() {
  return {"legendre_to_kummer", "IIstar", "IIIstar", "IVstar"};
}

} // namespace k3kit
