#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3kit/casebook/weierstrass.hpp"
#include "k3kit/exactmath/factor.hpp"
#include "k3kit/fibration/kodaira.hpp"

namespace k3kit {

// One place of the base line together with the Kodaira type found there.
// residue_degree is the degree of the place over the base field: conjugate
// fibers at an irreducible place polynomial of degree d are reported once
// with residue_degree = d.
struct AnalyzedFiber {
  std::string place;
  KodairaFiber fiber;
  long residue_degree = 1;
};

// A base place handed to analyze_fibers explicitly: a label plus either a
// rational root of the fiber coordinate or infinity (nullopt). Needed when
// the coefficient field has extra parameters, where root discovery by
// univariate factorization is not available.
struct PlaceSpec {
  std::string label;
  std::optional<MultiRat> root;
};

namespace detail {

inline long min_exponent_in(const MultiPoly& p, int v) {
  long best = -1;
  for (const auto& [mono, coef] : p.terms) {
    (void)coef;
    long e = static_cast<long>(mono[static_cast<size_t>(v)]);
    if (best < 0 || e < best) best = e;
  }
  return best < 0 ? 0 : best;
}

// Valuation of f at the place fiber = root (root free of the fiber
// variable): shift the fiber variable by root and read off the lowest
// power. The denominator can acquire fiber-variable factors through
// canonicalization, so both halves are inspected.
inline long valuation_at(const MultiRat& f, int v, const MultiRat& root) {
  if (f.is_zero()) throw k3_error("valuation_at: zero function");
  const int nv = f.nvars();
  std::vector<MultiRat> img;
  img.reserve(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) img.push_back(MultiRat::var(nv, i));
  img[static_cast<size_t>(v)] = MultiRat::var(nv, v) + root;
  MultiRat shifted = substitute(f, img, nv);
  return min_exponent_in(shifted.num, v) - min_exponent_in(shifted.den, v);
}

inline long valuation_at_infinity(const MultiRat& f, int v) {
  if (f.is_zero()) throw k3_error("valuation_at: zero function");
  return f.den.degree_in(v) - f.num.degree_in(v);
}

inline long ceil_div(long a, long b) {
  // b > 0; round toward +infinity.
  long q = a / b;
  return q * b < a ? q + 1 : q;
}

// Classify the fiber from the valuation triple of (c4, c6, disc) at a
// place. The model need not be integral or minimal there: the unique twist
// (x, y) -> (pi^{2k} x, pi^{3k} y) shifting the triple by (4k, 6k, 12k)
// into the minimal nonnegative range is applied first. Returns nullopt for
// a smooth fiber.
inline std::optional<KodairaFiber> classify_from_valuations(long vc4, long vc6,
                                                            long vdisc) {
  long k = std::max({ceil_div(-vc4, 4), ceil_div(-vc6, 6),
                     ceil_div(-vdisc, 12)});
  vc4 += 4 * k;
  vc6 += 6 * k;
  vdisc += 12 * k;
  if (vdisc == 0) return std::nullopt;
  return kodaira_from_valuations(vc4, vc6, vdisc);
}

inline void require_supported(const WeierstrassModel& m) {
  if (m.c4.is_zero() || m.c6.is_zero())
    throw k3_error("analyze_fibers: c4 or c6 vanishes identically "
                   "(constant-j edge cases unsupported)");
  if (m.fiber_var < 0)
    throw k3_error("analyze_fibers: model has no fiber variable");
}

} // namespace detail

// Fiber classification at an explicit list of places. The caller is
// responsible for supplying every singular place; places with smooth fiber
// are silently omitted from the result, so over-supplying is harmless.
inline std::vector<AnalyzedFiber>
analyze_fibers(const WeierstrassModel& m, const std::vector<PlaceSpec>& places) {
  detail::require_supported(m);
  const int v = m.fiber_var;
  std::vector<AnalyzedFiber> out;
  for (const auto& pl : places) {
    long vc4, vc6, vd;
    if (pl.root) {
      if (pl.root->num.degree_in(v) > 0 || pl.root->den.degree_in(v) > 0)
        throw k3_error("analyze_fibers: place root involves the fiber "
                       "variable");
      vc4 = detail::valuation_at(m.c4, v, *pl.root);
      vc6 = detail::valuation_at(m.c6, v, *pl.root);
      vd = detail::valuation_at(m.disc, v, *pl.root);
    } else {
      vc4 = detail::valuation_at_infinity(m.c4, v);
      vc6 = detail::valuation_at_infinity(m.c6, v);
      vd = detail::valuation_at_infinity(m.disc, v);
    }
    auto fib = detail::classify_from_valuations(vc4, vc6, vd);
    if (fib) out.push_back(AnalyzedFiber{pl.label, *fib, 1});
  }
  return out;
}

// Automatic place discovery for a model over Q(t): factor the discriminant
// numerator, classify each irreducible factor (conjugate roots share a
// type and are reported once with their residue degree), and always examine
// infinity. Coefficients must be polynomial so that no finite place hides
// in a denominator.
inline std::vector<AnalyzedFiber> analyze_fibers(const WeierstrassModel& m) {
  detail::require_supported(m);
  if (m.names.size() != 1)
    throw k3_error("analyze_fibers: automatic place discovery needs a "
                   "one-variable base; pass places explicitly");
  const int v = m.fiber_var;
  for (const MultiRat* c : {&m.a1, &m.a2, &m.a3, &m.a4, &m.a6})
    if (!c->den.is_constant())
      throw k3_error("analyze_fibers: non-polynomial coefficients "
                     "unsupported in automatic mode");

  // Polynomial valuation by repeated exact division.
  auto divisibility = [&](const MultiPoly& p, const MultiPoly& f) {
    long n = 0;
    MultiPoly r = p;
    for (;;) {
      auto q = mp_divexact(r, f);
      if (!q) return n;
      r = *q;
      ++n;
    }
  };

  MultiPoly dnum = m.disc.num;
  auto fac = factor_univariate_q(dnum, v);
  std::vector<AnalyzedFiber> out;
  MultiPoly c4num = m.c4.num;
  MultiPoly c6num = m.c6.num;
  for (const auto& part : fac.parts) {
    const MultiPoly& f = part.first;
    long vd = part.second;
    long vc4 = divisibility(c4num, f);
    long vc6 = divisibility(c6num, f);
    auto fib = detail::classify_from_valuations(vc4, vc6, vd);
    if (!fib) continue;
    // Label: "t = c" for a linear monic factor t - c, else "f(t) = 0".
    std::string label;
    if (f.degree_in(v) == 1) {
      MultiPoly lead = coeff_in(f, v, 1);
      MultiPoly cst = coeff_in(f, v, 0);
      BigRat c = -(cst.is_zero() ? BigRat(0) : cst.constant_value()) /
                 lead.constant_value();
      label = m.names[0] + " = " + to_string(c);
    } else {
      label = to_string(f, m.names) + " = 0";
    }
    out.push_back(AnalyzedFiber{label, *fib, f.degree_in(v)});
  }
  {
    long vc4 = detail::valuation_at_infinity(m.c4, v);
    long vc6 = detail::valuation_at_infinity(m.c6, v);
    long vd = detail::valuation_at_infinity(m.disc, v);
    auto fib = detail::classify_from_valuations(vc4, vc6, vd);
    if (fib) out.push_back(AnalyzedFiber{m.names[0] + " = oo", *fib, 1});
  }
  return out;
}

// Flatten an analysis into one fiber symbol per geometric place (an
// irreducible place of residue degree d contributes d copies), sorted for
// comparison against classification-table rows.
inline std::vector<std::string>
fiber_symbols(const std::vector<AnalyzedFiber>& fibers) {
  std::vector<std::string> out;
  for (const auto& f : fibers)
    for (long i = 0; i < f.residue_degree; ++i) out.push_back(f.fiber.symbol);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace k3kit
