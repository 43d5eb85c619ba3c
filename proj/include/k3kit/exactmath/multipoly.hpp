#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

// Sparse multivariate polynomial over Q: exponent vector -> coefficient.
// All polynomials entering a binary operation must agree on nvars.
struct MultiPoly {
  int nvars = 0;
  std::map<std::vector<unsigned>, BigRat> terms;

  MultiPoly() = default;
  explicit MultiPoly(int nv) : nvars(nv) {}

  static MultiPoly constant(int nv, const BigRat& c) {
    MultiPoly p(nv);
    if (sgn(c) != 0) p.terms[std::vector<unsigned>(nv, 0)] = c;
    return p;
  }
  static MultiPoly var(int nv, int i, unsigned e = 1) {
    if (i < 0 || i >= nv) throw k3_error("MultiPoly::var: index out of range");
    MultiPoly p(nv);
    std::vector<unsigned> m(nv, 0);
    m[i] = e;
    p.terms[m] = 1;
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 && terms.begin()->first == std::vector<unsigned>(nvars, 0));
  }
  BigRat constant_value() const {
    if (terms.empty()) return BigRat(0);
    if (!is_constant()) throw k3_error("constant_value: nonconstant polynomial");
    return terms.begin()->second;
  }

  void add_term(const std::vector<unsigned>& m, const BigRat& c) {
    if (sgn(c) == 0) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) terms.erase(it);
    }
  }

  long degree_in(int v) const {
    long d = -1;
    for (const auto& [m, c] : terms) d = std::max(d, static_cast<long>(m[v]));
    return d;
  }
  long total_degree() const {
    long d = -1;
    for (const auto& [m, c] : terms) {
      long s = 0;
      for (unsigned e : m) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  bool operator==(const MultiPoly& o) const {
    return nvars == o.nvars && terms == o.terms;
  }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }
};

inline void check_same_ring(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars != b.nvars) throw k3_error("MultiPoly: mixed variable counts");
}

inline MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  MultiPoly r = a;
  for (const auto& [m, c] : b.terms) r.add_term(m, c);
  return r;
}
inline MultiPoly operator-(const MultiPoly& a) {
  MultiPoly r = a;
  for (auto& [m, c] : r.terms) c = -c;
  return r;
}
inline MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  MultiPoly r = a;
  for (const auto& [m, c] : b.terms) r.add_term(m, -c);
  return r;
}
inline MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  MultiPoly r(a.nvars);
  std::vector<unsigned> m(static_cast<size_t>(a.nvars));
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      for (int i = 0; i < a.nvars; ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  return r;
}
inline MultiPoly operator*(const BigRat& c, const MultiPoly& a) {
  MultiPoly r(a.nvars);
  if (sgn(c) == 0) return r;
  r = a;
  for (auto& [m, v] : r.terms) v *= c;
  return r;
}
inline MultiPoly operator*(const MultiPoly& a, const BigRat& c) { return c * a; }
inline MultiPoly operator/(const MultiPoly& a, const BigRat& c) {
  if (sgn(c) == 0) throw k3_error("MultiPoly: division by zero scalar");
  return BigRat(1) / c * a;
}

inline MultiPoly mp_pow(const MultiPoly& a, unsigned e) {
  MultiPoly r = MultiPoly::constant(a.nvars, 1), b = a;
  while (e) {
    if (e & 1) r = r * b;
    if (e >>= 1) b = b * b;
  }
  return r;
}

inline MultiPoly derivative(const MultiPoly& a, int v) {
  MultiPoly r(a.nvars);
  for (const auto& [m, c] : a.terms) {
    if (m[v] == 0) continue;
    std::vector<unsigned> mm = m;
    --mm[v];
    r.add_term(mm, c * BigRat(m[v]));
  }
  return r;
}

// Coefficient of x_v^k, with the v-exponent dropped to zero (nvars unchanged).
inline MultiPoly coeff_in(const MultiPoly& a, int v, unsigned k) {
  MultiPoly r(a.nvars);
  for (const auto& [m, c] : a.terms)
    if (m[v] == k) {
      std::vector<unsigned> mm = m;
      mm[v] = 0;
      r.add_term(mm, c);
    }
  return r;
}

inline std::vector<MultiPoly> coeffs_in(const MultiPoly& a, int v) {
  long d = a.degree_in(v);
  std::vector<MultiPoly> out;
  for (long k = 0; k <= std::max(d, 0L); ++k)
    out.push_back(coeff_in(a, v, static_cast<unsigned>(k)));
  if (d < 0) out.assign(1, MultiPoly(a.nvars));
  return out;
}

inline BigRat rat_gcd(const BigRat& a, const BigRat& b) {
  if (sgn(a) == 0) return abs(b);
  if (sgn(b) == 0) return abs(a);
  BigInt n = gcd(numer(a) * denom(b), numer(b) * denom(a));
  BigInt d = denom(a) * denom(b);
  BigRat r(n, d);
  r.canonicalize();
  return abs(r);
}

// Signed content: gcd of the coefficients carrying the sign of the
// lex-leading one, so primitive_part always has positive leading coefficient.
inline BigRat content(const MultiPoly& a) {
  if (a.is_zero()) return BigRat(0);
  BigRat g(0);
  for (const auto& [m, c] : a.terms) g = rat_gcd(g, c);
  if (sgn(a.terms.rbegin()->second) < 0) g = -g;
  return g;
}

inline MultiPoly primitive_part(const MultiPoly& a) {
  if (a.is_zero()) return a;
  return a / content(a);
}

// Exact single-divisor division using lex leading terms; nullopt if b does not
// divide a in Q[x_1..x_n].
inline std::optional<MultiPoly> mp_divexact(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  if (b.is_zero()) throw k3_error("mp_divexact: division by zero");
  MultiPoly rem = a, q(a.nvars);
  const auto& ltb = *b.terms.rbegin();
  std::vector<unsigned> m(static_cast<size_t>(a.nvars));
  while (!rem.is_zero()) {
    const auto& lta = *rem.terms.rbegin();
    for (int i = 0; i < a.nvars; ++i) {
      if (lta.first[i] < ltb.first[i]) return std::nullopt;
      m[i] = lta.first[i] - ltb.first[i];
    }
    BigRat c = lta.second / ltb.second;
    q.add_term(m, c);
    MultiPoly t(a.nvars);
    t.terms[m] = c;
    rem = rem - t * b;
  }
  return q;
}

// Pseudo-remainder of a by b in the variable v: lc(b)^k * a reduced until
// deg_v < deg_v(b). Exact in Q[..], no fractions of polynomials.
inline MultiPoly pseudo_rem(MultiPoly a, const MultiPoly& b, int v) {
  check_same_ring(a, b);
  long db = b.degree_in(v);
  if (db < 0) throw k3_error("pseudo_rem: zero divisor");
  MultiPoly lcb = coeff_in(b, v, static_cast<unsigned>(db));
  for (;;) {
    long da = a.degree_in(v);
    if (da < db) return a;
    MultiPoly lca = coeff_in(a, v, static_cast<unsigned>(da));
    MultiPoly shift = MultiPoly::var(a.nvars, v, static_cast<unsigned>(da - db));
    a = lcb * a - lca * shift * b;
    if (a.degree_in(v) >= da) throw k3_error("pseudo_rem: no progress");
  }
}

inline MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b);

inline MultiPoly content_in(const MultiPoly& a, int v) {
  std::vector<MultiPoly> cs = coeffs_in(a, v);
  MultiPoly g(a.nvars);
  for (const auto& c : cs)
    if (!c.is_zero()) g = g.is_zero() ? c : mp_gcd(g, c);
  return g;
}

// Primitive-PRS gcd with recursive contents. The result is primitive with
// positive lex-leading coefficient; a final exact-division check makes the
// answer unconditional.
// Substitute the single variable v by an integer; arity is preserved and the
// result has degree 0 in v.
inline MultiPoly eval_var_int(const MultiPoly& f, int v, const BigInt& xi) {
  std::vector<BigInt> pw{BigInt(1)};
  auto power = [&](unsigned e) -> const BigInt& {
    while (pw.size() <= e) pw.push_back(pw.back() * xi);
    return pw[e];
  };
  MultiPoly r(f.nvars);
  std::vector<unsigned> m(static_cast<size_t>(f.nvars));
  for (const auto& [mono, c] : f.terms) {
    m = mono;
    unsigned e = m[static_cast<size_t>(v)];
    m[static_cast<size_t>(v)] = 0;
    r.add_term(m, c * BigRat(power(e)));
  }
  return r;
}

// Heuristic gcd by evaluation at a large integer point, one variable at a
// time, recovering the eliminated variable from balanced base-xi digits.
// The rational content is split off first at every level: the content of the
// gcd is the gcd of the contents, and only the primitive parts go through the
// evaluation step. That keeps the integer content of evaluated images intact
// on the way down (it carries the digits of the eliminated variables) while
// still letting the lift strip the spurious factor the bottom-level integer
// gcd picks up from the cofactor values. The evaluation point sits above a
// Gelfond-style divisor height bound, so a lifted candidate that passes both
// trial divisions is the full gcd, not a proper divisor. May give up
// (nullopt); the caller then falls back to a remainder sequence.
inline std::optional<MultiPoly> mp_gcd_heuristic(const MultiPoly& a, const MultiPoly& b) {
  int v = -1;
  for (int i = a.nvars - 1; i >= 0; --i)
    if (a.degree_in(i) > 0 || b.degree_in(i) > 0) { v = i; break; }
  if (v < 0) {
    BigRat g = rat_gcd(a.constant_value(), b.constant_value());
    return MultiPoly::constant(a.nvars, g);
  }
  BigRat c = rat_gcd(content(a), content(b));
  MultiPoly pa = primitive_part(a), pb = primitive_part(b);
  long da = pa.degree_in(v), db = pb.degree_in(v);
  if (da == 0) return c * mp_gcd(pa, content_in(pb, v));
  if (db == 0) return c * mp_gcd(content_in(pa, v), pb);

  // Divisor height bound: any factor of f has coefficients below
  // e^(sum of per-variable degrees of f) * max |coefficient of f|, and
  // 2^(3*D/2 + 3) dominates e^D. Take the smaller bound of the two inputs.
  auto height_bound = [](const MultiPoly& f) -> BigInt {
    BigInt n = 0;
    for (const auto& [m, cf] : f.terms) n = std::max(n, BigInt(abs(numer(cf))));
    long dsum = 0;
    for (int i = 0; i < f.nvars; ++i) dsum += std::max(f.degree_in(i), 0L);
    unsigned e = static_cast<unsigned>(std::min(3 * dsum / 2 + 3, 240L));
    return (BigInt(1) << e) * (n + 1);
  };
  BigInt bound = std::min(height_bound(pa), height_bound(pb));
  BigInt xi = 2 * bound + 29;

  long dgmax = std::min(da, db);
  for (int attempt = 0; attempt < 6; ++attempt, xi = xi * 5 + 17) {
    MultiPoly ga = eval_var_int(pa, v, xi), gb = eval_var_int(pb, v, xi);
    if (ga.is_zero() || gb.is_zero()) continue;  // xi hit a root; enlarge
    auto h = mp_gcd_heuristic(ga, gb);
    if (!h) continue;
    // lift back: coefficients of v^e are the balanced base-xi digits
    MultiPoly G(a.nvars), W = *h;
    std::vector<unsigned> m(static_cast<size_t>(a.nvars));
    bool ok = true;
    for (unsigned e = 0; !W.is_zero(); ++e) {
      if (static_cast<long>(e) > dgmax) { ok = false; break; }
      MultiPoly next(a.nvars);
      for (const auto& [mono, w] : W.terms) {
        BigInt ci = numer(w);
        BigInt digit = sym_mod(ci, xi);
        if (sgn(digit) != 0) {
          m = mono;
          m[static_cast<size_t>(v)] = e;
          G.add_term(m, BigRat(digit));
        }
        BigInt rest = ci - digit;
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), xi.get_mpz_t());
        if (sgn(rest) != 0) next.add_term(mono, BigRat(rest));
      }
      W = std::move(next);
    }
    if (!ok || G.is_zero()) continue;
    // Gcds of primitive polynomials are primitive, so this strips only the
    // spurious integer factor inherited from the bottom-level integer gcd.
    G = primitive_part(G);
    if (mp_divexact(pa, G) && mp_divexact(pb, G)) return c * G;
  }
  return std::nullopt;
}

inline MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b) {
  check_same_ring(a, b);
  if (a.is_zero()) return b.is_zero() ? b : primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  if (a.is_constant() || b.is_constant())
    return MultiPoly::constant(a.nvars, 1);

  // Strip the largest common monomial up front; the Euclidean stages below
  // would otherwise drag these powers through every step.
  auto min_exps = [](const MultiPoly& p) {
    std::vector<unsigned> mu(p.terms.begin()->first);
    for (const auto& [m, c] : p.terms)
      for (size_t i = 0; i < mu.size(); ++i) mu[i] = std::min(mu[i], m[i]);
    return mu;
  };
  auto shift_down = [](const MultiPoly& p, const std::vector<unsigned>& mu) {
    MultiPoly r(p.nvars);
    std::vector<unsigned> m2;
    for (const auto& [m, c] : p.terms) {
      m2 = m;
      for (size_t i = 0; i < m2.size(); ++i) m2[i] -= mu[i];
      r.terms.emplace(m2, c);
    }
    return r;
  };
  std::vector<unsigned> mua = min_exps(a), mub = min_exps(b);
  std::vector<unsigned> common(mua.size());
  for (size_t i = 0; i < common.size(); ++i) common[i] = std::min(mua[i], mub[i]);
  MultiPoly mono(a.nvars);
  mono.terms.emplace(common, BigRat(1));
  MultiPoly pa = primitive_part(shift_down(a, mua));
  MultiPoly pb = primitive_part(shift_down(b, mub));

  MultiPoly g(a.nvars);
  if (pa == pb) {
    g = pa;
  } else if (pa.is_constant() || pb.is_constant()) {
    g = MultiPoly::constant(a.nvars, 1);
  } else if (mp_divexact(pa, pb)) {
    g = pb;
  } else if (mp_divexact(pb, pa)) {
    g = pa;
  } else if (auto h = mp_gcd_heuristic(pa, pb)) {
    g = primitive_part(*h);
  } else {
    // fallback: primitive pseudo-remainder sequence
    int v = -1;
    for (int i = 0; i < a.nvars; ++i)
      if (pa.degree_in(i) > 0 && pb.degree_in(i) > 0) { v = i; break; }
    if (v < 0) {
      for (int i = 0; i < a.nvars; ++i)
        if (pa.degree_in(i) > 0) { g = mp_gcd(content_in(pa, i), pb); break; }
      if (g.is_zero()) throw k3_error("mp_gcd: unreachable");
    } else {
      MultiPoly ca = content_in(pa, v), cb = content_in(pb, v);
      MultiPoly g_cont = mp_gcd(ca, cb);
      MultiPoly qa = primitive_part(*mp_divexact(pa, ca));
      MultiPoly qb = primitive_part(*mp_divexact(pb, cb));
      if (qa.degree_in(v) < qb.degree_in(v)) std::swap(qa, qb);
      while (!qb.is_zero()) {
        MultiPoly r = pseudo_rem(qa, qb, v);
        qa = qb;
        if (r.is_zero()) {
          qb = r;
        } else {
          MultiPoly cr = content_in(r, v);
          qb = primitive_part(*mp_divexact(r, cr));
        }
      }
      g = primitive_part(g_cont * primitive_part(qa));
    }
  }

  g = primitive_part(mono * g);
  if (!mp_divexact(a, g) || !mp_divexact(b, g))
    throw k3_error("mp_gcd: verification failed");
  return g;
}

// Determinant over the polynomial ring by fraction-free Bareiss elimination;
// used for resultants.
inline MultiPoly mp_det(std::vector<std::vector<MultiPoly>> m) {
  size_t n = m.size();
  if (n == 0) throw k3_error("mp_det: empty matrix");
  int nv = m[0][0].nvars;
  MultiPoly prev = MultiPoly::constant(nv, 1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t piv = n;
      for (size_t i = k + 1; i < n; ++i)
        if (!m[i][k].is_zero()) { piv = i; break; }
      if (piv == n) return MultiPoly(nv);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        MultiPoly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto q = mp_divexact(t, prev);
        if (!q) throw k3_error("mp_det: inexact Bareiss step");
        m[i][j] = *q;
      }
    prev = m[k][k];
  }
  MultiPoly d = m[n - 1][n - 1];
  return sign > 0 ? d : -d;
}

// Resultant of a and b with respect to x_v (Sylvester determinant).
inline MultiPoly resultant(const MultiPoly& a, const MultiPoly& b, int v) {
  check_same_ring(a, b);
  long da = a.degree_in(v), db = b.degree_in(v);
  if (da < 0 || db < 0) throw k3_error("resultant: zero argument");
  if (da == 0 && db == 0) return MultiPoly::constant(a.nvars, 1);
  auto ac = coeffs_in(a, v), bc = coeffs_in(b, v);
  size_t n = static_cast<size_t>(da + db);
  std::vector<std::vector<MultiPoly>> s(n, std::vector<MultiPoly>(n, MultiPoly(a.nvars)));
  for (long i = 0; i < db; ++i)
    for (long j = 0; j <= da; ++j) s[i][i + j] = ac[static_cast<size_t>(da - j)];
  for (long i = 0; i < da; ++i)
    for (long j = 0; j <= db; ++j) s[db + i][i + j] = bc[static_cast<size_t>(db - j)];
  return mp_det(std::move(s));
}

inline BigRat eval(const MultiPoly& a, const std::vector<BigRat>& x) {
  if (static_cast<int>(x.size()) != a.nvars) throw k3_error("eval: arity mismatch");
  std::vector<std::vector<BigRat>> pw(a.nvars);
  for (int i = 0; i < a.nvars; ++i) pw[i].push_back(BigRat(1));
  auto power = [&](int i, unsigned e) -> const BigRat& {
    auto& v = pw[i];
    while (v.size() <= e) v.push_back(v.back() * x[i]);
    return v[e];
  };
  BigRat r(0);
  for (const auto& [m, c] : a.terms) {
    BigRat t = c;
    for (int i = 0; i < a.nvars; ++i)
      if (m[i]) t *= power(i, m[i]);
    r += t;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rational functions.

struct MultiRat {
  MultiPoly num, den;

  MultiRat() : num(0), den(MultiPoly::constant(0, 1)) {}
  explicit MultiRat(MultiPoly n) : num(std::move(n)) {
    den = MultiPoly::constant(num.nvars, 1);
    canonicalize();
  }
  MultiRat(MultiPoly n, MultiPoly d) : num(std::move(n)), den(std::move(d)) {
    canonicalize();
  }
  static MultiRat constant(int nv, const BigRat& c) {
    return MultiRat(MultiPoly::constant(nv, c));
  }
  static MultiRat var(int nv, int i) { return MultiRat(MultiPoly::var(nv, i)); }

  int nvars() const { return num.nvars; }
  bool is_zero() const { return num.is_zero(); }
  bool is_constant() const { return num.is_constant() && den.is_constant(); }
  BigRat constant_value() const { return num.constant_value() / den.constant_value(); }

  // Canonical form: den primitive with positive lex-leading coefficient,
  // gcd(primitive(num), den) = 1, rational content carried on num. Equal
  // fractions then compare componentwise.
  void canonicalize() {
    check_same_ring(num, den);
    if (den.is_zero()) throw k3_error("MultiRat: zero denominator");
    if (num.is_zero()) {
      den = MultiPoly::constant(num.nvars, 1);
      return;
    }
    BigRat cn = content(num), cd = content(den);
    MultiPoly pn = num / cn, pd = den / cd;
    MultiPoly g = mp_gcd(pn, pd);
    if (!g.is_constant()) {
      pn = *mp_divexact(pn, g);
      pd = *mp_divexact(pd, g);
    }
    num = (cn / cd) * pn;
    den = pd;
  }

  bool operator==(const MultiRat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const MultiRat& o) const { return !(*this == o); }
};

inline MultiRat operator+(const MultiRat& a, const MultiRat& b) {
  return MultiRat(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline MultiRat operator-(const MultiRat& a) { return MultiRat(-a.num, a.den); }
inline MultiRat operator-(const MultiRat& a, const MultiRat& b) {
  return MultiRat(a.num * b.den - b.num * a.den, a.den * b.den);
}
inline MultiRat operator*(const MultiRat& a, const MultiRat& b) {
  return MultiRat(a.num * b.num, a.den * b.den);
}
inline MultiRat operator/(const MultiRat& a, const MultiRat& b) {
  if (b.is_zero()) throw k3_error("MultiRat: division by zero");
  return MultiRat(a.num * b.den, a.den * b.num);
}
inline MultiRat operator*(const BigRat& c, const MultiRat& a) {
  return MultiRat(c * a.num, a.den);
}

inline MultiRat mr_pow(const MultiRat& a, long e) {
  if (e < 0) {
    if (a.is_zero()) throw k3_error("mr_pow: zero to negative power");
    return MultiRat(mp_pow(a.den, static_cast<unsigned>(-e)),
                    mp_pow(a.num, static_cast<unsigned>(-e)));
  }
  return MultiRat(mp_pow(a.num, static_cast<unsigned>(e)),
                  mp_pow(a.den, static_cast<unsigned>(e)));
}

// Full ring homomorphism: x_i -> img[i] (rational functions in a possibly
// different variable set; all img must share out_nvars).
inline MultiRat substitute(const MultiPoly& f, const std::vector<MultiRat>& img,
                           int out_nvars) {
  if (static_cast<int>(img.size()) != f.nvars)
    throw k3_error("substitute: arity mismatch");
  for (const auto& g : img)
    if (g.nvars() != out_nvars) throw k3_error("substitute: image arity mismatch");

  // Accumulate over the common denominator prod den_i^{E_i} so that only the
  // final result needs reducing; per-term MultiRat arithmetic would run a gcd
  // for every addition.
  std::vector<unsigned> emax(img.size(), 0);
  for (const auto& [m, c] : f.terms)
    for (size_t i = 0; i < img.size(); ++i) emax[i] = std::max(emax[i], m[i]);

  std::vector<std::vector<MultiPoly>> num_pw(img.size()), den_pw(img.size());
  for (size_t i = 0; i < img.size(); ++i) {
    num_pw[i].push_back(MultiPoly::constant(out_nvars, BigRat(1)));
    den_pw[i].push_back(MultiPoly::constant(out_nvars, BigRat(1)));
  }
  auto power = [&](std::vector<std::vector<MultiPoly>>& pw, const MultiPoly& base,
                   size_t i, unsigned e) -> const MultiPoly& {
    auto& v = pw[i];
    while (v.size() <= e) v.push_back(v.back() * base);
    return v[e];
  };

  MultiPoly total_num(out_nvars);
  for (const auto& [m, c] : f.terms) {
    MultiPoly t = MultiPoly::constant(out_nvars, c);
    for (size_t i = 0; i < img.size(); ++i) {
      if (m[i]) t = t * power(num_pw, img[i].num, i, m[i]);
      unsigned co = emax[i] - m[i];
      if (co) t = t * power(den_pw, img[i].den, i, co);
    }
    total_num = total_num + t;
  }
  MultiPoly total_den = MultiPoly::constant(out_nvars, BigRat(1));
  for (size_t i = 0; i < img.size(); ++i)
    if (emax[i]) total_den = total_den * power(den_pw, img[i].den, i, emax[i]);
  return MultiRat(std::move(total_num), std::move(total_den));
}

inline MultiRat substitute(const MultiRat& f, const std::vector<MultiRat>& img,
                           int out_nvars) {
  MultiRat d = substitute(f.den, img, out_nvars);
  if (d.is_zero()) throw k3_error("substitute: image lies on a pole");
  return substitute(f.num, img, out_nvars) / d;
}

// Polynomial-image substitution (stays in the polynomial ring).
inline MultiPoly substitute_poly(const MultiPoly& f, const std::vector<MultiPoly>& img,
                                 int out_nvars) {
  std::vector<std::vector<MultiPoly>> pw(img.size());
  if (static_cast<int>(img.size()) != f.nvars)
    throw k3_error("substitute_poly: arity mismatch");
  for (size_t i = 0; i < img.size(); ++i)
    pw[i].push_back(MultiPoly::constant(out_nvars, BigRat(1)));
  auto power = [&](size_t i, unsigned e) -> const MultiPoly& {
    auto& v = pw[i];
    while (v.size() <= e) v.push_back(v.back() * img[i]);
    return v[e];
  };
  MultiPoly r(out_nvars);
  for (const auto& [m, c] : f.terms) {
    MultiPoly t = MultiPoly::constant(out_nvars, c);
    for (int i = 0; i < f.nvars; ++i)
      if (m[i]) t = t * power(static_cast<size_t>(i), m[i]);
    r = r + t;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Canonical text form: terms in descending lex order, '*' between factors,
// '^' on exponents >= 2. parse_poly inverts to_string bit-for-bit.

inline std::string to_string(const MultiPoly& f, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != f.nvars)
    throw k3_error("to_string: name count mismatch");
  if (f.is_zero()) return "0";
  std::string out;
  for (auto it = f.terms.rbegin(); it != f.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    BigRat ac = abs(c);
    if (out.empty()) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    bool has_mono = false;
    for (unsigned e : m) has_mono = has_mono || e > 0;
    std::string mono;
    for (int i = 0; i < f.nvars; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] >= 2) mono += "^" + std::to_string(m[i]);
    }
    if (!has_mono) {
      out += to_string(ac);
    } else if (ac == 1) {
      out += mono;
    } else {
      out += to_string(ac) + "*" + mono;
    }
  }
  return out;
}

inline std::string to_string(const MultiRat& f, const std::vector<std::string>& names) {
  std::string n = to_string(f.num, names);
  if (f.den == MultiPoly::constant(f.nvars(), 1)) return n;
  return "(" + n + ")/(" + to_string(f.den, names) + ")";
}

inline MultiPoly parse_poly(const std::string& s, const std::vector<std::string>& names) {
  int nv = static_cast<int>(names.size());
  MultiPoly out(nv);
  size_t i = 0;
  auto skip_ws = [&] { while (i < s.size() && s[i] == ' ') ++i; };
  auto read_uint = [&]() -> std::string {
    size_t j = i;
    while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw k3_error("parse_poly: expected digits at " + std::to_string(i));
    std::string t = s.substr(i, j - i);
    i = j;
    return t;
  };
  auto read_name = [&]() -> int {
    int best = -1;
    size_t best_len = 0;
    for (int k = 0; k < nv; ++k) {
      const std::string& nm = names[k];
      if (nm.size() > best_len && s.compare(i, nm.size(), nm) == 0) {
        best = k;
        best_len = nm.size();
      }
    }
    if (best >= 0) i += best_len;
    return best;
  };
  skip_ws();
  bool first = true;
  while (i < s.size()) {
    int sign = 1;
    if (!first || s[i] == '+' || s[i] == '-') {
      if (i >= s.size() || (s[i] != '+' && s[i] != '-'))
        throw k3_error("parse_poly: expected sign at " + std::to_string(i));
      if (s[i] == '-') sign = -1;
      ++i;
      skip_ws();
    }
    first = false;
    BigRat coeff(1);
    std::vector<unsigned> mono(static_cast<size_t>(nv), 0);
    bool saw_factor = false;
    for (;;) {
      if (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
        std::string numpart = read_uint();
        std::string lit = numpart;
        if (i < s.size() && s[i] == '/') {
          ++i;
          lit += "/" + read_uint();
        }
        coeff *= parse_rat(lit);
        saw_factor = true;
      } else {
        int v = read_name();
        if (v < 0) {
          if (!saw_factor) throw k3_error("parse_poly: expected term at " + std::to_string(i));
          break;
        }
        unsigned e = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          e = static_cast<unsigned>(std::stoul(read_uint()));
        }
        mono[static_cast<size_t>(v)] += e;
        saw_factor = true;
      }
      if (i < s.size() && s[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    out.add_term(mono, sign > 0 ? coeff : -coeff);
    skip_ws();
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw k3_error("parse_poly: trailing junk at " + std::to_string(i));
  }
  return out;
}

}  // namespace k3kit
