#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "k3kit/exactmath/multipoly.hpp"
#include "k3kit/exactmath/prime_field.hpp"
#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

// Univariate polynomials: c[i] is the coefficient of x^i.
using FpPoly = std::vector<uint64_t>;
using ZPoly = std::vector<BigInt>;
using QPoly = std::vector<BigRat>;

inline void fp_trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long fp_deg(const FpPoly& f) { return static_cast<long>(f.size()) - 1; }

inline FpPoly fp_add(const Fp& F, FpPoly a, const FpPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
  fp_trim(a);
  return a;
}
inline FpPoly fp_sub(const Fp& F, FpPoly a, const FpPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  fp_trim(a);
  return a;
}
inline FpPoly fp_mul(const Fp& F, const FpPoly& a, const FpPoly& b) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  fp_trim(r);
  return r;
}
inline FpPoly fp_scale(const Fp& F, FpPoly a, uint64_t c) {
  for (auto& x : a) x = F.mul(x, c);
  fp_trim(a);
  return a;
}

inline std::pair<FpPoly, FpPoly> fp_divmod(const Fp& F, FpPoly a, const FpPoly& b) {
  if (b.empty()) throw k3_error("fp_divmod: division by zero");
  long db = fp_deg(b);
  uint64_t inv_lc = F.inv(b.back());
  FpPoly q;
  while (fp_deg(a) >= db) {
    long da = fp_deg(a);
    uint64_t c = F.mul(a.back(), inv_lc);
    if (static_cast<long>(q.size()) < da - db + 1) q.resize(da - db + 1, 0);
    q[da - db] = c;
    for (long i = 0; i <= db; ++i)
      a[da - db + i] = F.sub(a[da - db + i], F.mul(c, b[i]));
    fp_trim(a);
  }
  return {q, a};
}

inline FpPoly fp_monic(const Fp& F, FpPoly a) {
  if (a.empty()) return a;
  return fp_scale(F, std::move(a), F.inv(a.back()));
}

inline FpPoly fp_gcd(const Fp& F, FpPoly a, FpPoly b) {
  while (!b.empty()) {
    FpPoly r = fp_divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(F, a);
}

// Extended Euclid: returns (g, s, t) monic with s*a + t*b = g.
inline std::array<FpPoly, 3> fp_xgcd(const Fp& F, FpPoly a, FpPoly b) {
  FpPoly s0{1}, s1{}, t0{}, t1{1};
  while (!b.empty()) {
    auto [q, r] = fp_divmod(F, a, b);
    a = std::move(b);
    b = std::move(r);
    FpPoly s2 = fp_sub(F, s0, fp_mul(F, q, s1));
    FpPoly t2 = fp_sub(F, t0, fp_mul(F, q, t1));
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  if (a.empty()) return {a, s0, t0};
  uint64_t c = F.inv(a.back());
  return {fp_scale(F, a, c), fp_scale(F, s0, c), fp_scale(F, t0, c)};
}

inline FpPoly fp_derivative(const Fp& F, const FpPoly& f) {
  FpPoly r;
  for (size_t i = 1; i < f.size(); ++i)
    r.push_back(F.mul(f[i], i % F.modulus()));
  fp_trim(r);
  return r;
}

inline FpPoly fp_powmod(const Fp& F, FpPoly base, const BigInt& e, const FpPoly& mod) {
  FpPoly r{1};
  base = fp_divmod(F, std::move(base), mod).second;
  for (long i = mpz_sizeinbase(e.get_mpz_t(), 2) - 1; i >= 0; --i) {
    r = fp_divmod(F, fp_mul(F, r, r), mod).second;
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))
      r = fp_divmod(F, fp_mul(F, r, base), mod).second;
  }
  return r;
}

// Deterministic pseudo-randomness for equal-degree splitting: runs must be
// reproducible, so seed from the polynomial itself.
struct SplitRng {
  uint64_t s;
  explicit SplitRng(const FpPoly& f) : s(0x9e3779b97f4a7c15ull) {
    for (uint64_t c : f) s = (s ^ c) * 0xbf58476d1ce4e5b9ull;
    if (s == 0) s = 1;
  }
  uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
};

inline std::vector<FpPoly> fp_equal_degree_split(const Fp& F, const FpPoly& f, long d) {
  std::vector<FpPoly> work{fp_monic(F, f)}, done;
  SplitRng rng(f);
  while (!work.empty()) {
    FpPoly g = std::move(work.back());
    work.pop_back();
    if (fp_deg(g) == d) {
      done.push_back(std::move(g));
      continue;
    }
    for (;;) {
      FpPoly r(static_cast<size_t>(fp_deg(g)), 0);
      for (auto& c : r) c = rng.next() % F.modulus();
      fp_trim(r);
      if (r.empty()) continue;
      FpPoly t;
      if (F.modulus() == 2) {
        // trace map sum r^{2^i}, i < d
        FpPoly acc = fp_divmod(F, r, g).second, sum = acc;
        for (long i = 1; i < d; ++i) {
          acc = fp_divmod(F, fp_mul(F, acc, acc), g).second;
          sum = fp_add(F, sum, acc);
        }
        t = sum;
      } else {
        BigInt e = (int_pow(BigInt(static_cast<unsigned long>(F.modulus())),
                            static_cast<unsigned long>(d)) - 1) / 2;
        t = fp_powmod(F, r, e, g);
        if (!t.empty()) t[0] = F.sub(t[0], 1);
        else t = FpPoly{F.neg(1)};
        fp_trim(t);
      }
      FpPoly h = fp_gcd(F, t, g);
      if (fp_deg(h) > 0 && fp_deg(h) < fp_deg(g)) {
        auto [quot, remd] = fp_divmod(F, g, h);
        if (!remd.empty()) throw k3_error("edf: inexact split");
        work.push_back(fp_monic(F, quot));
        work.push_back(fp_monic(F, h));
        break;
      }
    }
  }
  return done;
}

// Coefficient-wise p-th root of g(x^p); valid over F_p where c^(1/p) = c.
inline FpPoly fp_pth_root(const Fp& F, const FpPoly& f) {
  FpPoly r;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i % F.modulus() == 0) {
      r.push_back(f[i]);
    } else if (f[i] != 0) {
      throw k3_error("fp_pth_root: not a p-th power");
    }
  }
  fp_trim(r);
  return r;
}

inline std::vector<std::pair<FpPoly, int>> fp_squarefree(const Fp& F, FpPoly f, int mult = 1) {
  std::vector<std::pair<FpPoly, int>> out;
  f = fp_monic(F, std::move(f));
  if (fp_deg(f) <= 0) return out;
  FpPoly df = fp_derivative(F, f);
  if (df.empty()) {
    FpPoly g = fp_pth_root(F, f);
    auto sub = fp_squarefree(F, g, mult * static_cast<int>(F.modulus()));
    out.insert(out.end(), sub.begin(), sub.end());
    return out;
  }
  FpPoly g = fp_gcd(F, f, df);
  FpPoly w = fp_divmod(F, f, g).first;
  int i = 1;
  while (fp_deg(w) > 0) {
    FpPoly y = fp_gcd(F, w, g);
    FpPoly z = fp_divmod(F, w, y).first;
    if (fp_deg(z) > 0) out.emplace_back(fp_monic(F, z), mult * i);
    ++i;
    w = std::move(y);
    g = fp_divmod(F, g, w).first;
  }
  if (fp_deg(g) > 0) {
    FpPoly h = fp_pth_root(F, g);
    auto sub = fp_squarefree(F, h, mult * static_cast<int>(F.modulus()));
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

// Full factorization of a nonzero univariate polynomial over F_p.
// Returns (leading unit, list of (monic irreducible, multiplicity)),
// deterministically ordered.
inline std::pair<uint64_t, std::vector<std::pair<FpPoly, int>>> factor_fp(const Fp& F,
                                                                          FpPoly f) {
  fp_trim(f);
  if (f.empty()) throw k3_error("factor_fp: zero polynomial");
  uint64_t unit = f.back();
  std::vector<std::pair<FpPoly, int>> out;
  for (auto& [sq, mult] : fp_squarefree(F, f)) {
    // distinct-degree, then equal-degree
    FpPoly rest = sq;
    FpPoly h{0, 1};  // x
    long d = 0;
    while (fp_deg(rest) > 0 && 2 * (d + 1) <= fp_deg(rest)) {
      ++d;
      h = fp_powmod(F, h, BigInt(static_cast<unsigned long>(F.modulus())), rest);
      FpPoly hx = h;
      if (hx.size() < 2) hx.resize(2, 0);
      hx[1] = F.sub(hx[1], 1);
      fp_trim(hx);
      FpPoly g = fp_gcd(F, hx, rest);
      if (fp_deg(g) > 0) {
        for (auto& irr : fp_equal_degree_split(F, g, d)) out.emplace_back(irr, mult);
        rest = fp_divmod(F, rest, g).first;
        h = fp_divmod(F, h, rest).second;
      }
    }
    if (fp_deg(rest) > 0) out.emplace_back(fp_monic(F, rest), mult);
  }
  std::sort(out.begin(), out.end());
  return {unit, out};
}

// ---------------------------------------------------------------------------
// Factorization over Q: Zassenhaus (factor mod p, linear Hensel lift, subset
// recombination). Degree is capped; callers needing more should not exist in
// this library.

inline void z_trim(ZPoly& f) {
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
}
inline long z_deg(const ZPoly& f) { return static_cast<long>(f.size()) - 1; }

inline ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  z_trim(r);
  return r;
}

inline BigInt z_content(const ZPoly& f) {
  BigInt g = 0;
  for (const auto& c : f) g = gcd(g, c);
  if (!f.empty() && sgn(f.back()) < 0) g = -g;
  return g;
}

inline ZPoly z_primitive(ZPoly f) {
  BigInt c = z_content(f);
  if (sgn(c) == 0) return f;
  for (auto& x : f) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  return f;
}

// Exact division test; returns quotient iff b | a in Z[x].
inline std::optional<ZPoly> z_divexact(ZPoly a, const ZPoly& b) {
  if (b.empty()) throw k3_error("z_divexact: zero divisor");
  ZPoly q;
  while (!a.empty()) {
    if (z_deg(a) < z_deg(b)) return std::nullopt;
    BigInt rq, rr;
    mpz_tdiv_qr(rq.get_mpz_t(), rr.get_mpz_t(), a.back().get_mpz_t(),
                b.back().get_mpz_t());
    if (sgn(rr) != 0) return std::nullopt;
    long shift = z_deg(a) - z_deg(b);
    if (static_cast<long>(q.size()) < shift + 1) q.resize(shift + 1);
    q[shift] = rq;
    for (long i = 0; i <= z_deg(b); ++i) a[shift + i] -= rq * b[i];
    z_trim(a);
  }
  z_trim(q);
  return q;
}

inline ZPoly zm_reduce(ZPoly f, const BigInt& m) {
  for (auto& c : f) {
    c %= m;
    if (sgn(c) < 0) c += m;
  }
  z_trim(f);
  return f;
}

inline ZPoly zm_mul(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  return zm_reduce(z_mul(a, b), m);
}

inline ZPoly z_from_fp(const FpPoly& f) {
  ZPoly r;
  for (uint64_t c : f) r.emplace_back(static_cast<unsigned long>(c));
  z_trim(r);
  return r;
}
inline FpPoly fp_from_z(const Fp& F, const ZPoly& f) {
  FpPoly r;
  for (const auto& c : f) r.push_back(F.reduce(c));
  fp_trim(r);
  return r;
}

// One linear Hensel step for a monic pair: from f = g h (mod p^j) to p^{j+1},
// with fixed Bezout s g + t h = 1 (mod p).
struct HenselPair {
  ZPoly g, h;  // monic
};

inline HenselPair hensel_lift_pair(const ZPoly& f, FpPoly g0, FpPoly h0, const Fp& F,
                                   int k) {
  auto [one, s, t] = fp_xgcd(F, g0, h0);
  if (fp_deg(one) != 0) throw k3_error("hensel: factors not coprime");
  BigInt p(static_cast<unsigned long>(F.modulus()));
  ZPoly g = z_from_fp(g0), h = z_from_fp(h0);
  BigInt mod = p;
  for (int j = 1; j < k; ++j) {
    BigInt next = mod * p;
    ZPoly e = f;
    {
      ZPoly gh = z_mul(g, h);
      if (e.size() < gh.size()) e.resize(gh.size());
      for (size_t i = 0; i < gh.size(); ++i) e[i] -= gh[i];
      z_trim(e);
    }
    // e is divisible by p^j; solve g*dh + h*dg = e/p^j over F_p
    FpPoly ebar;
    for (auto& c : e) {
      BigInt q;
      mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
      ebar.push_back(F.reduce(q));
    }
    fp_trim(ebar);
    auto [q1, dg] = fp_divmod(F, fp_mul(F, t, ebar), g0);
    FpPoly dh = fp_divmod(F, fp_add(F, fp_mul(F, s, ebar), fp_mul(F, q1, h0)),
                          h0).second;
    ZPoly zg = z_from_fp(dg), zh = z_from_fp(dh);
    for (size_t i = 0; i < zg.size(); ++i) {
      if (static_cast<long>(i) > z_deg(g)) throw k3_error("hensel: degree overflow");
      g[i] = (g[i] + mod * zg[i]) % next;
    }
    for (size_t i = 0; i < zh.size(); ++i) h[i] = (h[i] + mod * zh[i]) % next;
    g = zm_reduce(std::move(g), next);
    h = zm_reduce(std::move(h), next);
    mod = next;
  }
  return {g, h};
}

// Lift the full modular factorization of monic f to p^k (recursive pair split).
inline void hensel_lift_tree(const ZPoly& f, const std::vector<FpPoly>& facs,
                             const Fp& F, int k, std::vector<ZPoly>& out) {
  if (facs.size() == 1) {
    out.push_back(zm_reduce(f, int_pow(BigInt(static_cast<unsigned long>(F.modulus())),
                                       static_cast<unsigned long>(k))));
    return;
  }
  size_t half = facs.size() / 2;
  FpPoly g0{1}, h0{1};
  for (size_t i = 0; i < half; ++i) g0 = fp_mul(F, g0, facs[i]);
  for (size_t i = half; i < facs.size(); ++i) h0 = fp_mul(F, h0, facs[i]);
  HenselPair pair = hensel_lift_pair(f, g0, h0, F, k);
  std::vector<FpPoly> left(facs.begin(), facs.begin() + half);
  std::vector<FpPoly> right(facs.begin() + half, facs.end());
  hensel_lift_tree(pair.g, left, F, k, out);
  hensel_lift_tree(pair.h, right, F, k, out);
}

constexpr int kMaxQFactorDegree = 12;

// Factor a primitive squarefree nonconstant polynomial over Z into irreducible
// primitive factors.
inline std::vector<ZPoly> factor_squarefree_z(ZPoly f) {
  f = z_primitive(std::move(f));
  long n = z_deg(f);
  if (n <= 0) throw k3_error("factor_squarefree_z: constant input");
  if (n == 1) return {f};
  if (n > kMaxQFactorDegree)
    throw k3_error("factor_univariate: unsupported degree over Q");

  // monic model F(x) = lc^{n-1} f(x/lc)
  BigInt lc = f.back();
  ZPoly fm(f.size());
  for (long i = 0; i < n; ++i)
    fm[i] = f[i] * int_pow(lc, static_cast<unsigned long>(n - 1 - i));
  fm[n] = 1;

  static const unsigned long primes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  for (unsigned long pl : primes) {
    Fp F(pl);
    FpPoly fbar = fp_from_z(F, fm);
    if (fp_deg(fbar) != n) continue;  // should not happen, fm monic
    if (fp_deg(fp_gcd(F, fbar, fp_derivative(F, fbar))) != 0) continue;
    auto [unit, facs] = factor_fp(F, fbar);
    (void)unit;
    if (facs.size() == 1) return {f};
    std::vector<FpPoly> mods;
    for (auto& [g, m] : facs) mods.push_back(g);

    // Coefficient bound for monic factors of fm (Mignotte-style), then lift
    // far enough for symmetric representatives to be exact.
    BigInt norm2 = 0;
    for (const auto& c : fm) norm2 += c * c;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
    BigInt bound = (BigInt(1) << static_cast<unsigned>(n + 1)) * (root + 1);
    int k = 1;
    BigInt pk(pl);
    while (pk <= 2 * bound) { pk *= BigInt(pl); ++k; }

    std::vector<ZPoly> lifted;
    hensel_lift_tree(fm, mods, F, k, lifted);

    // Subset recombination over the lifted factors.
    std::vector<int> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); ++i) alive[i] = static_cast<int>(i);
    ZPoly rem = fm;
    std::vector<ZPoly> monic_factors;
    bool progress = true;
    for (size_t take = 1; 2 * take <= alive.size() && progress;) {
      progress = false;
      std::vector<size_t> idx(take);
      for (size_t i = 0; i < take; ++i) idx[i] = i;
      for (;;) {
        ZPoly cand{BigInt(1)};
        for (size_t i : idx) cand = zm_mul(cand, lifted[alive[i]], pk);
        for (auto& c : cand) c = sym_mod(c, pk);
        z_trim(cand);
        auto q = z_divexact(rem, cand);
        if (q) {
          monic_factors.push_back(cand);
          rem = *q;
          std::vector<int> next_alive;
          for (size_t i = 0, j = 0; i < alive.size(); ++i) {
            if (j < idx.size() && idx[j] == i) { ++j; continue; }
            next_alive.push_back(alive[i]);
          }
          alive = std::move(next_alive);
          progress = true;
          break;
        }
        // next combination
        long pos = static_cast<long>(take) - 1;
        while (pos >= 0 && idx[pos] == alive.size() - take + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (size_t i = pos + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
      }
      if (!progress && 2 * (take + 1) <= alive.size()) {
        ++take;
        progress = true;
      }
    }
    if (z_deg(rem) > 0) monic_factors.push_back(rem);

    // Map monic factors of fm back to primitive factors of f.
    std::vector<ZPoly> out;
    for (const auto& gm : monic_factors) {
      // substitute x -> lc*x, then strip content
      ZPoly g(gm.size());
      for (size_t d = 0; d < gm.size(); ++d)
        g[d] = gm[d] * int_pow(lc, static_cast<unsigned long>(d));
      out.push_back(z_primitive(std::move(g)));
    }
    return out;
  }
  throw k3_error("factor_squarefree_z: no usable prime found");
}

struct QFactorization {
  BigRat unit;                          // input = unit * prod factor^mult
  std::vector<std::pair<ZPoly, int>> factors;  // primitive, positive leading
};

inline QPoly q_derivative(const QPoly& f) {
  QPoly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * BigRat(static_cast<unsigned long>(i)));
  while (!r.empty() && sgn(r.back()) == 0) r.pop_back();
  return r;
}

inline std::pair<QPoly, QPoly> q_divmod(QPoly a, const QPoly& b) {
  if (b.empty()) throw k3_error("q_divmod: division by zero");
  QPoly q;
  long db = static_cast<long>(b.size()) - 1;
  while (static_cast<long>(a.size()) - 1 >= db && !a.empty()) {
    long da = static_cast<long>(a.size()) - 1;
    BigRat c = a.back() / b.back();
    if (static_cast<long>(q.size()) < da - db + 1) q.resize(da - db + 1);
    q[da - db] = c;
    for (long i = 0; i <= db; ++i) a[da - db + i] -= c * b[i];
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
  }
  return {q, a};
}

inline QPoly q_gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = q_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    BigRat lc = a.back();
    for (auto& c : a) c /= lc;
  }
  return a;
}

inline ZPoly z_from_q(const QPoly& f, BigRat* content_out = nullptr) {
  BigInt l = 1;
  for (const auto& c : f) l = lcm(l, denom(c));
  ZPoly r;
  for (const auto& c : f) r.push_back(numer(c) * (l / denom(c)));
  BigInt cz = z_content(r);
  if (sgn(cz) != 0)
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), cz.get_mpz_t());
  if (content_out) {
    BigRat c(cz, l);
    c.canonicalize();
    *content_out = c;
  }
  return r;
}

// Factorization over Q with multiplicities (char-0 squarefree split first).
inline QFactorization factor_q(const QPoly& f_in) {
  QPoly f = f_in;
  while (!f.empty() && sgn(f.back()) == 0) f.pop_back();
  if (f.empty()) throw k3_error("factor_q: zero polynomial");
  QFactorization out;
  out.unit = BigRat(1);
  if (f.size() == 1) {
    out.unit = f[0];
    return out;
  }
  // Yun's squarefree decomposition (characteristic zero).
  QPoly df = q_derivative(f);
  QPoly a = q_gcd(f, df);
  QPoly b = q_divmod(f, a).first;
  QPoly c = q_divmod(df, a).first;
  QPoly d;
  {
    QPoly bp = q_derivative(b);
    d = c;
    if (d.size() < bp.size()) d.resize(bp.size());
    for (size_t i = 0; i < bp.size(); ++i) d[i] -= bp[i];
    while (!d.empty() && sgn(d.back()) == 0) d.pop_back();
  }
  int mult = 1;
  std::vector<std::pair<ZPoly, int>> sq_parts;
  while (static_cast<long>(b.size()) - 1 > 0) {
    QPoly t = q_gcd(b, d);
    if (static_cast<long>(t.size()) - 1 > 0) {
      BigRat cont;
      sq_parts.emplace_back(z_from_q(t, &cont), mult);
    }
    QPoly b2 = q_divmod(b, t).first;
    QPoly c2 = q_divmod(d, t).first;
    QPoly bp = q_derivative(b2);
    d = c2;
    if (d.size() < bp.size()) d.resize(bp.size());
    for (size_t i = 0; i < bp.size(); ++i) d[i] -= bp[i];
    while (!d.empty() && sgn(d.back()) == 0) d.pop_back();
    b = std::move(b2);
    ++mult;
  }
  for (auto& [part, m] : sq_parts)
    for (auto& irr : factor_squarefree_z(part)) out.factors.emplace_back(irr, m);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& x, const auto& y) {
              if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
              if (x.first != y.first) return x.first < y.first;
              return x.second < y.second;
            });
  // unit = f / prod(factors)
  QPoly prod{BigRat(1)};
  for (auto& [irr, m] : out.factors)
    for (int i = 0; i < m; ++i) {
      QPoly nx;
      nx.resize(prod.size() + irr.size() - 1);
      for (size_t a2 = 0; a2 < prod.size(); ++a2)
        for (size_t b2 = 0; b2 < irr.size(); ++b2)
          nx[a2 + b2] += prod[a2] * BigRat(irr[b2]);
      prod = std::move(nx);
    }
  out.unit = f.back() / prod.back();
  return out;
}

// ---------------------------------------------------------------------------
// Bridges between one-variable MultiPoly views and the dense vectors above.

inline QPoly qpoly_from_multipoly(const MultiPoly& f, int v) {
  if (v < 0 || v >= f.nvars) throw k3_error("qpoly_from_multipoly: bad variable");
  long d = f.degree_in(v);
  QPoly out(static_cast<size_t>(std::max(d, 0L)) + 1);
  for (const auto& [m, c] : f.terms) {
    for (int i = 0; i < f.nvars; ++i)
      if (i != v && m[i] != 0)
        throw k3_error("qpoly_from_multipoly: polynomial is not univariate");
    out[m[static_cast<size_t>(v)]] = c;
  }
  while (!out.empty() && sgn(out.back()) == 0) out.pop_back();
  return out;
}

inline MultiPoly multipoly_from_qpoly(const QPoly& c, int nvars, int v) {
  MultiPoly out(nvars);
  std::vector<unsigned> m(static_cast<size_t>(nvars), 0);
  for (size_t i = 0; i < c.size(); ++i) {
    m[static_cast<size_t>(v)] = static_cast<unsigned>(i);
    out.add_term(m, c[i]);
  }
  return out;
}

inline FpPoly fppoly_from_multipoly(const Fp& F, const MultiPoly& f, int v) {
  FpPoly out;
  for (const auto& c : qpoly_from_multipoly(f, v)) out.push_back(F.reduce(c));
  fp_trim(out);
  return out;
}

// Factor a one-variable polynomial over Q. The input equals
// content * prod parts[i]^mult[i] with every part monic in variable v.
struct UnivariateFactorization {
  BigRat content;
  std::vector<std::pair<MultiPoly, int>> parts;
};

inline UnivariateFactorization factor_univariate_q(const MultiPoly& f, int v) {
  QPoly dense = qpoly_from_multipoly(f, v);
  if (dense.empty()) throw k3_error("factor_univariate: zero polynomial");
  QFactorization qf = factor_q(dense);
  UnivariateFactorization out;
  out.content = qf.unit;
  for (const auto& [zf, m] : qf.factors) {
    BigRat lc(zf.back());
    QPoly monic;
    for (const auto& c : zf) monic.push_back(BigRat(c) / lc);
    out.content *= rat_pow(lc, m);
    out.parts.emplace_back(multipoly_from_qpoly(monic, f.nvars, v), m);
  }
  return out;
}

}  // namespace k3kit
