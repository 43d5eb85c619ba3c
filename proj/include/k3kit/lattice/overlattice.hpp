#pragma once

#include <optional>
#include <vector>

#include "k3kit/exactmath/matrix.hpp"
#include "k3kit/exactmath/prime_field.hpp"
#include "k3kit/exactmath/rational.hpp"
#include "k3kit/lattice/hasse.hpp"
#include "k3kit/lattice/lattice.hpp"

namespace k3kit {

namespace detail {

inline std::vector<BigInt> gram_times(const IntMatrix& g,
                                      const std::vector<BigInt>& x) {
  std::vector<BigInt> out(static_cast<size_t>(g.rows), BigInt(0));
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j)
      out[static_cast<size_t>(i)] += g.at(i, j) * x[static_cast<size_t>(j)];
  return out;
}

inline BigInt gcd_vec(const std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const BigInt& e : v) g = gcd(g, e);
  return g;
}

}  // namespace detail

// L together with the glue vector x generates the even overlattice L + Zx.
// The result is expressed in its own basis; `basis` holds the new basis rows
// in the coordinates of L, and `index` is the order of x modulo L, so the
// discriminant drops by index^2.
struct Overlattice {
  Lattice lattice;
  RatMatrix basis;
  BigInt index;
};

inline Overlattice overlattice(const Lattice& L, const std::vector<BigRat>& x) {
  if (!nondegenerate(L)) throw k3_error("overlattice: degenerate lattice");
  if (static_cast<int>(x.size()) != L.rank)
    throw k3_error("overlattice: glue vector has wrong length");
  BigInt m = 1;
  for (const BigRat& c : x) m = lcm(m, denom(c));
  if (m == 1) throw k3_error("overlattice: glue vector already in the lattice");
  for (int j = 0; j < L.rank; ++j) {
    BigRat s = 0;
    for (int i = 0; i < L.rank; ++i)
      s += x[static_cast<size_t>(i)] * BigRat(L.gram.at(i, j));
    if (denom(s) != 1) throw k3_error("overlattice: (x, L) not integral");
  }
  BigRat nrm = pair_q(L.gram, x, x);
  if (denom(nrm) != 1 || sgn(numer(nrm) % 2) != 0)
    throw k3_error("overlattice: (x, x) not an even integer");

  // Row lattice of [m I; m x] over Z is m (L + Zx); its Smith form U M V = D
  // turns the first rank rows of D V^{-1} into a basis.
  IntMatrix M(L.rank + 1, L.rank);
  for (int i = 0; i < L.rank; ++i) M.at(i, i) = m;
  for (int j = 0; j < L.rank; ++j) {
    BigRat e = x[static_cast<size_t>(j)] * BigRat(m);
    M.at(L.rank, j) = numer(e);
  }
  SmithResult s = smith_normal_form(M);
  RatMatrix Vi = inverse(RatMatrix::from_int(s.V));
  RatMatrix B(L.rank, L.rank);
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j)
      B.at(i, j) = BigRat(s.D.at(i, i)) * Vi.at(i, j) / BigRat(m);

  RatMatrix Gq = B * RatMatrix::from_int(L.gram) * transpose(B);
  IntMatrix G2(L.rank, L.rank);
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) {
      if (denom(Gq.at(i, j)) != 1)
        throw k3_error("overlattice: non-integral Gram after glue");
      G2.at(i, j) = numer(Gq.at(i, j));
    }
  Overlattice out{lattice_from_gram(std::move(G2)), std::move(B), m};
  if (!out.lattice.even) throw k3_error("overlattice: result not even");
  if (out.lattice.disc * m * m != L.disc)
    throw k3_error("overlattice: discriminant mismatch");
  return out;
}

// Coordinates in the overlattice basis of a vector given in the coordinates
// of the original lattice (the new basis stands in the rows of o.basis, so
// old = new * basis).
inline std::vector<BigRat> in_overlattice_coords(const Overlattice& o,
                                                 const std::vector<BigRat>& v) {
  RatMatrix Bi = inverse(o.basis);
  std::vector<BigRat> out(v.size(), BigRat(0));
  for (size_t j = 0; j < out.size(); ++j)
    for (size_t i = 0; i < v.size(); ++i)
      out[j] += v[i] * Bi.at(static_cast<int>(i), static_cast<int>(j));
  return out;
}

// Primitive vector of norm zero together with its divisor
// d = gcd of (F, x) over x in L.
struct IsotropicVec {
  std::vector<BigInt> coords;
  BigInt divisor;
};

namespace detail {

template <typename Pred>
inline bool push_isotropic(const Lattice& L, std::vector<BigInt> f,
                           std::vector<IsotropicVec>& out, Pred&& keep) {
  if (gcd_vec(f) != 1) return false;
  for (size_t i = 0; i < f.size(); ++i) {
    if (sgn(f[i]) == 0) continue;
    if (sgn(f[i]) < 0)
      for (BigInt& e : f) e = -e;
    break;
  }
  BigInt d = gcd_vec(gram_times(L.gram, f));
  IsotropicVec v{std::move(f), std::move(d)};
  if (!keep(v)) return false;
  out.push_back(std::move(v));
  return true;
}

// Staged box scan for primitive norm-zero vectors: single basis vectors,
// then pairs, triples, and quadruples of basis vectors with bounded
// coefficients, collecting up to cap hits that satisfy keep.
template <typename Pred>
inline std::vector<IsotropicVec> isotropic_scan(const Lattice& L, long height,
                                                size_t cap, Pred&& keep) {
  const IntMatrix& g = L.gram;
  int n = L.rank;
  std::vector<IsotropicVec> out;
  auto norm_at = [&](const std::vector<std::pair<int, BigInt>>& supp) -> BigInt {
    BigInt s = 0;
    for (const auto& [i, ci] : supp)
      for (const auto& [j, cj] : supp) s += ci * cj * g.at(i, j);
    return s;
  };
  auto vec_of = [&](const std::vector<std::pair<int, BigInt>>& supp) {
    std::vector<BigInt> f(static_cast<size_t>(n), BigInt(0));
    for (const auto& [i, ci] : supp) f[static_cast<size_t>(i)] = ci;
    return f;
  };
  auto full = [&] { return out.size() >= cap; };
  for (int i = 0; i < n && !full(); ++i)
    if (sgn(g.at(i, i)) == 0) push_isotropic(L, vec_of({{i, 1}}), out, keep);
  for (int i = 0; i < n && !full(); ++i)
    for (int j = i + 1; j < n && !full(); ++j)
      for (BigInt a = 1; a <= height && !full(); ++a)
        for (BigInt b = -height; b <= height && !full(); ++b) {
          if (sgn(b) == 0) continue;
          if (sgn(norm_at({{i, a}, {j, b}})) != 0) continue;
          push_isotropic(L, vec_of({{i, a}, {j, b}}), out, keep);
        }
  long h3 = std::min(height, 6L);
  for (int i = 0; i < n && !full(); ++i)
    for (int j = i + 1; j < n && !full(); ++j)
      for (int k = j + 1; k < n && !full(); ++k)
        for (BigInt a = 1; a <= h3 && !full(); ++a)
          for (BigInt b = -h3; b <= h3 && !full(); ++b)
            for (BigInt c = -h3; c <= h3 && !full(); ++c) {
              if (sgn(b) == 0 && sgn(c) == 0) continue;
              if (sgn(norm_at({{i, a}, {j, b}, {k, c}})) != 0) continue;
              push_isotropic(L, vec_of({{i, a}, {j, b}, {k, c}}), out, keep);
            }
  long h4 = std::min(height, 3L);
  for (int i = 0; i < n && !full(); ++i)
    for (int j = i + 1; j < n && !full(); ++j)
      for (int k = j + 1; k < n && !full(); ++k)
        for (int l = k + 1; l < n && !full(); ++l)
          for (BigInt a = 1; a <= h4 && !full(); ++a)
            for (BigInt b = -h4; b <= h4 && !full(); ++b)
              for (BigInt c = -h4; c <= h4 && !full(); ++c)
                for (BigInt e = -h4; e <= h4 && !full(); ++e) {
                  if (sgn(norm_at({{i, a}, {j, b}, {k, c}, {l, e}})) != 0)
                    continue;
                  push_isotropic(L, vec_of({{i, a}, {j, b}, {k, c}, {l, e}}),
                                 out, keep);
                }
  return out;
}

}  // namespace detail

// Bounded search for a primitive norm-zero vector in an indefinite lattice of
// rank at least 5 (existence is then guaranteed; the bound only limits the
// search effort).
inline IsotropicVec find_norm_zero_primitive(const Lattice& L, long height = 25) {
  if (!nondegenerate(L)) throw k3_error("find_norm_zero_primitive: degenerate lattice");
  if (L.rank < 5) throw k3_error("find_norm_zero_primitive: rank < 5");
  if (L.sig_pos == 0 || L.sig_neg == 0)
    throw k3_error("find_norm_zero_primitive: definite lattice");
  std::vector<IsotropicVec> found = detail::isotropic_scan(
      L, height, 1, [](const IsotropicVec&) { return true; });
  if (found.empty())
    throw k3_error("find_norm_zero_primitive: no isotropic vector within height " +
                   std::to_string(height));
  return found.front();
}

namespace detail {

// All positive divisors of |r|, from its factorization.
inline std::vector<BigInt> divisors_of(const BigInt& r) {
  std::vector<BigInt> out{BigInt(1)};
  for (const auto& [p, e] : factor_z(r)) {
    size_t base = out.size();
    BigInt pk = 1;
    for (long k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

}  // namespace detail

// Corrects a divisor class D whose pairing with the lattice is divisible by p
// into a fibration class: returns D' with D' = D mod pL, (D', D') = 0, and
// the p-part of gcd_x (D', x) exactly p. The correction lives in the span of
// a pair (F, G) of norm-zero vectors with (F, G) = e, where the isotropy
// equation becomes a two-term divisor problem X Y = r, solved through the
// factorization of r. D is returned unchanged when it already qualifies.
inline std::vector<BigInt> genus1_divisor_mod_p(const Lattice& L, const BigInt& p,
                                                const std::vector<BigInt>& D) {
  if (L.rank < 13) throw k3_error("genus1_divisor_mod_p: rank < 13");
  if (L.sig_pos != 1 || L.sig_neg != L.rank - 1)
    throw k3_error("genus1_divisor_mod_p: signature is not (1, rank-1)");
  if (mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
    throw k3_error("genus1_divisor_mod_p: p is not prime");
  if (static_cast<int>(D.size()) != L.rank)
    throw k3_error("genus1_divisor_mod_p: wrong vector length");
  std::vector<BigInt> gd = detail::gram_times(L.gram, D);
  for (const BigInt& e : gd)
    if (sgn(e % p) != 0)
      throw k3_error("genus1_divisor_mod_p: (D, L) not divisible by p");
  BigInt dd = pair_z(L.gram, D, D);
  if (sgn(dd % (p * p)) != 0)
    throw k3_error("genus1_divisor_mod_p: (D, D) not divisible by p^2");
  if (p == 2 && sgn(dd % 8) != 0)
    throw k3_error("genus1_divisor_mod_p: (D, D) not divisible by 8 at p = 2");

  auto p_part_ok = [&](const std::vector<BigInt>& cand) {
    std::vector<BigInt> w = detail::gram_times(L.gram, cand);
    BigInt g = detail::gcd_vec(w);
    return sgn(g) != 0 && vp(g, p) == 1;
  };
  if (sgn(dd) == 0 && p_part_ok(D)) return D;

  bool in_pl = true;
  for (const BigInt& c : D) in_pl = in_pl && sgn(c % p) == 0;
  if (in_pl) throw k3_error("genus1_divisor_mod_p: D divisible by p in L");

  // Candidate second legs y: basis vectors, then sums and differences of two
  // basis vectors, kept when d = (F, y) is nonzero and prime to p.
  std::vector<std::vector<BigInt>> ys;
  for (int j = 0; j < L.rank; ++j) {
    std::vector<BigInt> y(static_cast<size_t>(L.rank), BigInt(0));
    y[static_cast<size_t>(j)] = 1;
    ys.push_back(std::move(y));
  }
  for (int j = 0; j < L.rank; ++j)
    for (int k = j + 1; k < L.rank; ++k)
      for (int sg : {1, -1}) {
        std::vector<BigInt> y(static_cast<size_t>(L.rank), BigInt(0));
        y[static_cast<size_t>(j)] = 1;
        y[static_cast<size_t>(k)] = sg;
        ys.push_back(std::move(y));
      }

  std::vector<IsotropicVec> fs = detail::isotropic_scan(
      L, 25, 40,
      [&](const IsotropicVec& f) { return sgn(f.divisor % p) != 0; });
  for (const IsotropicVec& F : fs) {
    for (const std::vector<BigInt>& y : ys) {
      BigInt d = pair_z(L.gram, F.coords, y);
      if (sgn(d) == 0 || sgn(d % p) == 0) continue;
      // G = d y - ((y,y)/2) F has (G,G) = 0 and e = (F,G) = d^2.
      BigInt eta = pair_z(L.gram, y, y) / 2;
      std::vector<BigInt> G(static_cast<size_t>(L.rank));
      for (size_t i = 0; i < G.size(); ++i)
        G[i] = d * y[i] - eta * F.coords[i];
      BigInt e = d * d;
      BigInt s = dd / (p * p);
      BigInt gamma_f = pair_z(L.gram, D, F.coords) / p;
      BigInt gamma_g = pair_z(L.gram, D, G) / p;
      // D' = D + p (A F + B G) is isotropic iff
      // (A e + gamma_g)(B e + gamma_f) = r with r as below; s is always even.
      BigInt r = gamma_f * gamma_g - (s / 2) * e;

      auto try_pair = [&](const BigInt& X,
                          const BigInt& Y) -> std::optional<std::vector<BigInt>> {
        if (sgn((X - gamma_g) % e) != 0 || sgn((Y - gamma_f) % e) != 0)
          return std::nullopt;
        BigInt A = (X - gamma_g) / e, B = (Y - gamma_f) / e;
        std::vector<BigInt> cand(static_cast<size_t>(L.rank));
        for (size_t i = 0; i < cand.size(); ++i)
          cand[i] = D[i] + p * (A * F.coords[i] + B * G[i]);
        if (sgn(pair_z(L.gram, cand, cand)) != 0) return std::nullopt;
        if (!p_part_ok(cand)) return std::nullopt;
        return cand;
      };

      if (sgn(r) == 0) {
        if (sgn(gamma_g % e) == 0)
          if (auto c = try_pair(BigInt(0), gamma_f)) return *c;
        if (sgn(gamma_f % e) == 0)
          if (auto c = try_pair(gamma_g, BigInt(0))) return *c;
        continue;
      }
      for (const BigInt& u : detail::divisors_of(r))
        for (const BigInt& X : {u, BigInt(-u)})
          if (auto c = try_pair(X, BigInt(r / X))) return *c;
    }
  }
  throw k3_error(
      "genus1_divisor_mod_p: no correction found over searched norm-zero pairs");
}

// Congruent diagonalization over the localization Z_(p) for odd p: returns
// diag and P with P^T G P diagonal, all entries of P having denominators
// prime to p. Pivots take the entry of minimal p-valuation; a minimal
// off-diagonal entry is first moved onto the diagonal by a basis addition,
// which keeps the valuation because vp(2) = 0.
inline DiagonalizeResult p_adic_diagonalize(const IntMatrix& g, const BigInt& p) {
  if (p == 2) throw k3_error("p_adic_diagonalize: p must be odd");
  int n = g.rows;
  RatMatrix A = RatMatrix::from_int(g), P = RatMatrix::identity(n);
  auto col_add = [&](int dst, int src, const BigRat& c) {
    for (int r = 0; r < n; ++r) {
      A.at(r, dst) += c * A.at(r, src);
      P.at(r, dst) += c * P.at(r, src);
    }
    for (int r = 0; r < n; ++r) A.at(dst, r) += c * A.at(src, r);
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < n; ++r) {
      std::swap(A.at(r, i), A.at(r, j));
      std::swap(P.at(r, i), P.at(r, j));
    }
    for (int r = 0; r < n; ++r) std::swap(A.at(i, r), A.at(j, r));
  };
  for (int k = 0; k < n; ++k) {
    long best = 0;
    int bi = -1, bj = -1;
    for (int i = k; i < n; ++i)
      for (int j = i; j < n; ++j) {
        if (sgn(A.at(i, j)) == 0) continue;
        long v = vp(A.at(i, j), p);
        bool better = bi < 0 || v < best || (v == best && bi != bj && i == j);
        if (better) best = v, bi = i, bj = j;
      }
    if (bi < 0) throw k3_error("p_adic_diagonalize: degenerate form");
    if (bi != bj) {
      col_add(bi, bj, BigRat(1));
      if (sgn(A.at(bi, bi)) == 0 || vp(A.at(bi, bi), p) != best)
        throw k3_error("p_adic_diagonalize: pivot transfer failed");
    }
    if (bi != k) col_swap(k, bi);
    for (int j = k + 1; j < n; ++j) {
      if (sgn(A.at(k, j)) == 0) continue;
      col_add(j, k, BigRat(-A.at(k, j) / A.at(k, k)));
    }
  }
  DiagonalizeResult out;
  out.P = P;
  for (int i = 0; i < n; ++i) out.diag.push_back(A.at(i, i));
  for (const BigRat& c : out.diag)
    if (vp(c, p) < 0)
      throw k3_error("p_adic_diagonalize: pivot valuation went negative");
  return out;
}

// One link of an overlattice chain: the glue vector in the coordinates of
// the previous lattice, and the resulting lattice in its own basis.
struct GlueStep {
  std::vector<BigRat> glue;
  Lattice lattice;
};

namespace detail {

// Order-p glue vector for one step of drop_prime_square, on a lattice whose
// discriminant p-valuation is at least 2.
inline std::vector<BigRat> drop_step_glue(const Lattice& M, const BigInt& p) {
  // An element of order p^2 in D(M) hands us the glue directly: p times it
  // has order p and is automatically isotropic for odd p.
  SmithResult s = smith_normal_form(M.gram);
  for (int i = M.rank - 1; i >= 0; --i) {
    const BigInt& di = s.D.at(i, i);
    if (di == 0 || vp(di, p) < 2) continue;
    std::vector<BigRat> x(static_cast<size_t>(M.rank));
    for (int r = 0; r < M.rank; ++r) {
      BigRat e(s.V.at(r, i) * (di / p), di);
      e.canonicalize();
      x[static_cast<size_t>(r)] = e;
    }
    return x;
  }

  // Elementary p-part: diagonalize over Z_(p), collect the slots of
  // valuation exactly 1, and lift a point of the mod-p conic on up to three
  // of them. Coordinates are rounded to integers modulo p^K and every
  // required congruence is then rechecked exactly.
  DiagonalizeResult dg = p_adic_diagonalize(M.gram, p);
  std::vector<int> slots;
  for (int i = 0; i < M.rank; ++i) {
    long v = vp(dg.diag[static_cast<size_t>(i)], p);
    if (v == 1) slots.push_back(i);
    if (v >= 2) throw k3_error("drop_prime_square: unexpected deep pivot");
  }
  if (slots.size() < 2) throw k3_error("drop_prime_square: p-rank dropped below 2");
  size_t nv = std::min<size_t>(slots.size(), 3);
  Fp fp(p.get_ui());
  std::vector<uint64_t> as;
  for (size_t j = 0; j < nv; ++j) {
    BigRat unit = dg.diag[static_cast<size_t>(slots[j])] / BigRat(p);
    as.push_back(fp.reduce(unit));
  }
  // Nontrivial zero of sum a_j x_j^2 mod p, by solving for the last variable.
  std::vector<uint64_t> pt;
  uint64_t bound = nv == 3 ? fp.modulus() : 1;
  for (uint64_t x0 = 0; x0 < bound && pt.empty(); ++x0)
    for (uint64_t x1 = 0; x1 < fp.modulus() && pt.empty(); ++x1) {
      uint64_t head = nv == 3 ? fp.add(fp.mul(as[0], fp.mul(x0, x0)),
                                       fp.mul(as[1], fp.mul(x1, x1)))
                              : fp.mul(as[0], fp.mul(x1, x1));
      uint64_t rhs = fp.div(fp.neg(head), as[nv - 1]);
      if (!fp.is_square(rhs)) continue;
      uint64_t xl = fp.sqrt(rhs);
      std::vector<uint64_t> cand = nv == 3 ? std::vector<uint64_t>{x0, x1, xl}
                                           : std::vector<uint64_t>{x1, xl};
      bool nonzero = false;
      for (uint64_t c : cand) nonzero = nonzero || c != 0;
      if (nonzero) pt = cand;
    }
  if (pt.empty())
    throw k3_error("drop_prime_square: conic has no point, Hasse precondition violated");

  for (long K = 12, attempt = 0; attempt < 4; K *= 2, ++attempt) {
    BigInt pk = int_pow(p, static_cast<unsigned long>(K));
    std::vector<BigInt> D(static_cast<size_t>(M.rank), BigInt(0));
    for (size_t j = 0; j < nv; ++j) {
      // Column slots[j] of P holds the diagonalizing basis vector.
      for (int r = 0; r < M.rank; ++r) {
        BigRat c = dg.P.at(r, slots[j]) * BigRat(static_cast<unsigned long>(pt[j]));
        BigInt num = numer(c) % pk, den = denom(c) % pk, inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t()) == 0)
          throw k3_error("drop_prime_square: denominator not prime to p");
        D[static_cast<size_t>(r)] = (D[static_cast<size_t>(r)] + num * inv) % pk;
      }
    }
    for (BigInt& c : D) {
      c %= pk;
      if (sgn(c) < 0) c += pk;
    }
    bool nonzero_mod_p = false;
    for (const BigInt& c : D) nonzero_mod_p = nonzero_mod_p || sgn(c % p) != 0;
    std::vector<BigInt> gd = gram_times(M.gram, D);
    bool pairing_ok = true;
    for (const BigInt& e : gd) pairing_ok = pairing_ok && sgn(e % p) == 0;
    bool norm_ok = sgn(pair_z(M.gram, D, D) % (p * p)) == 0;
    if (nonzero_mod_p && pairing_ok && norm_ok) {
      std::vector<BigRat> x(static_cast<size_t>(M.rank));
      for (int r = 0; r < M.rank; ++r) {
        BigRat e(D[static_cast<size_t>(r)], p);
        e.canonicalize();
        x[static_cast<size_t>(r)] = e;
      }
      return x;
    }
  }
  throw k3_error("drop_prime_square: p-adic precision exhausted");
}

}  // namespace detail

// Chain of even overlattices L = L_0 < L_1 < ... < L_k with
// disc(L_{j+1}) = disc(L_j) / p^2, ending at a lattice of discriminant prime
// to p. Requires rank >= 13, odd p, even p-valuation of the discriminant, and
// trivial Hasse invariant at p; an empty chain means p did not divide disc.
inline std::vector<GlueStep> drop_prime_square(const Lattice& L, const BigInt& p) {
  if (!nondegenerate(L)) throw k3_error("drop_prime_square: degenerate lattice");
  if (L.rank < 13) throw k3_error("drop_prime_square: rank < 13");
  if (p == 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
    throw k3_error("drop_prime_square: p must be an odd prime");
  long v = vp(L.disc, p);
  if (v == 0) return {};
  if (v % 2) throw k3_error("drop_prime_square: odd p-valuation of disc");
  if (hasse_invariant(L, p) != 1)
    throw k3_error("drop_prime_square: Hasse invariant at p is nontrivial");
  std::vector<GlueStep> chain;
  Lattice M = L;
  for (long step = 0; step < v / 2; ++step) {
    std::vector<BigRat> x = detail::drop_step_glue(M, p);
    Overlattice o = overlattice(M, x);
    if (o.index != p) throw k3_error("drop_prime_square: glue index is not p");
    chain.push_back(GlueStep{std::move(x), o.lattice});
    M = chain.back().lattice;
  }
  if (vp(M.disc, p) != 0) throw k3_error("drop_prime_square: chain left p behind");
  return chain;
}

// Chain of index-2 even overlattices from an even lattice of signature
// (1, 17) and discriminant -4^i up to a unimodular one. Each step glues in an
// isotropic 2-torsion class of the discriminant form, which always exists for
// this genus; an empty chain means the lattice was already unimodular.
inline std::vector<GlueStep> embed_into_unimodular(const Lattice& L) {
  if (!L.even) throw k3_error("embed_into_unimodular: lattice not even");
  if (L.sig_pos != 1 || L.sig_neg != 17)
    throw k3_error("embed_into_unimodular: signature is not (1, 17)");
  BigInt d = -L.disc;
  while (d > 1 && sgn(d % 4) == 0) d /= 4;
  if (d != 1) throw k3_error("embed_into_unimodular: disc is not -4^i");
  std::vector<GlueStep> chain;
  Lattice M = L;
  while (M.disc != -1) {
    DiscGroup dg = discriminant_group(M);
    std::optional<std::vector<BigInt>> iso = isotropic_order2(dg);
    if (!iso)
      throw k3_error("embed_into_unimodular: no isotropic 2-torsion class");
    std::vector<BigRat> x = disc_rep(dg, *iso);
    Overlattice o = overlattice(M, x);
    if (o.index != 2) throw k3_error("embed_into_unimodular: glue index is not 2");
    chain.push_back(GlueStep{std::move(x), o.lattice});
    M = chain.back().lattice;
  }
  return chain;
}

}  // namespace k3kit
