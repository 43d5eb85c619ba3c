#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3kit/exactmath/matrix.hpp"
#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

// Even integer lattice given by a symmetric Gram matrix, with the invariants
// cached at construction. Signature comes from exact congruent
// diagonalization over Q, never from floating point.
struct Lattice {
  IntMatrix gram;
  int rank = 0;
  int sig_pos = 0, sig_neg = 0;
  BigInt disc;
  bool even = false;
};

inline Lattice lattice_from_gram(IntMatrix g) {
  if (g.rows != g.cols) throw k3_error("lattice_from_gram: non-square Gram");
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (g.at(i, j) != g.at(j, i))
        throw k3_error("lattice_from_gram: Gram not symmetric");
  Lattice L;
  L.rank = g.rows;
  L.disc = det(g);
  L.even = true;
  for (int i = 0; i < g.rows; ++i)
    if (sgn(g.at(i, i) % 2) != 0) L.even = false;
  DiagonalizeResult d = diagonalize_symmetric(RatMatrix::from_int(g));
  for (const BigRat& c : d.diag) {
    if (sgn(c) > 0) ++L.sig_pos;
    if (sgn(c) < 0) ++L.sig_neg;
  }
  L.gram = std::move(g);
  return L;
}

inline bool nondegenerate(const Lattice& L) { return sgn(L.disc) != 0; }

// Pairings of coordinate vectors in the basis of L.
inline BigInt pair_z(const IntMatrix& g, const std::vector<BigInt>& x,
                     const std::vector<BigInt>& y) {
  BigInt s = 0;
  for (int i = 0; i < g.rows; ++i) {
    if (sgn(x[static_cast<size_t>(i)]) == 0) continue;
    BigInt row = 0;
    for (int j = 0; j < g.cols; ++j) row += g.at(i, j) * y[static_cast<size_t>(j)];
    s += x[static_cast<size_t>(i)] * row;
  }
  return s;
}

inline BigRat pair_q(const IntMatrix& g, const std::vector<BigRat>& x,
                     const std::vector<BigRat>& y) {
  BigRat s = 0;
  for (int i = 0; i < g.rows; ++i) {
    if (sgn(x[static_cast<size_t>(i)]) == 0) continue;
    BigRat row = 0;
    for (int j = 0; j < g.cols; ++j) row += BigRat(g.at(i, j)) * y[static_cast<size_t>(j)];
    s += x[static_cast<size_t>(i)] * row;
  }
  return s;
}

// Root lattice Grams: negative definite, so minus the ADE Cartan matrix.
inline Lattice lattice_A(int n) {
  if (n < 1) throw k3_error("lattice_A: n >= 1 required");
  IntMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    g.at(i, i) = -2;
    if (i + 1 < n) { g.at(i, i + 1) = 1; g.at(i + 1, i) = 1; }
  }
  return lattice_from_gram(std::move(g));
}

// D_n nodes: path 1..n-1 with node n attached to node n-2.
inline Lattice lattice_D(int n) {
  if (n < 4) throw k3_error("lattice_D: n >= 4 required");
  IntMatrix g(n, n);
  for (int i = 0; i < n; ++i) g.at(i, i) = -2;
  for (int i = 0; i + 1 < n - 1; ++i) { g.at(i, i + 1) = 1; g.at(i + 1, i) = 1; }
  g.at(n - 3, n - 1) = 1;
  g.at(n - 1, n - 3) = 1;
  return lattice_from_gram(std::move(g));
}

// E_n nodes: path 1..n-1 with node n attached to node 3 (Bourbaki shape).
inline Lattice lattice_E(int n) {
  if (n < 6 || n > 8) throw k3_error("lattice_E: n in {6,7,8} required");
  IntMatrix g(n, n);
  for (int i = 0; i < n; ++i) g.at(i, i) = -2;
  for (int i = 0; i + 1 < n - 1; ++i) { g.at(i, i + 1) = 1; g.at(i + 1, i) = 1; }
  g.at(2, n - 1) = 1;
  g.at(n - 1, 2) = 1;
  return lattice_from_gram(std::move(g));
}

inline Lattice lattice_U() {
  IntMatrix g(2, 2);
  g.at(0, 1) = 1;
  g.at(1, 0) = 1;
  return lattice_from_gram(std::move(g));
}

inline Lattice twist(const Lattice& L, const BigInt& c) {
  if (sgn(c) == 0) throw k3_error("twist: zero scale");
  IntMatrix g = L.gram;
  for (BigInt& e : g.a) e *= c;
  return lattice_from_gram(std::move(g));
}

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
  IntMatrix g(a.rank + b.rank, a.rank + b.rank);
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) g.at(i, j) = a.gram.at(i, j);
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) g.at(a.rank + i, a.rank + j) = b.gram.at(i, j);
  return lattice_from_gram(std::move(g));
}

// Rank-1 lattice <c>.
inline Lattice lattice_scalar(const BigInt& c) {
  IntMatrix g(1, 1);
  g.at(0, 0) = c;
  return lattice_from_gram(std::move(g));
}

// Names: '+'-separated summands, each "A<n>", "D<n>", "E<n>", "U", or "<c>"
// for a rank-1 lattice, optionally followed by "(t)" to scale the Gram by t,
// e.g. "U(2)" or "U+E8+E8" or "<2>+<-2>".
inline Lattice standard_lattice(const std::string& name) {
  std::optional<Lattice> acc;
  size_t pos = 0;
  while (pos <= name.size()) {
    size_t plus = name.find('+', pos);
    if (plus == std::string::npos) plus = name.size();
    std::string tok = name.substr(pos, plus - pos);
    pos = plus + 1;
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (tok.empty()) throw k3_error("standard_lattice: empty summand in '" + name + "'");
    BigInt scale = 1;
    size_t par = tok.find('(');
    if (par != std::string::npos) {
      if (tok.back() != ')') throw k3_error("standard_lattice: bad scale in '" + tok + "'");
      scale = BigInt(tok.substr(par + 1, tok.size() - par - 2));
      tok = tok.substr(0, par);
    }
    Lattice s;
    if (tok == "U") {
      s = lattice_U();
    } else if (tok.size() >= 2 && tok.front() == '<' && tok.back() == '>') {
      s = lattice_scalar(BigInt(tok.substr(1, tok.size() - 2)));
    } else if (tok.size() >= 2 && (tok[0] == 'A' || tok[0] == 'D' || tok[0] == 'E')) {
      int n = std::stoi(tok.substr(1));
      s = tok[0] == 'A' ? lattice_A(n) : tok[0] == 'D' ? lattice_D(n) : lattice_E(n);
    } else {
      throw k3_error("standard_lattice: unknown summand '" + tok + "'");
    }
    if (scale != 1) s = twist(s, scale);
    acc = acc ? direct_sum(*acc, s) : s;
  }
  return *acc;
}

// Reduction into the canonical interval [0, m): value mod m*Z.
inline BigRat mod_interval(const BigRat& x, long m) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), numer(x).get_mpz_t(),
             BigInt(denom(x) * m).get_mpz_t());
  return x - BigRat(q * m);
}

// Discriminant group D(L) = L^dual / L with its torsion quadratic form.
// Generators are rational coordinate vectors in the basis of L; gens[i] has
// the cyclic order orders[i], and the orders form a divisibility chain.
// Elements are coefficient vectors c, meaning sum c_i * gens[i].
struct DiscGroup {
  IntMatrix gram;
  std::vector<std::vector<BigRat>> gens;
  std::vector<BigInt> orders;
  std::vector<BigRat> gen_q;  // q(gens[i]) in [0, 2)
};

inline std::vector<BigRat> disc_rep(const DiscGroup& d,
                                    const std::vector<BigInt>& c) {
  std::vector<BigRat> x(static_cast<size_t>(d.gram.rows), BigRat(0));
  for (size_t i = 0; i < d.gens.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) x[j] += BigRat(c[i]) * d.gens[i][j];
  return x;
}

inline BigRat disc_q(const DiscGroup& d, const std::vector<BigInt>& c) {
  std::vector<BigRat> x = disc_rep(d, c);
  return mod_interval(pair_q(d.gram, x, x), 2);
}

inline BigRat disc_b(const DiscGroup& d, const std::vector<BigInt>& c1,
                     const std::vector<BigInt>& c2) {
  std::vector<BigRat> x = disc_rep(d, c1), y = disc_rep(d, c2);
  return mod_interval(pair_q(d.gram, x, y), 1);
}

inline BigInt disc_group_order(const DiscGroup& d) {
  BigInt n = 1;
  for (const BigInt& o : d.orders) n *= o;
  return n;
}

// With U G V = D in Smith form, the dual quotient L^dual/L is generated by
// the columns of V scaled by 1/d_i: the smith transform of the coordinate
// isomorphism L^dual/L = Z^n / G Z^n.
inline DiscGroup discriminant_group(const Lattice& L) {
  if (!nondegenerate(L)) throw k3_error("discriminant_group: degenerate Gram");
  SmithResult s = smith_normal_form(L.gram);
  DiscGroup d;
  d.gram = L.gram;
  for (int i = 0; i < L.rank; ++i) {
    const BigInt& di = s.D.at(i, i);
    if (di == 1) continue;
    std::vector<BigRat> g(static_cast<size_t>(L.rank));
    for (int r = 0; r < L.rank; ++r) {
      BigRat e(s.V.at(r, i), di);
      e.canonicalize();
      g[static_cast<size_t>(r)] = mod_interval(e, 1);
    }
    d.gens.push_back(std::move(g));
    d.orders.push_back(di);
  }
  for (size_t i = 0; i < d.gens.size(); ++i) {
    std::vector<BigInt> c(d.gens.size(), BigInt(0));
    c[i] = 1;
    d.gen_q.push_back(disc_q(d, c));
  }
  return d;
}

inline int two_torsion_dim(const DiscGroup& d) {
  int k = 0;
  for (const BigInt& o : d.orders)
    if (sgn(o % 2) == 0) ++k;
  return k;
}

// All elements of D(L)[2] as coefficient vectors (2^k of them, zero first).
inline std::vector<std::vector<BigInt>> two_torsion_elements(const DiscGroup& d) {
  std::vector<size_t> slots;
  for (size_t i = 0; i < d.orders.size(); ++i)
    if (sgn(d.orders[i] % 2) == 0) slots.push_back(i);
  std::vector<std::vector<BigInt>> out;
  size_t count = size_t{1} << slots.size();
  for (size_t mask = 0; mask < count; ++mask) {
    std::vector<BigInt> c(d.orders.size(), BigInt(0));
    for (size_t b = 0; b < slots.size(); ++b)
      if (mask & (size_t{1} << b)) c[slots[b]] = d.orders[slots[b]] / 2;
    out.push_back(std::move(c));
  }
  return out;
}

// First nonzero 2-torsion element with q = 0 in Q/2Z, if any.
inline std::optional<std::vector<BigInt>> isotropic_order2(const DiscGroup& d) {
  std::vector<std::vector<BigInt>> elems = two_torsion_elements(d);
  for (size_t k = 1; k < elems.size(); ++k)
    if (sgn(disc_q(d, elems[k])) == 0) return elems[k];
  return std::nullopt;
}

// Genus-level comparison of torsion forms: same multiset of
// (element order, q-value) over the whole group. Walks all elements, so meant
// for small discriminant groups only.
inline bool same_discriminant_form(const DiscGroup& a, const DiscGroup& b) {
  if (disc_group_order(a) != disc_group_order(b)) return false;
  auto profile = [](const DiscGroup& d) {
    std::vector<std::pair<BigInt, BigRat>> out;
    std::vector<BigInt> c(d.orders.size(), BigInt(0));
    for (;;) {
      // Order of c is lcm over i of orders[i] / gcd(c_i, orders[i]).
      BigInt order = 1;
      for (size_t i = 0; i < c.size(); ++i) {
        BigInt oi = d.orders[i] / gcd(c[i], d.orders[i]);
        order = order / gcd(order, oi) * oi;
      }
      out.emplace_back(order, disc_q(d, c));
      size_t i = 0;
      for (; i < c.size(); ++i) {
        c[i] += 1;
        if (c[i] < d.orders[i]) break;
        c[i] = 0;
      }
      if (i == c.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return profile(a) == profile(b);
}

}  // namespace k3kit
