#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "k3kit/exactmath/matrix.hpp"
#include "k3kit/exactmath/rational.hpp"
#include "k3kit/lattice/lattice.hpp"

namespace k3kit {

// All vectors of norm -2 in a negative definite lattice, both signs included,
// sorted lexicographically. Enumeration runs over an exact rational squared
// completion of the form, so the bounds per coordinate are tested in BigRat
// rather than through floating-point square roots.
inline std::vector<std::vector<BigInt>> root_vectors(const Lattice& L) {
  if (!nondegenerate(L)) throw k3_error("root_vectors: degenerate lattice");
  if (L.sig_pos != 0 || L.sig_neg != L.rank)
    throw k3_error("root_vectors: lattice not negative definite");
  int n = L.rank;
  std::vector<std::vector<BigInt>> roots;
  if (n == 0) return roots;
  // Q = -G = sum_i c_i (x_i + sum_{j>i} u_ij x_j)^2 with all c_i > 0.
  std::vector<std::vector<BigRat>> q(static_cast<size_t>(n),
                                     std::vector<BigRat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      q[static_cast<size_t>(i)][static_cast<size_t>(j)] = BigRat(-L.gram.at(i, j));
  std::vector<BigRat> c(static_cast<size_t>(n));
  std::vector<std::vector<BigRat>> u(static_cast<size_t>(n),
                                     std::vector<BigRat>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i) {
    auto& qi = q[static_cast<size_t>(i)];
    c[static_cast<size_t>(i)] = qi[static_cast<size_t>(i)];
    if (sgn(c[static_cast<size_t>(i)]) <= 0)
      throw k3_error("root_vectors: completion pivot not positive");
    for (int j = i + 1; j < n; ++j)
      u[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          qi[static_cast<size_t>(j)] / c[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j)
      for (int k = i + 1; k < n; ++k)
        q[static_cast<size_t>(j)][static_cast<size_t>(k)] -=
            c[static_cast<size_t>(i)] * u[static_cast<size_t>(i)][static_cast<size_t>(j)] *
            u[static_cast<size_t>(i)][static_cast<size_t>(k)];
  }
  std::vector<BigInt> x(static_cast<size_t>(n));
  std::function<void(int, const BigRat&)> rec = [&](int i, const BigRat& budget) {
    if (i < 0) {
      if (sgn(budget) == 0) roots.push_back(x);
      return;
    }
    BigRat s = 0;
    for (int j = i + 1; j < n; ++j)
      s += u[static_cast<size_t>(i)][static_cast<size_t>(j)] *
           BigRat(x[static_cast<size_t>(j)]);
    BigRat ms = -s;
    BigInt t0;
    mpz_fdiv_q(t0.get_mpz_t(), numer(ms).get_mpz_t(), denom(ms).get_mpz_t());
    for (BigInt t = t0;; --t) {
      BigRat off = BigRat(t) + s;
      BigRat w = c[static_cast<size_t>(i)] * off * off;
      if (w > budget) break;
      x[static_cast<size_t>(i)] = t;
      rec(i - 1, BigRat(budget - w));
    }
    for (BigInt t = t0 + 1;; ++t) {
      BigRat off = BigRat(t) + s;
      BigRat w = c[static_cast<size_t>(i)] * off * off;
      if (w > budget) break;
      x[static_cast<size_t>(i)] = t;
      rec(i - 1, BigRat(budget - w));
    }
  };
  rec(n - 1, BigRat(2));
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Connected ADE component with its simple roots ordered so that their Gram
// matrix equals the lattice_A / lattice_D / lattice_E convention exactly.
struct RootComponent {
  char type = 'A';
  int n = 0;
  std::vector<std::vector<BigInt>> simple;
};

struct RootSystem {
  std::vector<RootComponent> components;
  long root_count = 0;
};

inline std::string ade_label(const RootSystem& rs) {
  if (rs.components.empty()) return "0";
  std::string out;
  for (const RootComponent& c : rs.components) {
    if (!out.empty()) out += "+";
    out += c.type;
    out += std::to_string(c.n);
  }
  return out;
}

// Decomposition of the sublattice generated by norm -2 vectors into ADE
// components. The simple roots come from a generic linear functional; the
// component type from the shape of their Dynkin graph; and both the simple
// Gram matrix and the component root count are then checked exactly against
// the claimed type.
inline RootSystem root_sublattice(const Lattice& L) {
  std::vector<std::vector<BigInt>> roots = root_vectors(L);
  RootSystem rs;
  rs.root_count = static_cast<long>(roots.size());
  if (roots.empty()) return rs;
  size_t m = roots.size();
  std::vector<int> comp(m, -1);
  int ncomp = 0;
  for (size_t i = 0; i < m; ++i) {
    if (comp[i] >= 0) continue;
    std::vector<size_t> todo{i};
    comp[i] = ncomp;
    while (!todo.empty()) {
      size_t v = todo.back();
      todo.pop_back();
      for (size_t w = 0; w < m; ++w)
        if (comp[w] < 0 && sgn(pair_z(L.gram, roots[v], roots[w])) != 0) {
          comp[w] = ncomp;
          todo.push_back(w);
        }
    }
    ++ncomp;
  }

  // phi is injective on vectors with coordinates below B in absolute value,
  // so it vanishes nowhere on the roots and fixes a positive half.
  BigInt big = 0;
  for (const auto& r : roots)
    for (const BigInt& e : r) big = std::max(big, BigInt(abs(e)));
  BigInt base = 2 * big + 1;
  auto phi = [&](const std::vector<BigInt>& v) -> BigInt {
    BigInt s = 0, pw = 1;
    for (const BigInt& e : v) {
      s += e * pw;
      pw *= base;
    }
    return s;
  };

  for (int cid = 0; cid < ncomp; ++cid) {
    std::vector<std::vector<BigInt>> pos;
    for (size_t i = 0; i < m; ++i)
      if (comp[i] == cid && sgn(phi(roots[i])) > 0) pos.push_back(roots[i]);
    std::set<std::vector<BigInt>> posset(pos.begin(), pos.end());
    std::vector<std::vector<BigInt>> simple;
    for (const auto& alpha : pos) {
      bool split = false;
      for (const auto& beta : pos) {
        if (split || beta == alpha) continue;
        std::vector<BigInt> gamma(alpha.size());
        for (size_t k = 0; k < alpha.size(); ++k) gamma[k] = alpha[k] - beta[k];
        split = posset.count(gamma) != 0;
      }
      if (!split) simple.push_back(alpha);
    }
    int r = static_cast<int>(simple.size());

    std::vector<std::vector<int>> adj(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
      if (pair_z(L.gram, simple[static_cast<size_t>(i)], simple[static_cast<size_t>(i)]) != -2)
        throw k3_error("root_sublattice: simple root norm is not -2");
      for (int j = i + 1; j < r; ++j) {
        BigInt pv = pair_z(L.gram, simple[static_cast<size_t>(i)],
                           simple[static_cast<size_t>(j)]);
        if (sgn(pv) == 0) continue;
        if (pv != 1) throw k3_error("root_sublattice: simple pairing out of range");
        adj[static_cast<size_t>(i)].push_back(j);
        adj[static_cast<size_t>(j)].push_back(i);
      }
    }

    int branch = -1, nbranch = 0;
    for (int i = 0; i < r; ++i) {
      if (adj[static_cast<size_t>(i)].size() == 3) {
        branch = i;
        ++nbranch;
      }
      if (adj[static_cast<size_t>(i)].size() > 3)
        throw k3_error("root_sublattice: Dynkin vertex of degree > 3");
    }
    auto walk = [&](int start, int prev) {
      std::vector<int> out{start};
      int cur = start;
      for (;;) {
        int next = -1;
        for (int nb : adj[static_cast<size_t>(cur)])
          if (nb != prev) { next = nb; break; }
        if (next < 0) break;
        prev = cur;
        cur = next;
        out.push_back(cur);
      }
      return out;
    };

    char type = 'A';
    std::vector<int> order;
    if (nbranch == 0) {
      int start = -1;
      for (int i = 0; i < r && start < 0; ++i)
        if (adj[static_cast<size_t>(i)].size() <= 1) start = i;
      if (start < 0) throw k3_error("root_sublattice: cycle in Dynkin graph");
      order = walk(start, -1);
    } else if (nbranch == 1) {
      std::vector<std::vector<int>> arms;
      for (int nb : adj[static_cast<size_t>(branch)]) arms.push_back(walk(nb, branch));
      std::sort(arms.begin(), arms.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a[0] < b[0];
      });
      if (arms[0].size() == 1 && arms[1].size() == 1) {
        type = 'D';
        for (size_t k = arms[2].size(); k-- > 0;) order.push_back(arms[2][k]);
        order.push_back(branch);
        order.push_back(arms[0][0]);
        order.push_back(arms[1][0]);
      } else if (arms[0].size() == 1 && arms[1].size() == 2) {
        type = 'E';
        if (r < 6 || r > 8) throw k3_error("root_sublattice: E-shaped graph of bad rank");
        order.push_back(arms[1][1]);
        order.push_back(arms[1][0]);
        order.push_back(branch);
        for (int v : arms[2]) order.push_back(v);
        order.push_back(arms[0][0]);
      } else {
        throw k3_error("root_sublattice: arm lengths match no ADE type");
      }
    } else {
      throw k3_error("root_sublattice: more than one branch vertex");
    }
    if (static_cast<int>(order.size()) != r)
      throw k3_error("root_sublattice: simple system walk incomplete");

    Lattice model = type == 'A' ? lattice_A(r) : type == 'D' ? lattice_D(r) : lattice_E(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (pair_z(L.gram, simple[static_cast<size_t>(order[static_cast<size_t>(i)])],
                   simple[static_cast<size_t>(order[static_cast<size_t>(j)])]) !=
            model.gram.at(i, j))
          throw k3_error("root_sublattice: simple Gram differs from Cartan form");
    long expect = type == 'A'   ? static_cast<long>(r) * (r + 1)
                  : type == 'D' ? 2L * r * (r - 1)
                  : r == 6      ? 72L
                  : r == 7      ? 126L
                                : 240L;
    if (static_cast<long>(2 * pos.size()) != expect)
      throw k3_error("root_sublattice: component root count mismatch");

    RootComponent rc;
    rc.type = type;
    rc.n = r;
    for (int idx : order) rc.simple.push_back(simple[static_cast<size_t>(idx)]);
    rs.components.push_back(std::move(rc));
  }
  std::sort(rs.components.begin(), rs.components.end(),
            [](const RootComponent& a, const RootComponent& b) {
              if (a.type != b.type) return a.type < b.type;
              if (a.n != b.n) return a.n < b.n;
              return a.simple < b.simple;
            });
  return rs;
}

}  // namespace k3kit
