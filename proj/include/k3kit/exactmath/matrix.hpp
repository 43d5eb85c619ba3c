#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "k3kit/exactmath/rational.hpp"

namespace k3kit {

struct IntMatrix {
  int rows = 0, cols = 0;
  std::vector<BigInt> a;  // row-major

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  BigInt& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const BigInt& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const IntMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
  if (x.cols != y.rows) throw k3_error("IntMatrix: size mismatch in product");
  IntMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const BigInt& xik = x.at(i, k);
      if (sgn(xik) == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

inline IntMatrix transpose(const IntMatrix& m) {
  IntMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

// Bareiss fraction-free elimination; exact divisions throughout.
inline BigInt det(IntMatrix m) {
  if (m.rows != m.cols) throw k3_error("det: non-square matrix");
  int n = m.rows;
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (sgn(m.at(k, k)) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (sgn(m.at(i, k)) != 0) { piv = i; break; }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        BigInt t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m.at(i, j) = t;
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

struct SmithResult {
  IntMatrix U, D, V;  // U * M * V = D, diagonal, d1 | d2 | ... , di >= 0
};

// Smith normal form with unimodular transforms on both sides.
inline SmithResult smith_normal_form(const IntMatrix& m) {
  IntMatrix A = m;
  IntMatrix U = IntMatrix::identity(m.rows);
  IntMatrix V = IntMatrix::identity(m.cols);
  int n = std::min(m.rows, m.cols);

  auto swap_rows = [&](int i, int j) {
    for (int k = 0; k < A.cols; ++k) std::swap(A.at(i, k), A.at(j, k));
    for (int k = 0; k < U.cols; ++k) std::swap(U.at(i, k), U.at(j, k));
  };
  auto swap_cols = [&](int i, int j) {
    for (int k = 0; k < A.rows; ++k) std::swap(A.at(k, i), A.at(k, j));
    for (int k = 0; k < V.rows; ++k) std::swap(V.at(k, i), V.at(k, j));
  };
  auto addmul_row = [&](int dst, int src, const BigInt& c) {
    for (int k = 0; k < A.cols; ++k) A.at(dst, k) += c * A.at(src, k);
    for (int k = 0; k < U.cols; ++k) U.at(dst, k) += c * U.at(src, k);
  };
  auto addmul_col = [&](int dst, int src, const BigInt& c) {
    for (int k = 0; k < A.rows; ++k) A.at(k, dst) += c * A.at(k, src);
    for (int k = 0; k < V.rows; ++k) V.at(k, dst) += c * V.at(k, src);
  };
  auto negate_row = [&](int i) {
    for (int k = 0; k < A.cols; ++k) A.at(i, k) = -A.at(i, k);
    for (int k = 0; k < U.cols; ++k) U.at(i, k) = -U.at(i, k);
  };

  for (int t = 0; t < n; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      for (int i = t; i < A.rows; ++i)
        for (int j = t; j < A.cols; ++j)
          if (sgn(A.at(i, j)) != 0 &&
              (pi < 0 || abs(A.at(i, j)) < abs(A.at(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) { t = n; break; }  // all zero, done
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);

      bool clean = true;
      for (int i = t + 1; i < A.rows; ++i) {
        if (sgn(A.at(i, t)) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), A.at(i, t).get_mpz_t(), A.at(t, t).get_mpz_t());
        addmul_row(i, t, -q);
        if (sgn(A.at(i, t)) != 0) clean = false;  // smaller pivot appeared
      }
      if (!clean) continue;
      for (int j = t + 1; j < A.cols; ++j) {
        if (sgn(A.at(t, j)) == 0) continue;
        BigInt q;
        mpz_fdiv_q(q.get_mpz_t(), A.at(t, j).get_mpz_t(), A.at(t, t).get_mpz_t());
        addmul_col(j, t, -q);
        if (sgn(A.at(t, j)) != 0) clean = false;
      }
      if (!clean) continue;

      // Pull in any entry the pivot does not divide yet.
      bool fixed = false;
      for (int i = t + 1; i < A.rows && !fixed; ++i)
        for (int j = t + 1; j < A.cols && !fixed; ++j)
          if (sgn(A.at(i, j) % A.at(t, t)) != 0) {
            addmul_row(t, i, BigInt(1));
            fixed = true;
          }
      if (!fixed) break;
    }
    if (t >= n) break;
    if (sgn(A.at(t, t)) < 0) negate_row(t);
  }
  for (int t = 0; t < n; ++t)
    if (sgn(A.at(t, t)) < 0) negate_row(t);
  return {U, A, V};
}

struct RatMatrix {
  int rows = 0, cols = 0;
  std::vector<BigRat> a;

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  static RatMatrix identity(int n) {
    RatMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static RatMatrix from_int(const IntMatrix& m) {
    RatMatrix r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = BigRat(m.a[i]);
    return r;
  }

  BigRat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const BigRat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const RatMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols != y.rows) throw k3_error("RatMatrix: size mismatch in product");
  RatMatrix z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const BigRat& xik = x.at(i, k);
      if (sgn(xik) == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

inline RatMatrix transpose(const RatMatrix& m) {
  RatMatrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
  return t;
}

inline RatMatrix inverse(const RatMatrix& m) {
  if (m.rows != m.cols) throw k3_error("inverse: non-square matrix");
  int n = m.rows;
  RatMatrix A = m, B = RatMatrix::identity(n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (sgn(A.at(i, k)) != 0) { piv = i; break; }
    if (piv < 0) throw k3_error("inverse: singular matrix");
    if (piv != k)
      for (int j = 0; j < n; ++j) {
        std::swap(A.at(k, j), A.at(piv, j));
        std::swap(B.at(k, j), B.at(piv, j));
      }
    BigRat d = A.at(k, k);
    for (int j = 0; j < n; ++j) { A.at(k, j) /= d; B.at(k, j) /= d; }
    for (int i = 0; i < n; ++i) {
      if (i == k || sgn(A.at(i, k)) == 0) continue;
      BigRat c = A.at(i, k);
      for (int j = 0; j < n; ++j) {
        A.at(i, j) -= c * A.at(k, j);
        B.at(i, j) -= c * B.at(k, j);
      }
    }
  }
  return B;
}

struct DiagonalizeResult {
  std::vector<BigRat> diag;  // entries of P^T G P
  RatMatrix P;
};

// Congruent diagonalization of a symmetric rational matrix by simultaneous
// row/column operations. No square roots, signs stay exact.
inline DiagonalizeResult diagonalize_symmetric(const RatMatrix& g) {
  if (g.rows != g.cols) throw k3_error("diagonalize_symmetric: non-square");
  int n = g.rows;
  RatMatrix A = g, P = RatMatrix::identity(n);
  auto add_basis = [&](int dst, int src, const BigRat& c) {
    // basis_dst += c * basis_src; congruent update of A on both sides
    for (int k = 0; k < n; ++k) A.at(dst, k) += c * A.at(src, k);
    for (int k = 0; k < n; ++k) A.at(k, dst) += c * A.at(k, src);
    for (int k = 0; k < n; ++k) P.at(k, dst) += c * P.at(k, src);
  };
  auto swap_basis = [&](int i, int j) {
    for (int k = 0; k < n; ++k) std::swap(A.at(i, k), A.at(j, k));
    for (int k = 0; k < n; ++k) std::swap(A.at(k, i), A.at(k, j));
    for (int k = 0; k < n; ++k) std::swap(P.at(k, i), P.at(k, j));
  };
  for (int t = 0; t < n; ++t) {
    if (sgn(A.at(t, t)) == 0) {
      int jd = -1;
      for (int j = t + 1; j < n; ++j)
        if (sgn(A.at(j, j)) != 0) { jd = j; break; }
      if (jd >= 0) {
        swap_basis(t, jd);
      } else {
        int jo = -1;
        for (int j = t + 1; j < n; ++j)
          if (sgn(A.at(t, j)) != 0) { jo = j; break; }
        if (jo < 0) continue;  // row t is zero; diagonal entry stays 0
        // A_tt = 0, A_jj = 0, A_tj != 0: one of basis_t +- basis_j works
        add_basis(t, jo, BigRat(1));
        if (sgn(A.at(t, t)) == 0) add_basis(t, jo, BigRat(-2));
      }
    }
    if (sgn(A.at(t, t)) == 0) continue;
    for (int j = t + 1; j < n; ++j) {
      if (sgn(A.at(t, j)) == 0) continue;
      add_basis(j, t, -A.at(t, j) / A.at(t, t));
    }
  }
  DiagonalizeResult r;
  r.P = P;
  r.diag.resize(n);
  for (int i = 0; i < n; ++i) r.diag[i] = A.at(i, i);
  return r;
}

}  // namespace k3kit
