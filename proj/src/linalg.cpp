#include "liesym/linalg.hpp"

#include <cmath>

namespace liesym {

Echelon rref(RMatrix m, std::size_t cols) {
  Echelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  out.rows = std::move(m);
  return out;
}

std::size_t rank(const RMatrix& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

RMatrix nullspace(const RMatrix& m, std::size_t cols) {
  Echelon e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  RMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rational>> solve(const RMatrix& m, const std::vector<Rational>& rhs, std::size_t cols) {
  RMatrix aug = m;
  for (std::size_t r = 0; r < aug.size(); ++r) {
    aug[r].resize(cols);
    aug[r].push_back(rhs[r]);
  }
  Echelon e = rref(std::move(aug), cols + 1);
  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == cols) return std::nullopt;
    x[e.pivots[r]] = e.rows[r][cols];
  }
  return x;
}

RMatrix identity(std::size_t n) {
  RMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RMatrix inverse(const RMatrix& m) {
  std::size_t n = m.size();
  RMatrix aug = m;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, Rational(0));
    aug[i][n + i] = 1;
  }
  Echelon e = rref(std::move(aug), n);
  if (e.pivots.size() != n) throw Error(ErrorKind::DependentBasis, "matrix is singular");
  RMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  }
  return inv;
}

Rational rationalize(double value, long max_den) {
  if (!std::isfinite(value)) throw Error(ErrorKind::BadParams, "cannot rationalize a non-finite value");
  // Continued fraction convergents.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(x);
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0;
    long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    double frac = x - a;
    if (std::abs(frac) < 1e-15) break;
    x = 1.0 / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

}  // namespace liesym
