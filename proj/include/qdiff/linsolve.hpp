#pragma once

#include <optional>
#include <vector>

#include "qdiff/matrix.hpp"
#include "qdiff/scalar.hpp"
#include "qdiff/zpoly.hpp"

namespace qdiff {

// Exact linear algebra over K = Q(qt). Rows are cleared to integer-polynomial
// entries, eliminated cross-multiplication style, and stripped of their ZPoly
// content after every step, which keeps intermediate growth near the size of
// the reduced minors.

namespace detail {

struct Echelon {
  // rows in echelon form, entries polynomial Scalars
  std::vector<std::vector<Scalar>> rows;
  std::vector<std::size_t> pivot_cols;
};

inline void strip_row_content(std::vector<Scalar>& row) {
  ZPoly g;
  for (const auto& s : row) {
    if (s.is_zero()) continue;
    g = ZPoly::gcd(g, s.num());
    if (g.is_one()) return;
  }
  if (g.is_zero() || g.is_one()) return;
  const Scalar gs{g};
  for (auto& s : row)
    if (!s.is_zero()) s /= gs;
}

inline std::vector<Scalar> cleared_row(const std::vector<Scalar>& row) {
  ZPoly l(1);
  for (const auto& s : row) l = ZPoly::lcm(l, s.den());
  std::vector<Scalar> r(row.size());
  const Scalar ls{l};
  for (std::size_t j = 0; j < row.size(); ++j) r[j] = row[j] * ls;
  strip_row_content(r);
  return r;
}

inline Echelon echelon_form(const Matrix<Scalar>& m) {
  std::vector<std::vector<Scalar>> rows;
  rows.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Scalar> row(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(cleared_row(row));
  }
  Echelon e;
  std::size_t top = 0;
  for (std::size_t col = 0; col < m.cols() && top < rows.size(); ++col) {
    // pick the pivot with the smallest numerator degree
    std::size_t best = rows.size();
    for (std::size_t i = top; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      if (best == rows.size() ||
          rows[i][col].num().degree() < rows[best][col].num().degree())
        best = i;
    }
    if (best == rows.size()) continue;
    std::swap(rows[top], rows[best]);
    const std::vector<Scalar>& p = rows[top];
    for (std::size_t i = top + 1; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      const Scalar a = rows[i][col], b = p[col];
      for (std::size_t j = col; j < m.cols(); ++j)
        rows[i][j] = rows[i][j] * b - p[j] * a;
      strip_row_content(rows[i]);
    }
    e.pivot_cols.push_back(col);
    ++top;
  }
  rows.resize(top);
  e.rows = std::move(rows);
  return e;
}

}  // namespace detail

// Basis of the right null space of m; each basis vector is scaled to have
// coprime integer-polynomial entries.
inline std::vector<std::vector<Scalar>> null_space(const Matrix<Scalar>& m) {
  detail::Echelon e = detail::echelon_form(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Scalar>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> x(m.cols(), Scalar(0));
    x[f] = Scalar(1);
    for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
      const std::size_t pc = e.pivot_cols[k];
      Scalar acc(0);
      for (std::size_t j = pc + 1; j < m.cols(); ++j)
        if (!x[j].is_zero() && !e.rows[k][j].is_zero())
          acc += e.rows[k][j] * x[j];
      x[pc] = -acc / e.rows[k][pc];
    }
    basis.push_back(detail::cleared_row(x));
  }
  return basis;
}

// Solve m x = b exactly; nullopt when inconsistent.
inline std::optional<std::vector<Scalar>> linear_solve(
    const Matrix<Scalar>& m, const std::vector<Scalar>& b) {
  if (b.size() != m.rows()) throw domain_error("linear_solve: shape mismatch");
  Matrix<Scalar> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  detail::Echelon e = detail::echelon_form(aug);
  for (std::size_t k = 0; k < e.pivot_cols.size(); ++k)
    if (e.pivot_cols[k] == m.cols()) return std::nullopt;  // 0 = nonzero

  std::vector<Scalar> x(m.cols(), Scalar(0));
  for (std::size_t k = e.pivot_cols.size(); k-- > 0;) {
    const std::size_t pc = e.pivot_cols[k];
    Scalar acc = e.rows[k][m.cols()];
    for (std::size_t j = pc + 1; j < m.cols(); ++j)
      if (!x[j].is_zero() && !e.rows[k][j].is_zero())
        acc -= e.rows[k][j] * x[j];
    x[pc] = acc / e.rows[k][pc];
  }
  return x;
}

inline std::size_t rank(const Matrix<Scalar>& m) {
  return detail::echelon_form(m).pivot_cols.size();
}

}  // namespace qdiff
