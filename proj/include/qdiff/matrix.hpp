#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qdiff/numeric.hpp"

namespace qdiff {

// Dense matrix over any ring with value semantics.
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), d_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return d_[i * cols_ + j];
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& x : d_)
      if (!x.is_zero()) return false;
    return true;
  }

  Matrix operator-() const {
    Matrix r(*this);
    for (auto& x : r.d_) x = -x;
    return r;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw domain_error("Matrix: shape mismatch");
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] += b.d_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw domain_error("Matrix: shape mismatch");
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] -= b.d_[i];
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw domain_error("Matrix: shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j).is_zero()) continue;
          r(i, j) += aik * b(k, j);
        }
      }
    return r;
  }

  Matrix scaled(const T& k) const {
    Matrix r(*this);
    for (auto& x : r.d_) x *= k;
    return r;
  }

  template <class Fn>
  auto map(Fn&& fn) const -> Matrix<decltype(fn(std::declval<const T&>()))> {
    Matrix<decltype(fn(std::declval<const T&>()))> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = fn((*this)(i, j));
    return r;
  }

  // Gaussian elimination over a field T; returns determinant.
  T determinant() const {
    if (rows_ != cols_) throw domain_error("Matrix: determinant of non-square");
    Matrix a(*this);
    T det(1);
    for (std::size_t col = 0, row = 0; col < cols_; ++col, ++row) {
      std::size_t pivot = row;
      while (pivot < rows_ && a(pivot, col).is_zero()) ++pivot;
      if (pivot == rows_) return T(0);
      if (pivot != row) {
        for (std::size_t j = 0; j < cols_; ++j)
          std::swap(a(pivot, j), a(row, j));
        det = -det;
      }
      det *= a(row, col);
      const T inv = T(1) / a(row, col);
      for (std::size_t i = row + 1; i < rows_; ++i) {
        if (a(i, col).is_zero()) continue;
        T f = a(i, col) * inv;
        for (std::size_t j = col; j < cols_; ++j) a(i, j) -= f * a(row, j);
      }
    }
    return det;
  }

  // Matrix inverse over a field T (Gauss-Jordan).
  Matrix inverse() const {
    if (rows_ != cols_) throw domain_error("Matrix: inverse of non-square");
    Matrix a(*this);
    Matrix inv = identity(rows_);
    for (std::size_t col = 0; col < cols_; ++col) {
      std::size_t pivot = col;
      while (pivot < rows_ && a(pivot, col).is_zero()) ++pivot;
      if (pivot == rows_) throw domain_error("Matrix: singular");
      if (pivot != col)
        for (std::size_t j = 0; j < cols_; ++j) {
          std::swap(a(pivot, j), a(col, j));
          std::swap(inv(pivot, j), inv(col, j));
        }
      const T s = T(1) / a(col, col);
      for (std::size_t j = 0; j < cols_; ++j) {
        a(col, j) *= s;
        inv(col, j) *= s;
      }
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == col || a(i, col).is_zero()) continue;
        T f = a(i, col);
        for (std::size_t j = 0; j < cols_; ++j) {
          a(i, j) -= f * a(col, j);
          inv(i, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  // nilpotency test over a field: M^n == 0 with n = dimension
  bool is_nilpotent() const {
    if (rows_ != cols_) throw domain_error("Matrix: nilpotent of non-square");
    Matrix p(*this);
    for (std::size_t k = 1; k <= rows_; ++k) {
      if (p.is_zero()) return true;
      if (k < rows_) p = p * (*this);
    }
    return p.is_zero();
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> d_;
};

}  // namespace qdiff
