#include "irspec/rational_matrix.hpp"

#include <stdexcept>

#include "irspec/errors.hpp"

namespace irs {

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

RationalMatrix RationalMatrix::ones(int rows, int cols) {
  RationalMatrix J(rows, cols);
  for (auto& v : J.data_) v = 1;
  return J;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw InputError("rational matrix product: shape mismatch");
  RationalMatrix out(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
    }
  return out;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  RationalMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  RationalMatrix out = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
  return out;
}

RationalMatrix RationalMatrix::operator*(const Rational& s) const {
  RationalMatrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

Rational RationalMatrix::trace() const {
  Rational t = 0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

Rational RationalMatrix::sum() const {
  Rational t = 0;
  for (const auto& v : data_) t += v;
  return t;
}

Rational RationalMatrix::determinant() const {
  if (rows_ != cols_) throw InputError("determinant of a non-square matrix");
  RationalMatrix a = *this;
  Rational det = 1;
  const int n = rows_;
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    while (pivot < n && a(pivot, c) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      for (int j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      const Rational f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

RationalMatrix RationalMatrix::inverse() const {
  if (rows_ != cols_) throw InputError("inverse of a non-square matrix");
  const int n = rows_;
  RationalMatrix a = *this;
  RationalMatrix inv = identity(n);
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    while (pivot < n && a(pivot, c) == 0) ++pivot;
    if (pivot == n) throw InputError("matrix is singular");
    if (pivot != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(c, j), a(pivot, j));
        std::swap(inv(c, j), inv(pivot, j));
      }
    const Rational p = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      const Rational f = a(r, c);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace irs
