#pragma once

#include <vector>

#include "irspec/rational.hpp"

namespace irs {

// Dense row-major matrix of exact rationals. Sizes here are at most
// 15 x 15, so plain Gaussian elimination is enough.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0) {}

  static RationalMatrix identity(int n);
  static RationalMatrix ones(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  RationalMatrix operator*(const Rational& s) const;
  bool operator==(const RationalMatrix& o) const;

  Rational trace() const;
  Rational sum() const;
  Rational determinant() const;
  RationalMatrix inverse() const;  // throws if singular

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace irs
