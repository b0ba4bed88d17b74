#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "irspec/perm.hpp"

namespace irs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// P(x)_{ij} = 1 iff x(i) = j.
Eigen::MatrixXi perm_matrix(const Permutation& x);

// U = [1/sqrt(m) | C] orthonormal; C is m x (m-1).
struct Basis {
  int m = 0;
  Matrix U;
  Matrix C;

  Eigen::RowVectorXd row(int j) const { return C.row(j - 1); }
  // Largest deviation among U^T U = I, C C^T = I - J/m, C^T C = I, 1 C = 0.
  double invariant_residual() const;
};

// Helmert completion: column k proportional to (1,...,1,-k,0,...,0).
Basis build_basis(int m);
// Any other completion, given as C; checked against the invariants.
Basis basis_from_completion(const Matrix& C);

Matrix rho1(const Permutation& x, const Basis& basis);

// rho1 over all of S_m, indexed like SymmetricGroup.
class Rho1Table {
 public:
  Rho1Table(const SymmetricGroup& group, const Basis& basis);
  const Matrix& operator[](std::size_t idx) const { return table_[idx]; }
  const Basis& basis() const { return basis_; }
  int m() const { return basis_.m; }
  std::size_t size() const { return table_.size(); }

 private:
  Basis basis_;
  std::vector<Matrix> table_;
};

// A matrix-valued function on profiles, stored by profile index. Row
// count is free; column count is m-1.
struct GEncoding {
  int m = 0;
  int n = 0;
  std::vector<Matrix> values;
};

// g(x) = B + sum_i A[i] rho1(x_i).
struct LinFunction {
  int n = 0;
  Matrix B;
  std::vector<Matrix> A;

  Matrix evaluate(std::size_t profile, const ProfileSpace& space,
                  const Rho1Table& rho) const;
};

GEncoding evaluate_all(const LinFunction& lin, const ProfileSpace& space,
                       const Rho1Table& rho);

struct LinProjection {
  LinFunction lin;
  double residual_squared = 0.0;
  double norm_squared = 0.0;      // E ||g||^2
  double lin_norm_squared = 0.0;  // E ||lin||^2
};

// Least-squares projection onto span{1, rho1_ab(x_i)}. The coefficient
// formulas B = E g, A^i = E[g rho1(x_i)^T] are exact because the entries
// of rho1(x_i), viewed as row-vector functions, are orthonormal.
LinProjection project_to_lin(const GEncoding& g, const ProfileSpace& space,
                             const Rho1Table& rho);

// E_x (tr P(x))^k over S_m, exact.
std::uint64_t trivial_multiplicity(int m, int k);

// max |sum_x rho_ab rho_cd - (m!/(m-1)) delta_ac delta_bd|.
double schur_diagnostics(int m, const Basis& basis);

}  // namespace irs
