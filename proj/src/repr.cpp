#include "irspec/repr.hpp"

#include <cmath>

#include "irspec/errors.hpp"
#include "irspec/parallel.hpp"

namespace irs {

namespace {
constexpr std::size_t kBlock = 256;
}

Eigen::MatrixXi perm_matrix(const Permutation& x) {
  const int m = x.size();
  Eigen::MatrixXi P = Eigen::MatrixXi::Zero(m, m);
  for (int i = 1; i <= m; ++i) P(i - 1, x(i) - 1) = 1;
  return P;
}

double Basis::invariant_residual() const {
  const Matrix I = Matrix::Identity(m, m);
  const Matrix J = Matrix::Ones(m, m);
  double r = (U.transpose() * U - I).cwiseAbs().maxCoeff();
  r = std::max(r, (C * C.transpose() - (I - J / m)).cwiseAbs().maxCoeff());
  r = std::max(r, (C.transpose() * C - Matrix::Identity(m - 1, m - 1)).cwiseAbs().maxCoeff());
  r = std::max(r, (Eigen::RowVectorXd::Ones(m) * C).cwiseAbs().maxCoeff());
  return r;
}

Basis build_basis(int m) {
  if (m < 2) throw InputError("build_basis: m must be >= 2");
  Matrix C = Matrix::Zero(m, m - 1);
  for (int k = 1; k < m; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) C(i, k - 1) = 1.0 / norm;
    C(k, k - 1) = -static_cast<double>(k) / norm;
  }
  return basis_from_completion(C);
}

Basis basis_from_completion(const Matrix& C) {
  const int m = static_cast<int>(C.rows());
  if (C.cols() != m - 1) throw InputError("completion must be m x (m-1)");
  Basis b;
  b.m = m;
  b.C = C;
  b.U.resize(m, m);
  b.U.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(m)));
  b.U.rightCols(m - 1) = C;
  if (b.invariant_residual() > 1e-10)
    throw InputError("completion does not satisfy the basis invariants");
  return b;
}

Matrix rho1(const Permutation& x, const Basis& basis) {
  return basis.C.transpose() * perm_matrix(x).cast<double>() * basis.C;
}

Rho1Table::Rho1Table(const SymmetricGroup& group, const Basis& basis) : basis_(basis) {
  if (group.m() != basis.m) throw InputError("Rho1Table: mismatched m");
  table_.reserve(group.order());
  for (const auto& x : group.elements()) table_.push_back(rho1(x, basis_));
}

Matrix LinFunction::evaluate(std::size_t profile, const ProfileSpace& space,
                             const Rho1Table& rho) const {
  Matrix out = B;
  for (int i = 1; i <= n; ++i) out.noalias() += A[i - 1] * rho[space.vote(profile, i)];
  return out;
}

GEncoding evaluate_all(const LinFunction& lin, const ProfileSpace& space,
                       const Rho1Table& rho) {
  GEncoding g;
  g.m = rho.m();
  g.n = lin.n;
  g.values.resize(space.count());
  for (std::size_t p = 0; p < space.count(); ++p) g.values[p] = lin.evaluate(p, space, rho);
  return g;
}

LinProjection project_to_lin(const GEncoding& g, const ProfileSpace& space,
                             const Rho1Table& rho) {
  const std::size_t N = space.count();
  if (g.values.size() != N || g.n != space.voters())
    throw InputError("project_to_lin: encoding does not match profile space");
  const int n = g.n;
  const Eigen::Index rows = g.values.at(0).rows(), cols = g.values[0].cols();

  struct Partial {
    Matrix B;
    std::vector<Matrix> A;
    double norm2 = 0.0;
  };
  std::vector<Partial> parts(block_count(N, kBlock));
  parallel_blocks(N, kBlock, [&](std::size_t lo, std::size_t hi, std::size_t b) {
    Partial& part = parts[b];
    part.B = Matrix::Zero(rows, cols);
    part.A.assign(n, Matrix::Zero(rows, cols));
    for (std::size_t p = lo; p < hi; ++p) {
      const Matrix& v = g.values[p];
      part.B += v;
      part.norm2 += v.squaredNorm();
      for (int i = 1; i <= n; ++i)
        part.A[i - 1].noalias() += v * rho[space.vote(p, i)].transpose();
    }
  });

  LinProjection out;
  out.lin.n = n;
  out.lin.B = Matrix::Zero(rows, cols);
  out.lin.A.assign(n, Matrix::Zero(rows, cols));
  for (const auto& part : parts) {
    out.lin.B += part.B;
    for (int i = 0; i < n; ++i) out.lin.A[i] += part.A[i];
    out.norm_squared += part.norm2;
  }
  const double inv = 1.0 / static_cast<double>(N);
  out.lin.B *= inv;
  for (auto& a : out.lin.A) a *= inv;
  out.norm_squared *= inv;

  out.lin_norm_squared = out.lin.B.squaredNorm();
  for (const auto& a : out.lin.A) out.lin_norm_squared += a.squaredNorm();

  std::vector<double> res(block_count(N, kBlock), 0.0);
  parallel_blocks(N, kBlock, [&](std::size_t lo, std::size_t hi, std::size_t b) {
    double s = 0.0;
    for (std::size_t p = lo; p < hi; ++p)
      s += (g.values[p] - out.lin.evaluate(p, space, rho)).squaredNorm();
    res[b] = s;
  });
  for (double s : res) out.residual_squared += s;
  out.residual_squared *= inv;
  return out;
}

std::uint64_t trivial_multiplicity(int m, int k) {
  if (k < 1) throw InputError("trivial_multiplicity: k must be positive");
  std::vector<int> w(m);
  for (int i = 0; i < m; ++i) w[i] = i + 1;
  BigInt total = 0;
  std::uint64_t count = 0;
  do {
    int fix = 0;
    for (int i = 0; i < m; ++i) fix += (w[i] == i + 1);
    BigInt t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(fix), static_cast<unsigned long>(k));
    total += t;
    ++count;
  } while (std::next_permutation(w.begin(), w.end()));
  if (total % count != 0) throw std::logic_error("character sum is not divisible by m!");
  BigInt q = total / count;
  return q.get_ui();
}

double schur_diagnostics(int m, const Basis& basis) {
  const SymmetricGroup group(m);
  const int d = m - 1;
  const int d2 = d * d;
  // Gram matrix of the d^2 coordinate functions rho_ab over the group.
  Matrix gram = Matrix::Zero(d2, d2);
  Eigen::VectorXd v(d2);
  for (const auto& x : group.elements()) {
    const Matrix r = rho1(x, basis);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) v(a * d + b) = r(a, b);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(v);
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  const double expected = static_cast<double>(group.order()) / d;
  return (gram - expected * Matrix::Identity(d2, d2)).cwiseAbs().maxCoeff();
}

}  // namespace irs
