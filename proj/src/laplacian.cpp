#include "irspec/laplacian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "irspec/errors.hpp"
#include "irspec/parallel.hpp"

namespace irs {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

LaplacianBundle build_one_voter(const SymmetricGroup& group, const Basis& basis,
                                bool with_kronecker_forms) {
  const int m = group.m();
  if (m > kDenseBundleMax)
    throw FeasibilityError("dense one-voter operators need m <= " + std::to_string(kDenseBundleMax),
                           std::to_string(m) + " matrices of size " + std::to_string(group.order()) +
                               "^2");
  const auto N = static_cast<Eigen::Index>(group.order());
  const double deg = static_cast<double>(factorial(m - 1));
  LaplacianBundle b;
  b.m = m;
  for (int j = 1; j <= m; ++j) {
    Matrix X(N, N);
    for (Eigen::Index x = 0; x < N; ++x)
      for (Eigen::Index y = 0; y < N; ++y)
        X(x, y) = group.rank_of(x, j) == group.rank_of(y, j) ? 1.0 : 0.0;
    b.Y.push_back(deg * Matrix::Identity(N, N) - X);
    b.X.push_back(std::move(X));
    b.D.push_back(basis.row(j).transpose() * basis.row(j));
  }
  b.L = Matrix::Zero(N * (m - 1), N * (m - 1));
  for (int j = 0; j < m; ++j) b.L += kron(b.Y[j], b.D[j]);
  if (with_kronecker_forms) {
    const Matrix J = Matrix::Ones(N, N);
    b.Lprime = Matrix::Zero(N * N, N * N);
    b.Ldoubleprime = Matrix::Zero(N * N, N * N);
    for (int j = 0; j < m; ++j) {
      b.Lprime += kron(b.X[j], J - b.X[j]);
      b.Ldoubleprime += kron(b.Y[j], b.X[j]);
    }
  }
  return b;
}

std::vector<Eigencluster> cluster_eigenvalues(const Vector& sorted, double tol) {
  std::vector<Eigencluster> out;
  for (Eigen::Index k = 0; k < sorted.size(); ++k) {
    if (!out.empty() && std::abs(sorted(k) - out.back().value) <= tol) {
      ++out.back().multiplicity;
    } else {
      out.push_back({sorted(k), 1});
    }
  }
  return out;
}

HatL1System hat_l1(int m, const Basis& basis) {
  if (m < 3)
    throw InputError("hat L(1) needs m >= 3 (at m = 2 the standard representation is one-dimensional)");
  const int d = m - 1;
  HatL1System h;
  h.m = m;
  Matrix sum = Matrix::Zero(d * d, d * d);
  h.E.resize(m, d * d);
  for (int j = 1; j <= m; ++j) {
    const Matrix Dj = basis.row(j).transpose() * basis.row(j);
    sum += kron(Dj, Dj);
    Matrix cc = kron(basis.row(j), basis.row(j));
    h.E.row(j - 1) = cc.row(0);
  }
  h.hat = (static_cast<double>(d) / m * Matrix::Identity(d * d, d * d) - sum) / d;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.hat);
  h.eigenvalues = es.eigenvalues();
  h.eigenvectors = es.eigenvectors();
  h.clusters = cluster_eigenvalues(h.eigenvalues);
  const double targets[3] = {0.0, 1.0 / (m * d), 1.0 / m};
  Matrix* spaces[3] = {&h.U0, &h.U1, &h.U2};
  for (int s = 0; s < 3; ++s) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < h.eigenvalues.size(); ++k)
      if (std::abs(h.eigenvalues(k) - targets[s]) < 1e-7) cols.push_back(k);
    spaces[s]->resize(d * d, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) spaces[s]->col(c) = h.eigenvectors.col(cols[c]);
  }
  return h;
}

HatL1System hat_l1(int m) { return hat_l1(m, build_basis(m)); }

const char* form_name(FormVariant v) {
  switch (v) {
    case FormVariant::LPrime: return "L'";
    case FormVariant::LDoublePrime: return "L''";
    case FormVariant::L: return "L";
  }
  return "?";
}

namespace {

// Visits every (voter, slice) pair: the N profiles sharing x^{-i}.
template <class Fn>
void for_each_slice(const ProfileSpace& space, Fn&& fn) {
  const std::size_t N = space.radix();
  std::vector<std::size_t> slice(N);
  for (int i = 1; i <= space.voters(); ++i) {
    const std::size_t stride = space.stride(i);
    for (std::size_t p = 0; p < space.count(); ++p) {
      if (space.vote(p, i) != 0) continue;
      for (std::size_t t = 0; t < N; ++t) slice[t] = p + t * stride;
      fn(i, slice);
    }
  }
}

}  // namespace

double apply_quadratic_form(const Aggregator& f, const LaplacianBundle& bundle,
                            FormVariant variant) {
  const Setting& s = f.setting();
  if (bundle.m != s.m) throw InputError("bundle and aggregator disagree on m");
  const auto N = static_cast<Eigen::Index>(s.group.order());
  const int m = s.m;
  double total = 0.0;

  if (variant == FormVariant::L) {
    const GEncoding g = encode_g(f);
    const Eigen::Index k = g.values[0].rows();
    Matrix W(N, k);
    for_each_slice(s.profiles, [&](int, const std::vector<std::size_t>& slice) {
      for (int j = 1; j <= m; ++j) {
        const Eigen::RowVectorXd c = s.rho.basis().row(j);
        for (Eigen::Index t = 0; t < N; ++t) W.row(t) = (g.values[slice[t]] * c.transpose()).transpose();
        total += (W.transpose() * bundle.Y[j - 1] * W).trace();
      }
    });
  } else {
    // Coset indicator vectors K (cosets x N), each with unit mass.
    const auto nc = static_cast<Eigen::Index>(s.H.coset_count());
    Matrix K = Matrix::Zero(nc, N);
    for (Eigen::Index c = 0; c < nc; ++c)
      for (const auto& y : s.H.coset(c).members)
        K(c, static_cast<Eigen::Index>(s.group.index_of(y))) = 1.0 / static_cast<double>(s.H.order());
    const Matrix J = Matrix::Ones(N, N);
    std::vector<Matrix> left, right;  // weight on (x_i, y_i), then on outputs
    for (int j = 0; j < m; ++j) {
      if (variant == FormVariant::LPrime) {
        left.push_back(bundle.X[j]);
        right.push_back(K * (J - bundle.X[j]) * K.transpose());
      } else {
        left.push_back(bundle.Y[j]);
        right.push_back(K * bundle.X[j] * K.transpose());
      }
    }
    for_each_slice(s.profiles, [&](int, const std::vector<std::size_t>& slice) {
      for (int j = 0; j < m; ++j)
        for (Eigen::Index t = 0; t < N; ++t) {
          const auto kt = f.output(slice[t]);
          for (Eigen::Index u = 0; u < N; ++u) {
            const double w = left[j](t, u);
            if (w != 0.0) total += w * right[j](kt, f.output(slice[u]));
          }
        }
    });
  }
  return total / std::pow(static_cast<double>(N), s.n + 1);
}

FormNormalization documented_normalization(FormVariant v, const Setting& s) {
  FormNormalization out;
  out.kappa = 2.0;
  if (v == FormVariant::LPrime)
    out.offset = s.n * (1.0 - (1.0 + s.M_H.trace()) / s.m);
  return out;
}

double ir_work_estimate(int m, int n) {
  return n * m * std::pow(static_cast<double>(factorial(m)), n) * static_cast<double>(factorial(m - 1));
}

namespace {

// classes[j-1][r-1] = group indices ranking j at r.
std::vector<std::vector<std::vector<std::size_t>>> rank_classes(const SymmetricGroup& group) {
  const int m = group.m();
  std::vector<std::vector<std::vector<std::size_t>>> cls(m, std::vector<std::vector<std::size_t>>(m));
  for (std::size_t x = 0; x < group.order(); ++x)
    for (int j = 1; j <= m; ++j) cls[j - 1][group.rank_of(x, j) - 1].push_back(x);
  return cls;
}

void check_budget(int m, int n) {
  const double work = ir_work_estimate(m, n);
  if (work > kIrWorkBudget)
    throw FeasibilityError("exhaustive IR sum exceeds the work budget", std::to_string(work) + " pair terms");
}

}  // namespace

double apply_Ln(const GEncoding& g, const SymmetricGroup& group, const Basis& basis) {
  const int m = group.m(), n = g.n;
  check_budget(m, n);
  const ProfileSpace space(group.order(), n);
  if (g.values.size() != space.count()) throw InputError("apply_Ln: encoding size mismatch");
  const auto cls = rank_classes(group);
  const std::size_t N = group.order();

  // v[p*m + j-1] = C_j g(x)^T.
  const Eigen::Index k = g.values[0].rows();
  std::vector<Vector> v(space.count() * m);
  for (std::size_t p = 0; p < space.count(); ++p)
    for (int j = 1; j <= m; ++j) v[p * m + (j - 1)] = g.values[p] * basis.row(j).transpose();
  (void)k;

  constexpr std::size_t kBlock = 64;
  std::vector<double> parts(block_count(space.count(), kBlock), 0.0);
  parallel_blocks(space.count(), kBlock, [&](std::size_t lo, std::size_t hi, std::size_t b) {
    double acc = 0.0;
    for (std::size_t p = lo; p < hi; ++p)
      for (int i = 1; i <= n; ++i) {
        const std::size_t xi = space.vote(p, i);
        for (int j = 1; j <= m; ++j) {
          const int r = group.rank_of(xi, j);
          const Vector& a = v[p * m + (j - 1)];
          for (std::size_t yi : cls[j - 1][r - 1]) {
            if (yi == xi) continue;
            acc += (a - v[space.with_vote(p, i, yi) * m + (j - 1)]).squaredNorm();
          }
        }
      }
    parts[b] = acc;
  });
  double total = 0.0;
  for (double x : parts) total += x;
  return total / std::pow(static_cast<double>(N), n + 1);
}

Matrix dense_Ln(const SymmetricGroup& group, int n, const Basis& basis) {
  const int m = group.m();
  const int d = m - 1;
  const ProfileSpace space(group.order(), n);
  const auto dim = static_cast<Eigen::Index>(space.count() * d);
  const auto cls = rank_classes(group);
  const double deg = static_cast<double>(factorial(m - 1));
  std::vector<Matrix> D;
  for (int j = 1; j <= m; ++j) D.push_back(basis.row(j).transpose() * basis.row(j));
  Matrix A = Matrix::Zero(dim, dim);
  for (std::size_t p = 0; p < space.count(); ++p) {
    const auto rp = static_cast<Eigen::Index>(p * d);
    for (int i = 1; i <= n; ++i) {
      const std::size_t xi = space.vote(p, i);
      for (int j = 1; j <= m; ++j) {
        A.block(rp, rp, d, d) += deg * D[j - 1];
        for (std::size_t yi : cls[j - 1][group.rank_of(xi, j) - 1]) {
          const auto rq = static_cast<Eigen::Index>(space.with_vote(p, i, yi) * d);
          A.block(rp, rq, d, d) -= D[j - 1];
        }
      }
    }
  }
  return A / static_cast<double>(group.order());
}

Vector apply_Ln_operator(const Vector& u, const SymmetricGroup& group, int n, const Basis& basis) {
  const int m = group.m();
  const int d = m - 1;
  const ProfileSpace space(group.order(), n);
  const auto cls = rank_classes(group);
  const double deg = static_cast<double>(factorial(m - 1));
  std::vector<Matrix> D;
  for (int j = 1; j <= m; ++j) D.push_back(basis.row(j).transpose() * basis.row(j));
  Vector out = Vector::Zero(u.size());
  for (std::size_t p = 0; p < space.count(); ++p) {
    const auto rp = static_cast<Eigen::Index>(p * d);
    for (int i = 1; i <= n; ++i) {
      const std::size_t xi = space.vote(p, i);
      for (int j = 1; j <= m; ++j) {
        Eigen::RowVectorXd acc = deg * u.segment(rp, d).transpose();
        for (std::size_t yi : cls[j - 1][group.rank_of(xi, j) - 1])
          acc -= u.segment(static_cast<Eigen::Index>(space.with_vote(p, i, yi) * d), d).transpose();
        out.segment(rp, d) += (acc * D[j - 1]).transpose();
      }
    }
  }
  return out / static_cast<double>(group.order());
}

namespace {

// Removes the Lin component of a row function stored as a flat vector.
Vector remove_lin(const Vector& u, const ProfileSpace& space, const Rho1Table& rho) {
  const int d = rho.m() - 1;
  GEncoding g;
  g.m = rho.m();
  g.n = space.voters();
  g.values.resize(space.count());
  for (std::size_t p = 0; p < space.count(); ++p)
    g.values[p] = u.segment(static_cast<Eigen::Index>(p * d), d).transpose();
  const LinProjection proj = project_to_lin(g, space, rho);
  Vector out(u.size());
  for (std::size_t p = 0; p < space.count(); ++p)
    out.segment(static_cast<Eigen::Index>(p * d), d) =
        (g.values[p] - proj.lin.evaluate(p, space, rho)).transpose();
  return out;
}

}  // namespace

SpectralReport spectral_gap(int m, int n, std::size_t dense_limit, int rayleigh_samples,
                            std::uint64_t seed) {
  if (m < 3) throw InputError("spectral analysis needs m >= 3 (m = 2 is degenerate)");
  if (n < 1) throw InputError("n must be >= 1");
  const SymmetricGroup group(m);
  const Basis basis = build_basis(m);
  SpectralReport rep;
  rep.m = m;
  rep.n = n;
  rep.normalization = "(1/|S_m|) L^n";
  rep.dimension = static_cast<std::size_t>(std::pow(static_cast<double>(group.order()), n)) * (m - 1);
  rep.bracket_low = static_cast<double>(m - 2) / (m * (m - 1.0) * (m - 1.0));
  rep.bracket_high = 1.0 / (m * (m - 1.0));

  if (rep.dimension <= dense_limit) {
    const Matrix A = dense_Ln(group, n, basis);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    const Vector ev = es.eigenvalues();
    rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    rep.clusters = cluster_eigenvalues(ev);
    rep.min_eigenvalue = ev(0);
    rep.gap = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
      if (ev(k) > 1e-9) {
        rep.gap = ev(k);
        break;
      }
    return rep;
  }

  // Power iteration on (s I - A) restricted to the complement of Lin.
  // The per-voter operator has norm at most 1, so s = n + 1 is a safe shift.
  rep.exhaustive = false;
  rep.rayleigh_samples = rayleigh_samples;
  const ProfileSpace space(group.order(), n);
  const Rho1Table rho(group, basis);
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  Vector u(static_cast<Eigen::Index>(rep.dimension));
  for (Eigen::Index k = 0; k < u.size(); ++k) u(k) = gauss(rng);
  u = remove_lin(u, space, rho);
  u.normalize();
  const double shift = n + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int it = 0; it < rayleigh_samples; ++it) {
    const Vector Au = apply_Ln_operator(u, group, n, basis);
    best = std::min(best, u.dot(Au));
    u = remove_lin(shift * u - Au, space, rho);
    u.normalize();
  }
  rep.gap = best;
  rep.min_eigenvalue = 0.0;
  return rep;
}

}  // namespace irs
