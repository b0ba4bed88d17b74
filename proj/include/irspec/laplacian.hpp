#pragma once

#include <string>
#include <vector>

#include "irspec/aggregators.hpp"
#include "irspec/repr.hpp"

namespace irs {

// Dense one-voter operators. Materialized only for m <= kDenseBundleMax:
// X^j and Y^j are m! x m!, which is 4 MB each at m = 6 and 200 MB at m = 7.
inline constexpr int kDenseBundleMax = 6;

struct LaplacianBundle {
  int m = 0;
  std::vector<Matrix> X;  // X^j_{xy} = 1 iff x^{-1}(j) = y^{-1}(j)
  std::vector<Matrix> Y;  // (m-1)! I - X^j
  std::vector<Matrix> D;  // C_j^T C_j
  Matrix L;               // sum_j Y^j (x) D^j
  // sum_j X^j (x) (J - X^j) and sum_j Y^j (x) X^j, only when requested.
  Matrix Lprime;
  Matrix Ldoubleprime;
};

LaplacianBundle build_one_voter(const SymmetricGroup& group, const Basis& basis,
                                bool with_kronecker_forms = false);

Matrix kron(const Matrix& a, const Matrix& b);

struct Eigencluster {
  double value = 0;
  int multiplicity = 0;
};

// Groups sorted eigenvalues whose gaps are below tol.
std::vector<Eigencluster> cluster_eigenvalues(const Vector& sorted, double tol = 1e-7);

struct HatL1System {
  int m = 0;
  Matrix hat;  // (m-1)^2 x (m-1)^2
  Vector eigenvalues;
  Matrix eigenvectors;
  std::vector<Eigencluster> clusters;
  Matrix U0, U1, U2;  // eigenspaces for 0, 1/(m(m-1)), 1/m
  Matrix E;           // row j is C_j (x) C_j
};

HatL1System hat_l1(int m, const Basis& basis);
HatL1System hat_l1(int m);

enum class FormVariant { LPrime, LDoublePrime, L };
const char* form_name(FormVariant v);

// Raw value of the variant's quadratic form, divided by |S_m|^{n+1}. The
// L' and L'' paths sum over F (coset indicator vectors scaled to unit
// mass), the L path over G. n voters use the per-voter sum of the
// one-voter form.
double apply_quadratic_form(const Aggregator& f, const LaplacianBundle& bundle,
                            FormVariant variant);

// Conversion from a raw form value to the ordered-pair IR:
// IR = kappa * (raw - offset). The offset is nonzero only for L' with a
// non-trivial H, where sum_j ||j-profile||^2 is not 1.
struct FormNormalization {
  double kappa = 0;
  double offset = 0;
};
FormNormalization documented_normalization(FormVariant v, const Setting& s);

// Upper bound on the number of neighbour triples visited by apply_Ln and
// by the exhaustive metrics.
double ir_work_estimate(int m, int n);
inline constexpr double kIrWorkBudget = 2e9;

// Ordered-pair IR of an arbitrary matrix-valued function:
// sum_i sum_j E over (x^{-i}, x_i, y_i) with x_i^{-1}(j) = y_i^{-1}(j)
// of ||C_j (g(x) - g(x'))^T||^2. Never materializes L^n.
double apply_Ln(const GEncoding& g, const SymmetricGroup& group, const Basis& basis);

// (1/|S_m|) L^n on row functions u: S_m^n -> R^{m-1}, entry (p, a) at
// p*(m-1) + a.
Matrix dense_Ln(const SymmetricGroup& group, int n, const Basis& basis);
Vector apply_Ln_operator(const Vector& u, const SymmetricGroup& group, int n,
                         const Basis& basis);

struct SpectralReport {
  int m = 0;
  int n = 0;
  std::string normalization;
  bool exhaustive = true;  // false when Rayleigh sampling was used
  std::size_t dimension = 0;
  std::vector<double> eigenvalues;  // dense path only, ascending
  std::vector<Eigencluster> clusters;
  double min_eigenvalue = 0;
  double gap = 0;  // least eigenvalue > 1e-9 (upper estimate if sampled)
  double bracket_low = 0;   // (m-2)/(m(m-1)^2)
  double bracket_high = 0;  // 1/(m(m-1))
  int rayleigh_samples = 0;
};

inline constexpr std::size_t kDefaultDenseLimit = 5000;

SpectralReport spectral_gap(int m, int n, std::size_t dense_limit = kDefaultDenseLimit,
                            int rayleigh_samples = 64, std::uint64_t seed = 1);

}  // namespace irs
