#pragma once

#include <json.hpp>
#include <optional>

#include "irspec/aggregators.hpp"
#include "irspec/metrics.hpp"

namespace irs {

struct KernelDistance {
  LinFunction lin;
  double distance_squared = 0;
};

KernelDistance kernel_distance(const GEncoding& g, const Setting& s);

struct NearestDictator {
  int voter = 0;  // lowest index among maximizers
  Matrix A;
  std::vector<double> norms;  // ||A^i||_F^2
  double constant_norm = 0;   // ||B||_F^2
};

NearestDictator nearest_dictator(const LinFunction& lin);

struct Rounding {
  bool constant = false;
  int voter = 0;
  Permutation sigma;   // canonical representative of the best coset
  std::size_t coset = 0;
  Matrix target;       // M_H rho1(sigma)
  double distance = 0; // ||A* - target||_F
};

// Exhaustive nearest point among M_H rho1(y), y over coset representatives.
Rounding round_to_consistent(const Matrix& A, int voter, const Setting& s);

// Dummy-voter centering: g'(x, y) = g(x_1 y^{-1}, ..., x_n y^{-1}) rho1(y)
// with products taken left to right. The result has n+1 voters and mean 0.
GEncoding center_with_dummy(const GEncoding& g, const Setting& s);

struct FknDiagnostics {
  double trace_M = 0;          // normalization K
  double epsilon = 0;          // E ||g/sqrt(K) - lin||^2
  double C = 0;                // sqrt(m)
  double alpha = 0;            // 6 (m-1) C^4 sqrt(eps)
  double r_second = 0;         // E ||r||^2, r = h h^T - M/K
  double r_fourth = 0;         // max_ij E r_ij^4
  double tail_mass = 0;        // Pr[||r|| > alpha]
  double ratio = 0;            // E||r||^2 / eps (0 when eps = 0)
  double bound = 0;            // 108 (m-1)^4 m^4 eps
  bool bound_holds = true;
  double degree2_residual = 0; // mass of r outside degree <= 2
};

FknDiagnostics fkn_diagnostics(const GEncoding& g, const Setting& s);

// ||AB||_1 <= d ||A||_2 ||B||_2 with entrywise norms. Returns lhs / rhs.
double matcs_ratio(const Matrix& A, const Matrix& B);

struct RobustnessReport {
  Rational ir;
  double ir_value = 0;
  bool centered = false;
  double kernel_distance_squared = 0;
  double gap = 0;
  std::string gap_source;
  bool kernel_bound_holds = false;
  NearestDictator nearest;
  Rounding rounding;
  double dictator_distance_squared = 0;
  double rounding_factor = 1;  // ||g - h'|| / ||g - h||
  FknDiagnostics diagnostics;
  std::optional<Aggregator> rounded;
};

struct RobustnessOptions {
  bool center = false;
  std::optional<double> gap;  // measured externally; otherwise computed or bounded
  std::size_t dense_limit = kDefaultDenseLimit;
  bool diagnostics = true;
};

RobustnessReport robustness(const Aggregator& f, const RobustnessOptions& opt = {});

nlohmann::ordered_json to_json(const RobustnessReport& r, const Setting& s);

}  // namespace irs
