#include <doctest.h>

#include <random>

#include "irspec/errors.hpp"
#include "irspec/fkn.hpp"
#include "oracles.hpp"

using namespace irs;

namespace {

LinFunction two_voter_lin(int m, double w1, double w2) {
  LinFunction lin;
  lin.n = 2;
  lin.B = Matrix::Zero(m - 1, m - 1);
  lin.A = {w1 * Matrix::Identity(m - 1, m - 1), w2 * Matrix::Identity(m - 1, m - 1)};
  return lin;
}

}  // namespace

TEST_CASE("kernel distance") {
  const SettingPtr s = make_setting(3, 1, singleton_partition(3));
  const Aggregator d = make_dictator(s, 1, parse_perm("231", 3));
  CHECK(kernel_distance(encode_g(d), *s).distance_squared < 1e-20);

  Rng rng(1);
  const Aggregator c = corrupt(d, 1, rng);
  const double k = kernel_distance(encode_g(c), *s).distance_squared;
  const double ir = to_double(ir_combinatorial(c, false).profile_distance_ir);
  CHECK(k > 1e-3);
  CHECK(k <= ir / (1.0 / 6) + 1e-9);

  const SettingPtr s2 = make_setting(3, 2, scf_partition(3));
  const RobustnessReport r = robustness(make_plurality(s2));
  CHECK(r.kernel_distance_squared > 1e-3);
  CHECK(r.gap_source == "measured");
  CHECK(r.kernel_bound_holds);
}

TEST_CASE("nearest dictator") {
  const NearestDictator a = nearest_dictator(two_voter_lin(3, 0, 1));
  CHECK(a.voter == 2);
  CHECK((a.A - Matrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(nearest_dictator(two_voter_lin(3, 0.9, 0.1)).voter == 1);
  CHECK(nearest_dictator(two_voter_lin(3, 0.5, 0.5)).voter == 1);

  // a Lin function built from rho1(x_2) is read back by the projection
  const SettingPtr s = make_setting(3, 2, singleton_partition(3));
  const GEncoding g = evaluate_all(two_voter_lin(3, 0.2, 0.7), s->profiles, s->rho);
  const NearestDictator b = nearest_dictator(kernel_distance(g, *s).lin);
  CHECK(b.voter == 2);
  CHECK(std::abs(b.norms[0] - 0.08) < 1e-12);
  CHECK(std::abs(b.norms[1] - 0.98) < 1e-12);
}

TEST_CASE("rounding to a consistent matrix") {
  const SettingPtr s = make_setting(3, 1, singleton_partition(3));
  const Permutation sigma = parse_perm("312", 3);
  const Rounding exact = round_to_consistent(rho1(sigma, s->rho.basis()), 1, *s);
  CHECK(exact.sigma == sigma);
  CHECK(exact.distance < 1e-12);

  std::mt19937_64 rng(95);
  std::normal_distribution<double> z(0, 0.05);
  for (int t = 0; t < 20; ++t) {
    const Matrix noisy = 0.95 * rho1(sigma, s->rho.basis()) + Matrix::NullaryExpr(2, 2, [&] { return z(rng); });
    CHECK(round_to_consistent(noisy, 1, *s).sigma == sigma);
  }

  const SettingPtr scf = make_setting(3, 1, scf_partition(3));
  CHECK(scf->H.coset_count() == 3);
  const Rounding w = round_to_consistent(scf->M_H * rho1(sigma, scf->rho.basis()), 1, *scf);
  CHECK(w.sigma(1) == sigma(1));
  CHECK(w.distance < 1e-12);
}

TEST_CASE("matrix Cauchy-Schwarz") {
  const Matrix J = Matrix::Ones(3, 3);
  CHECK(std::abs((J * J).cwiseAbs().sum() - 27) < 1e-12);
  CHECK(std::abs(matcs_ratio(J, J) - 1) < 1e-12);
  std::mt19937_64 rng(100);
  std::normal_distribution<double> z;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 5;
    const Matrix A = Matrix::NullaryExpr(d, d, [&] { return z(rng); });
    const Matrix B = Matrix::NullaryExpr(d, d, [&] { return z(rng); });
    worst = std::max(worst, matcs_ratio(A, B));
  }
  CHECK(worst <= 1 + 1e-12);
}

TEST_CASE("diagnostics") {
  const SettingPtr s = make_setting(3, 1, singleton_partition(3));
  const FknDiagnostics z = fkn_diagnostics(encode_g(make_dictator(s, 1, parse_perm("213", 3))), *s);
  CHECK(z.epsilon < 1e-20);
  CHECK(z.r_second < 1e-20);
  CHECK(z.r_fourth < 1e-20);
  CHECK(z.tail_mass == 0);
  CHECK(std::abs(z.C - std::sqrt(3.0)) < 1e-15);

  // one corrupted entry out of 36 gives epsilon of order 0.01
  const SettingPtr s2 = make_setting(3, 2, singleton_partition(3));
  const Aggregator c = corrupt_prefix(make_dictator(s2, 1, parse_perm("213", 3)), 1, 3);
  const FknDiagnostics d = fkn_diagnostics(encode_g(c), *s2);
  CHECK(d.epsilon > 1e-3);
  CHECK(d.epsilon < 0.1);
  CHECK(d.bound_holds);
  CHECK(d.ratio < 108.0 * 16 * 81 / 100);
  CHECK(std::abs(d.bound - 108.0 * 16 * 81 * d.epsilon) < 1e-9);
  CHECK(d.degree2_residual < 1e-9);

  const SettingPtr scf = make_setting(3, 2, scf_partition(3));
  const FknDiagnostics p = fkn_diagnostics(encode_g(make_plurality(scf)), *scf);
  CHECK(std::abs(p.trace_M - 1) < 1e-12);
  CHECK(p.bound_holds);
  CHECK(p.degree2_residual < 1e-9);
}

TEST_CASE("pipeline is exact on the zero locus") {
  for (const auto& part : {singleton_partition(3), scf_partition(3)}) {
    const SettingPtr s = make_setting(3, 2, part);
    for (int i = 1; i <= 2; ++i)
      for (const auto& sigma : s->group.elements()) {
        const Aggregator d = make_dictator(s, i, sigma);
        const RobustnessReport r = robustness(d);
        CHECK(r.nearest.voter == i);
        CHECK(r.dictator_distance_squared <= 1e-12);
        REQUIRE(r.rounded);
        CHECK(r.rounded->table() == d.table());
      }
    const Aggregator c = make_constant(s, parse_perm("231", 3));
    const RobustnessReport r = robustness(c);
    CHECK(r.rounding.constant);
    CHECK(r.dictator_distance_squared <= 1e-12);
    CHECK(r.rounded->table() == c.table());
  }
}

TEST_CASE("recovery and monotonicity under corruption") {
  const SettingPtr s = make_setting(3, 2, singleton_partition(3));
  const Aggregator d = make_dictator(s, 2, parse_perm("132", 3));
  int decreasing = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    double last = -1;
    for (std::size_t k = 0; k <= 7; ++k) {
      const RobustnessReport r = robustness(corrupt_prefix(d, k, seed), {.diagnostics = false});
      if (k <= 1) {
        CHECK(r.rounded->table() == d.table());
      }
      CHECK(r.rounding_factor <= 2 + 1e-9);
      CHECK(r.dictator_distance_squared >= r.kernel_distance_squared - 1e-9);
      if (r.dictator_distance_squared < last - 1e-9) ++decreasing;
      last = r.dictator_distance_squared;
    }
  }
  CHECK(decreasing == 0);
}

TEST_CASE("dummy-voter centering") {
  const SettingPtr s = make_setting(3, 1, scf_partition(3));
  const GEncoding g = encode_g(make_plurality(s));
  const GEncoding c = center_with_dummy(g, *s);
  CHECK(c.n == 2);
  Matrix mean = Matrix::Zero(2, 2);
  for (const auto& v : c.values) mean += v;
  CHECK(mean.norm() / static_cast<double>(c.values.size()) < 1e-12);
  // a constant becomes a dictator of the dummy voter
  const GEncoding k = center_with_dummy(encode_g(make_constant(s, parse_perm("213", 3))), *s);
  const RobustnessReport r = robustness(make_constant(s, parse_perm("213", 3)), {.center = true});
  CHECK(r.centered);
  CHECK(r.nearest.voter == 2);
  CHECK(r.kernel_distance_squared < 1e-20);
  CHECK(r.rounded->type() == RuleType::Constant);
  CHECK(r.rounded->table() == make_constant(s, parse_perm("213", 3)).table());
  CHECK(k.values.size() == 36);
}
