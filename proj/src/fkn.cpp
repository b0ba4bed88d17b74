#include "irspec/fkn.hpp"

#include <cmath>
#include <limits>

#include "irspec/errors.hpp"
#include "irspec/laplacian.hpp"

namespace irs {

KernelDistance kernel_distance(const GEncoding& g, const Setting& s) {
  const ProfileSpace space(s.group.order(), g.n);
  LinProjection p = project_to_lin(g, space, s.rho);
  return {std::move(p.lin), p.residual_squared};
}

NearestDictator nearest_dictator(const LinFunction& lin) {
  NearestDictator out;
  out.constant_norm = lin.B.squaredNorm();
  double best = -1.0;
  for (int i = 1; i <= lin.n; ++i) {
    const double v = lin.A[i - 1].squaredNorm();
    out.norms.push_back(v);
    if (v > best) {
      best = v;
      out.voter = i;
    }
  }
  out.A = lin.A[out.voter - 1];
  return out;
}

Rounding round_to_consistent(const Matrix& A, int voter, const Setting& s) {
  Rounding out;
  out.voter = voter;
  out.distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.H.coset_count(); ++k) {
    const double d = (A - s.coset_g[k]).norm();
    if (d < out.distance - 1e-12) {
      out.distance = d;
      out.coset = k;
    }
  }
  out.sigma = s.H.coset(out.coset).representative;
  out.target = s.coset_g[out.coset];
  return out;
}

GEncoding center_with_dummy(const GEncoding& g, const Setting& s) {
  const ProfileSpace in(s.group.order(), g.n);
  const ProfileSpace out_space(s.group.order(), g.n + 1);
  GEncoding out;
  out.m = g.m;
  out.n = g.n + 1;
  out.values.resize(out_space.count());
  std::vector<std::size_t> z(g.n);
  for (std::size_t p = 0; p < out_space.count(); ++p) {
    const std::size_t y = out_space.vote(p, g.n + 1);
    const std::size_t yinv = s.group.inverse_index(y);
    for (int i = 1; i <= g.n; ++i)
      z[i - 1] = s.group.compose_index(yinv, out_space.vote(p, i));  // x_i then y^{-1}
    out.values[p] = g.values[in.encode(z)] * s.rho[y];
  }
  return out;
}

double matcs_ratio(const Matrix& A, const Matrix& B) {
  const double lhs = (A * B).cwiseAbs().sum();
  const double rhs = static_cast<double>(A.rows()) * A.norm() * B.norm();
  return rhs == 0.0 ? 0.0 : lhs / rhs;
}

FknDiagnostics fkn_diagnostics(const GEncoding& g_in, const Setting& s) {
  const int m = s.m;
  const int d = m - 1;
  const int n = g_in.n;
  const ProfileSpace space(s.group.order(), n);
  const double N = static_cast<double>(space.count());
  FknDiagnostics out;
  out.trace_M = s.M_H.trace();
  if (out.trace_M <= 1e-12) throw InputError("fkn diagnostics need a fixing subgroup (M_H != 0)");
  const double scale = 1.0 / std::sqrt(out.trace_M);

  GEncoding g = g_in;
  for (auto& v : g.values) v *= scale;
  const LinProjection proj = project_to_lin(g, space, s.rho);
  out.epsilon = proj.residual_squared;
  out.C = std::sqrt(static_cast<double>(m));
  out.alpha = 6.0 * d * std::pow(out.C, 4) * std::sqrt(out.epsilon);
  out.bound = 108.0 * std::pow(d, 4) * std::pow(m, 4) * out.epsilon;

  const Matrix Mk = s.M_H / out.trace_M;
  std::vector<Matrix> r(space.count());
  Matrix fourth = Matrix::Zero(Mk.rows(), Mk.cols());
  std::size_t tail = 0;
  for (std::size_t p = 0; p < space.count(); ++p) {
    const Matrix h = proj.lin.evaluate(p, space, s.rho);
    r[p] = h * h.transpose() - Mk;
    const double norm2 = r[p].squaredNorm();
    out.r_second += norm2;
    fourth += r[p].array().pow(4).matrix();
    if (std::sqrt(norm2) > out.alpha) ++tail;
  }
  out.r_second /= N;
  out.r_fourth = fourth.maxCoeff() / N;
  out.tail_mass = static_cast<double>(tail) / N;
  out.ratio = out.epsilon > 0 ? out.r_second / out.epsilon : 0.0;
  out.bound_holds = out.r_second <= out.bound + 1e-12;

  // Project every entry of r onto constants, rho1 entries of one voter
  // and products of rho1 entries of two distinct voters. Those functions
  // are orthogonal with squared norms 1, 1/d and 1/d^2.
  const int d2 = d * d;
  auto vec_rho = [&](std::size_t p, int i) {
    return Eigen::Map<const Eigen::RowVectorXd>(s.rho[space.vote(p, i)].data(), d2);
  };
  double residual = 0.0;
  for (Eigen::Index a = 0; a < Mk.rows(); ++a)
    for (Eigen::Index b = 0; b < Mk.cols(); ++b) {
      double mean = 0.0;
      std::vector<Eigen::RowVectorXd> lin1(n, Eigen::RowVectorXd::Zero(d2));
      std::vector<Matrix> lin2;
      std::vector<std::pair<int, int>> pairs;
      for (int i = 1; i <= n; ++i)
        for (int k = i + 1; k <= n; ++k) {
          pairs.emplace_back(i, k);
          lin2.push_back(Matrix::Zero(d2, d2));
        }
      for (std::size_t p = 0; p < space.count(); ++p) {
        const double phi = r[p](a, b);
        mean += phi;
        for (int i = 1; i <= n; ++i) lin1[i - 1] += phi * vec_rho(p, i);
        for (std::size_t q = 0; q < pairs.size(); ++q)
          lin2[q] += phi * vec_rho(p, pairs[q].first).transpose() * vec_rho(p, pairs[q].second);
      }
      mean /= N;
      for (auto& v : lin1) v *= d / N;
      for (auto& v : lin2) v *= static_cast<double>(d) * d / N;
      for (std::size_t p = 0; p < space.count(); ++p) {
        double fit = mean;
        for (int i = 1; i <= n; ++i) fit += lin1[i - 1].dot(vec_rho(p, i));
        for (std::size_t q = 0; q < pairs.size(); ++q)
          fit += (vec_rho(p, pairs[q].first) * lin2[q] * vec_rho(p, pairs[q].second).transpose())(0, 0);
        const double e = r[p](a, b) - fit;
        residual += e * e;
      }
    }
  out.degree2_residual = residual / N;
  return out;
}

RobustnessReport robustness(const Aggregator& f, const RobustnessOptions& opt) {
  const Setting& s = f.setting();
  RobustnessReport rep;
  const IRValue ir = ir_combinatorial(f, false);
  rep.ir = ir.profile_distance_ir;
  rep.ir_value = to_double(rep.ir);

  GEncoding g = encode_g(f);
  if (opt.center) {
    g = center_with_dummy(g, s);
    rep.centered = true;
  }
  const ProfileSpace space(s.group.order(), g.n);
  const LinProjection proj = project_to_lin(g, space, s.rho);
  rep.kernel_distance_squared = proj.residual_squared;

  if (opt.gap) {
    rep.gap = *opt.gap;
    rep.gap_source = "supplied";
  } else {
    const double dim = std::pow(static_cast<double>(s.group.order()), s.n) * (s.m - 1);
    if (s.m >= 3 && dim <= static_cast<double>(opt.dense_limit)) {
      rep.gap = spectral_gap(s.m, s.n, opt.dense_limit).gap;
      rep.gap_source = "measured";
    } else if (s.m >= 3) {
      rep.gap = s.n == 1 ? 1.0 / (s.m * (s.m - 1.0))
                         : (s.m - 2.0) / (s.m * (s.m - 1.0) * (s.m - 1.0));
      rep.gap_source = "lower bound";
    } else {
      rep.gap_source = "undefined for m = 2";
    }
  }
  rep.kernel_bound_holds = rep.gap > 0 && rep.kernel_distance_squared <= rep.ir_value / rep.gap + 1e-9;

  rep.nearest = nearest_dictator(proj.lin);
  const bool constant = rep.nearest.constant_norm > rep.nearest.norms[rep.nearest.voter - 1] + 1e-12;
  const Matrix& A = constant ? proj.lin.B : rep.nearest.A;
  rep.rounding = round_to_consistent(A, rep.nearest.voter, s);
  rep.rounding.constant = constant;

  const double N = static_cast<double>(space.count());
  double before = 0.0, after = 0.0;
  for (std::size_t p = 0; p < space.count(); ++p) {
    const Matrix& rho_x = s.rho[space.vote(p, rep.nearest.voter)];
    const Matrix h = constant ? A : Matrix(A * rho_x);
    const Matrix h2 = constant ? rep.rounding.target : Matrix(rep.rounding.target * rho_x);
    before += (g.values[p] - h).squaredNorm();
    after += (g.values[p] - h2).squaredNorm();
  }
  rep.dictator_distance_squared = after / N;
  const double nb = std::sqrt(before / N), na = std::sqrt(after / N);
  if (nb > 1e-12) {
    rep.rounding_factor = na / nb;
  } else {
    rep.rounding_factor = na <= 1e-9 ? 1.0 : std::numeric_limits<double>::infinity();
  }

  // The dummy voter stands for the constant part of the original.
  const bool dummy = opt.center && rep.nearest.voter == s.n + 1;
  if (constant || dummy) {
    rep.rounded = make_constant(f.setting_ptr(), rep.rounding.sigma);
  } else {
    rep.rounded = make_dictator(f.setting_ptr(), rep.nearest.voter, rep.rounding.sigma);
  }
  if (opt.diagnostics && s.M_H.trace() > 1e-12)
    rep.diagnostics = fkn_diagnostics(encode_g(f), s);
  return rep;
}

nlohmann::ordered_json to_json(const RobustnessReport& r, const Setting& s) {
  nlohmann::ordered_json j;
  j["ir"] = to_string(r.ir);
  j["centered"] = r.centered;
  j["kernel_distance_squared"] = r.kernel_distance_squared;
  j["gap"] = r.gap;
  j["gap_source"] = r.gap_source;
  j["kappa"] = 2.0;
  j["kernel_bound_holds"] = r.kernel_bound_holds;
  j["coefficient_norms"] = r.nearest.norms;
  j["constant_norm"] = r.nearest.constant_norm;
  nlohmann::ordered_json d;
  d["kind"] = r.rounding.constant ? "constant" : "dictator";
  if (!r.rounding.constant) d["voter"] = r.nearest.voter;
  d["sigma"] = to_string(r.rounding.sigma);
  d["coset"] = to_string(s.H.coset(r.rounding.coset).representative);
  d["nearest_point_distance"] = r.rounding.distance;
  j["rounded"] = d;
  j["dictator_distance_squared"] = r.dictator_distance_squared;
  j["rounding_factor"] = r.rounding_factor;
  const auto& g = r.diagnostics;
  nlohmann::ordered_json diag;
  diag["trace_M"] = g.trace_M;
  diag["epsilon"] = g.epsilon;
  diag["C"] = g.C;
  diag["alpha"] = g.alpha;
  diag["E_r_squared"] = g.r_second;
  diag["max_E_r_ij_fourth"] = g.r_fourth;
  diag["tail_mass"] = g.tail_mass;
  diag["ratio_to_epsilon"] = g.ratio;
  diag["bound_108"] = g.bound;
  diag["bound_holds"] = g.bound_holds;
  diag["degree2_residual"] = g.degree2_residual;
  j["diagnostics"] = diag;
  return j;
}

}  // namespace irs
