#include "commands.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "irspec/errors.hpp"
#include "irspec/fkn.hpp"
#include "irspec/hyper.hpp"
#include "irspec/laplacian.hpp"
#include "irspec/metrics.hpp"

namespace irs::cli {

namespace {

using json = nlohmann::ordered_json;

Partition partition_of(const RunConfig& c) {
  return c.partition.empty() ? singleton_partition(c.m) : parse_partition(c.partition, c.m);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

// "name:key=value,key=value"
std::pair<std::string, std::map<std::string, std::string>> split_rule(const std::string& spec) {
  std::map<std::string, std::string> kv;
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw InputError("bad rule parameter '" + item + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return {name, kv};
}

int int_param(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InputError("rule needs parameter " + key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw InputError("bad integer for " + key);
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad integer for " + key + ": " + it->second);
  }
}

Aggregator build_rule(const RunConfig& c) {
  const SettingPtr s = make_setting(c.m, c.n, partition_of(c));
  const auto [name, kv] = split_rule(c.rule);
  auto voter = [&] {
    const int i = int_param(kv, "i");
    if (i < 1 || i > c.n) throw InputError("voter index out of range");
    return i;
  };
  auto perm = [&](const std::string& key, bool required) -> Permutation {
    auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw InputError("rule needs parameter " + key);
      return Permutation::identity(c.m);
    }
    return parse_perm(it->second, c.m);
  };
  if (name == "dictator") return make_dictator(s, voter(), perm("sigma", false));
  if (name == "constant") return make_constant(s, perm("output", true));
  if (name == "plurality") return make_plurality(s);
  if (name == "borda") return make_borda(s);
  if (name == "random") {
    Rng rng(c.seed);
    return random_aggregator(s, rng);
  }
  if (name == "corrupted-dictator") {
    const int k = int_param(kv, "k");
    if (k < 0) throw InputError("k must be non-negative");
    return corrupt_prefix(make_dictator(s, voter(), perm("sigma", false)), static_cast<std::size_t>(k), c.seed);
  }
  throw InputError("unknown rule '" + name + "'");
}

PreferenceOrders orders_of(const RunConfig& c, const Subgroup& H) {
  if (c.orders.empty() || c.orders == "default") return default_orders(H);
  if (c.orders == "random") {
    Rng rng(c.seed ^ 0x5bd1e995ULL);
    return random_orders(H, rng);
  }
  return orders_from_json(read_json(c.orders), H);
}

std::optional<Rational> parse_sigma4(const std::string& text) {
  if (text == "auto") return std::nullopt;
  Rational s;
  if (s.set_str(text, 10) != 0) throw InputError("--sigma-hyper takes 'auto' or a rational p/q");
  s.canonicalize();
  if (s < 0 || s > 1) throw InputError("--sigma-hyper must lie in [0, 1]");
  return s * s * s * s;
}

json clusters_json(const std::vector<Eigencluster>& cl) {
  json a = json::array();
  for (const auto& c : cl) a.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  return a;
}

}  // namespace

json cmd_spectra(const RunConfig& c) {
  if (c.m < 3) throw InputError("spectra needs m >= 3 (m = 2 is degenerate)");
  json r;
  r["command"] = "spectra";
  r["m"] = c.m;
  r["n"] = c.n;
  const HatL1System h = hat_l1(c.m);
  json eig = json::array();
  for (Eigen::Index i = 0; i < h.eigenvalues.size(); ++i) eig.push_back(h.eigenvalues[i]);
  r["hat_l1"] = {{"dimension", h.hat.rows()},
                 {"eigenvalues", eig},
                 {"clusters", clusters_json(h.clusters)},
                 {"expected", {0.0, 1.0 / (c.m * (c.m - 1)), 1.0 / c.m}}};
  const SpectralReport g = spectral_gap(c.m, c.n, c.dense_limit, c.samples > 0 ? c.samples : 64, c.seed);
  json ev = json::array();
  for (double v : g.eigenvalues) ev.push_back(v);
  r["laplacian"] = {{"normalization", g.normalization},
                    {"exhaustive", g.exhaustive},
                    {"dimension", g.dimension},
                    {"clusters", clusters_json(g.clusters)},
                    {"min_eigenvalue", g.min_eigenvalue},
                    {"gap", g.gap},
                    {"bracket", {g.bracket_low, g.bracket_high}},
                    {"gap_in_bracket", g.gap >= g.bracket_low - 1e-9 && g.gap <= g.bracket_high + 1e-9},
                    {"rayleigh_samples", g.rayleigh_samples}};
  return r;
}

json cmd_analyze(const RunConfig& c) {
  if (c.input.empty() == c.rule.empty()) throw InputError("analyze takes exactly one of --input and --rule");
  const Aggregator f = c.input.empty() ? build_rule(c) : aggregator_from_json(read_json(c.input));
  const Setting& s = f.setting();
  json r;
  r["command"] = "analyze";
  r["m"] = s.m;
  r["n"] = s.n;
  r["partition"] = partition_to_string(s.H.partition());
  r["rule"] = rule_name(f.type());
  const IRValue ir = ir_combinatorial(f);
  r["ir"] = to_json(ir);
  r["manipulation"] = to_json(manipulation_power(f, orders_of(c, s.H), ir.profile_distance_ir));
  RobustnessOptions opt;
  opt.center = c.center;
  opt.dense_limit = c.dense_limit;
  r["robustness"] = to_json(robustness(f, opt), s);
  return r;
}

json cmd_census(const RunConfig& c) {
  const SettingPtr s = make_setting(c.m, c.n, partition_of(c));
  const CensusReport rep = census_ir_functions(s);
  json r;
  r["command"] = "census";
  const json body = to_json(rep, *s);
  for (auto it = body.begin(); it != body.end(); ++it) r[it.key()] = it.value();
  return r;
}

json cmd_moments(const RunConfig& c) {
  const std::optional<Rational> sigma4 = parse_sigma4(c.sigma_hyper);
  const int lo = c.m_max ? 4 : c.m;
  const int hi = c.m_max ? *c.m_max : c.m;
  if (lo < 4) throw InputError("moments needs m >= 4 (the 15x15 Gram matrix is singular below)");
  if (hi > 16) throw InputError("moments supports m <= 16");
  const int samples = c.samples > 0 ? c.samples : 1000;
  json r;
  r["command"] = "moments";
  json det = json::array();
  for (int m = lo; m <= hi; ++m) {
    const AppendixTables t = build_appendix(m);
    det.push_back({{"m", m}, {"det", to_string(t.det)}, {"matches_formula", t.det == det_formula(m)}});
  }
  r["determinant"] = det;
  r["audit"] = to_json(audit_appendix(lo, c.audit_samples, c.seed));
  json table = json::array();
  std::optional<int> m0;
  std::vector<HyperReport> rows;
  for (int m = lo; m <= hi; ++m) rows.push_back(hypercontractivity_check(m, sigma4, samples, c.seed));
  for (auto it = rows.rbegin(); it != rows.rend() && it->violations == 0; ++it) m0 = it->m;
  for (const auto& row : rows) table.push_back(to_json(row));
  r["sigma"] = c.sigma_hyper == "auto" ? std::string("m^(-1/2)") : c.sigma_hyper;
  r["hypercontractivity"] = table;
  r["empirical_m0"] = m0 ? json(*m0) : json(nullptr);
  return r;
}

std::string summarize(const std::string& command, const json& r) {
  std::ostringstream o;
  if (command == "spectra") {
    o << "m=" << r["m"] << " n=" << r["n"] << " gap=" << r["laplacian"]["gap"].get<double>()
      << " in bracket: " << (r["laplacian"]["gap_in_bracket"].get<bool>() ? "yes" : "no");
  } else if (command == "analyze") {
    o << r["rule"].get<std::string>() << " m=" << r["m"] << " n=" << r["n"]
      << " IR=" << r["ir"]["profile_distance_ir"].get<std::string>()
      << " M=" << r["manipulation"]["total"].get<std::string>();
  } else if (command == "census") {
    o << "census m=" << r["m"] << " n=" << r["n"] << ": " << r["constants"] << " constant, " << r["dictator_family"]
      << " dictator, " << r["other"] << " other";
  } else if (command == "moments") {
    o << "moments: empirical m0 = " << (r["empirical_m0"].is_null() ? std::string("none") : r["empirical_m0"].dump());
  }
  return o.str();
}

}  // namespace irs::cli
