#include "irspec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "irspec/errors.hpp"
#include "irspec/parallel.hpp"

namespace irs {

namespace {

void check_budget(const Setting& s) {
  const double work = ir_work_estimate(s.m, s.n);
  if (work > kIrWorkBudget)
    throw FeasibilityError("exhaustive IR sum exceeds the work budget",
                           std::to_string(work) + " pair terms");
}

// Calls fn(i, slice) for the N profiles sharing x^{-i}; slice[t] has vote t
// for voter i.
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

BigInt pow_big(std::size_t base, std::size_t exp) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

// rank-class membership: cls[j-1][r-1] lists group indices.
std::vector<std::vector<std::vector<std::size_t>>> classes(const SymmetricGroup& g) {
  std::vector<std::vector<std::vector<std::size_t>>> c(g.m(), std::vector<std::vector<std::size_t>>(g.m()));
  for (std::size_t x = 0; x < g.order(); ++x)
    for (int j = 1; j <= g.m(); ++j) c[j - 1][g.rank_of(x, j) - 1].push_back(x);
  return c;
}

}  // namespace

IRValue ir_combinatorial(const Aggregator& f, bool with_quadratic) {
  const Setting& s = f.setting();
  check_budget(s);
  const int m = s.m;
  const auto cls = classes(s.group);
  std::vector<long long> dist(s.n, 0), ind(s.n, 0);
  std::vector<long long> sum(m);
  std::map<int, long long> hist;
  for_each_slice(s.profiles, [&](int i, const std::vector<std::size_t>& slice) {
    for (int j = 1; j <= m; ++j)
      for (int r = 1; r <= m; ++r) {
        const auto& members = cls[j - 1][r - 1];
        const auto size = static_cast<long long>(members.size());
        std::fill(sum.begin(), sum.end(), 0);
        long long sq = 0;
        hist.clear();
        for (std::size_t x : members) {
          const std::size_t k = f.output(slice[x]);
          const auto c = s.H.profile_counts(k, j);
          for (int t = 0; t < m; ++t) {
            sum[t] += c[t];
            sq += static_cast<long long>(c[t]) * c[t];
          }
          ++hist[s.H.profile_id(k, j)];
        }
        // sum over ordered pairs of ||c_x - c_y||^2 = 2|cls| sum ||c||^2 - 2 ||sum c||^2
        long long s2 = 0;
        for (long long v : sum) s2 += v * v;
        dist[i - 1] += 2 * size * sq - 2 * s2;
        long long same = 0;
        for (const auto& [id, cnt] : hist) same += cnt * cnt;
        ind[i - 1] += size * size - same;
      }
  });
  const BigInt pairs = pow_big(s.group.order(), static_cast<std::size_t>(s.n + 1));
  const BigInt h2 = BigInt(static_cast<unsigned long>(s.H.order())) * static_cast<unsigned long>(s.H.order());
  IRValue v;
  v.profile_distance_ir = 0;
  v.indicator_ir = 0;
  for (int i = 0; i < s.n; ++i) {
    Rational d(BigInt(std::to_string(dist[i])), pairs * h2);
    d.canonicalize();
    Rational q(BigInt(std::to_string(ind[i])), pairs);
    q.canonicalize();
    v.per_voter.push_back(d);
    v.profile_distance_ir += d;
    v.indicator_ir += q;
  }
  if (with_quadratic) v.quadratic_ir = apply_Ln(encode_g(f), s.group, s.rho.basis());
  return v;
}

bool single_switch_ir(const Aggregator& f) {
  return ir_combinatorial(f, false).profile_distance_ir == 0;
}

bool many_voter_ir(const Aggregator& f) {
  const Setting& s = f.setting();
  const int m = s.m;
  for (int j = 1; j <= m; ++j) {
    std::map<std::vector<int>, int> seen;
    std::vector<int> key(s.n);
    for (std::size_t p = 0; p < s.profiles.count(); ++p) {
      for (int i = 1; i <= s.n; ++i) key[i - 1] = s.group.rank_of(s.profiles.vote(p, i), j);
      const int id = s.H.profile_id(f.output(p), j);
      auto [it, inserted] = seen.emplace(key, id);
      if (!inserted && it->second != id) return false;
    }
  }
  return true;
}

Rational c_constant(const Subgroup& H) {
  long long best = 0;
  for (int j = 1; j <= H.m(); ++j) {
    const auto& q = H.distinct_profiles(j);
    for (const auto& a : q)
      for (const auto& b : q) {
        long long d = 0;
        for (std::size_t t = 0; t < a.size(); ++t) d += static_cast<long long>(a[t] - b[t]) * (a[t] - b[t]);
        best = std::max(best, d);
      }
  }
  Rational c(static_cast<long>(best), static_cast<long>(H.order() * H.order()));
  c.canonicalize();
  return c;
}

Rational single_entry_bound(const Setting& s) {
  const long long pairs_per_entry =
      2LL * s.n * s.m * (static_cast<long long>(factorial(s.m - 1)) - 1);
  Rational b = c_constant(s.H) * Rational(BigInt(std::to_string(pairs_per_entry)));
  b /= Rational(pow_big(s.group.order(), static_cast<std::size_t>(s.n + 1)));
  return b;
}

KappaCalibration calibrate_form(const std::vector<Aggregator>& sample, const LaplacianBundle& bundle,
                                FormVariant variant) {
  if (sample.empty()) throw InputError("calibration sample is empty");
  KappaCalibration cal;
  cal.variant = variant;
  cal.samples = sample.size();
  const Setting& s = sample.front().setting();
  const Aggregator zero = make_constant(sample.front().setting_ptr(), s.group[0]);
  cal.offset = apply_quadratic_form(zero, bundle, variant);

  std::vector<double> raw, ir;
  std::size_t best = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    raw.push_back(apply_quadratic_form(sample[k], bundle, variant));
    ir.push_back(to_double(ir_combinatorial(sample[k], false).profile_distance_ir));
    if (ir[k] > ir[best]) best = k;
  }
  if (ir[best] <= 0.0) throw InputError("calibration sample has no aggregator with positive IR");
  cal.kappa = ir[best] / (raw[best] - cal.offset);
  for (std::size_t k = 0; k < sample.size(); ++k)
    cal.max_residual = std::max(cal.max_residual, std::abs(cal.kappa * (raw[k] - cal.offset) - ir[k]));
  return cal;
}

const char* census_class_name(CensusClass c) {
  switch (c) {
    case CensusClass::Constant: return "constant";
    case CensusClass::Dictator: return "dictator";
    case CensusClass::Other: return "other";
  }
  return "?";
}

std::string census_size_estimate(std::size_t cosets, std::size_t profiles) {
  return std::to_string(cosets) + "^" + std::to_string(profiles) + " = " +
         pow_big(cosets, profiles).get_str();
}

CensusReport census_ir_functions(const SettingPtr& sp, double limit) {
  const Setting& s = *sp;
  const std::size_t C = s.H.coset_count();
  const std::size_t P = s.profiles.count();
  const double total = std::pow(static_cast<double>(C), static_cast<double>(P));
  if (total > limit)
    throw FeasibilityError("census is not enumerable", census_size_estimate(C, P));
  const auto count = static_cast<std::size_t>(std::llround(total));
  const auto cls = classes(s.group);
  const int m = s.m;

  // Zero-locus test: within every rank class of every slice, all outputs
  // give alternative j the same profile.
  auto is_zero = [&](const std::vector<std::uint32_t>& t) {
    bool ok = true;
    for_each_slice(s.profiles, [&](int, const std::vector<std::size_t>& slice) {
      if (!ok) return;
      for (int j = 1; j <= m && ok; ++j)
        for (int r = 1; r <= m && ok; ++r) {
          const auto& members = cls[j - 1][r - 1];
          const int first = s.H.profile_id(t[slice[members[0]]], j);
          for (std::size_t x : members)
            if (s.H.profile_id(t[slice[x]], j) != first) {
              ok = false;
              break;
            }
        }
    });
    return ok;
  };

  constexpr std::size_t kBlock = 4096;
  std::vector<std::vector<std::vector<std::uint32_t>>> found(block_count(count, kBlock));
  parallel_blocks(count, kBlock, [&](std::size_t lo, std::size_t hi, std::size_t b) {
    std::vector<std::uint32_t> t(P);
    for (std::size_t code = lo; code < hi; ++code) {
      std::size_t c = code;
      for (std::size_t p = P; p-- > 0;) {
        t[p] = static_cast<std::uint32_t>(c % C);
        c /= C;
      }
      if (is_zero(t)) found[b].push_back(t);
    }
  });

  std::map<std::vector<std::uint32_t>, CensusMember> dict;
  for (int i = 1; i <= s.n; ++i)
    for (const auto& sigma : s.group.elements()) {
      const Aggregator d = make_dictator(sp, i, sigma);
      auto& mem = dict[d.table()];
      mem.table = d.table();
      if (mem.sigmas.empty()) mem.voter = i;
      if (mem.voter == i) mem.sigmas.push_back(sigma);
    }

  CensusReport rep;
  rep.m = s.m;
  rep.n = s.n;
  rep.partition = s.H.partition();
  rep.total_functions = pow_big(C, P).get_str();
  rep.degenerate = s.m == 2;
  for (const auto& block : found)
    for (const auto& t : block) {
      CensusMember mem;
      mem.table = t;
      if (std::all_of(t.begin(), t.end(), [&](std::uint32_t k) { return k == t[0]; })) {
        mem.cls = CensusClass::Constant;
        ++rep.constants;
      } else if (auto it = dict.find(t); it != dict.end()) {
        mem = it->second;
        mem.cls = CensusClass::Dictator;
        ++rep.dictators;
      } else {
        ++rep.others;
      }
      rep.members.push_back(std::move(mem));
    }
  return rep;
}

namespace {

long long squared_distance_to_unit(const std::vector<int>& c, int r, long long h) {
  long long d = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const long long v = c[s] - (static_cast<int>(s) == r - 1 ? h : 0);
    d += v * v;
  }
  return d;
}

}  // namespace

PreferenceOrders default_orders(const Subgroup& H) {
  const int m = H.m();
  PreferenceOrders o;
  o.m = m;
  o.source = "default";
  o.position.resize(static_cast<std::size_t>(m * m));
  const auto h = static_cast<long long>(H.order());
  for (int r = 1; r <= m; ++r)
    for (int j = 1; j <= m; ++j) {
      const auto& q = H.distinct_profiles(j);
      std::vector<int> ids(q.size());
      std::iota(ids.begin(), ids.end(), 0);
      std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        const long long da = squared_distance_to_unit(q[a], r, h);
        const long long db = squared_distance_to_unit(q[b], r, h);
        if (da != db) return da < db;
        return q[a] > q[b];
      });
      auto& pos = o.position[(r - 1) * m + (j - 1)];
      pos.assign(q.size(), 0);
      for (std::size_t k = 0; k < ids.size(); ++k) pos[ids[k]] = static_cast<int>(k);
    }
  return o;
}

PreferenceOrders random_orders(const Subgroup& H, Rng& rng) {
  const int m = H.m();
  PreferenceOrders o;
  o.m = m;
  o.source = "random";
  o.position.resize(static_cast<std::size_t>(m * m));
  for (int r = 1; r <= m; ++r)
    for (int j = 1; j <= m; ++j) {
      auto& pos = o.position[(r - 1) * m + (j - 1)];
      pos.resize(H.distinct_profiles(j).size());
      std::iota(pos.begin(), pos.end(), 0);
      std::shuffle(pos.begin(), pos.end(), rng);
    }
  return o;
}

namespace {

Rational parse_entry(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) {
    Rational q(v.get<std::string>());
    q.canonicalize();
    return q;
  }
  if (v.is_number()) {
    // Only dyadic-exact doubles such as 0.5 are accepted.
    Rational q(v.get<double>());
    return q;
  }
  throw InputError("profile entries must be integers, decimal numbers or \"p/q\" strings");
}

}  // namespace

PreferenceOrders orders_from_json(const nlohmann::json& doc, const Subgroup& H) {
  PreferenceOrders o = default_orders(H);
  o.source = "json";
  const int m = H.m();
  try {
    for (const auto& item : doc) {
      const int j = item.at("j").get<int>();
      const int r = item.at("r").get<int>();
      if (j < 1 || j > m || r < 1 || r > m) throw InputError("order (j, r) out of range");
      const auto& q = H.distinct_profiles(j);
      const auto& ranking = item.at("ranking");
      if (ranking.size() != q.size())
        throw InputError("ranking for j=" + std::to_string(j) + " must list " + std::to_string(q.size()) +
                         " profiles");
      std::vector<int> pos(q.size(), -1);
      int place = 0;
      for (const auto& vec : ranking) {
        std::vector<int> counts;
        for (const auto& e : vec) {
          Rational v = parse_entry(e) * static_cast<long>(H.order());
          if (v.get_den() != 1) throw InputError("profile entry is not a multiple of 1/|H|");
          counts.push_back(static_cast<int>(v.get_num().get_si()));
        }
        auto it = std::find(q.begin(), q.end(), counts);
        if (it == q.end()) throw InputError("ranking lists a vector that is not a j-profile");
        const auto id = static_cast<std::size_t>(it - q.begin());
        if (pos[id] != -1) throw InputError("ranking lists a profile twice");
        pos[id] = place++;
      }
      o.position[(r - 1) * m + (j - 1)] = pos;
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed orders JSON: ") + e.what());
  }
  return o;
}

nlohmann::ordered_json orders_to_json(const PreferenceOrders& o, const Subgroup& H) {
  auto out = nlohmann::ordered_json::array();
  const int m = H.m();
  for (int j = 1; j <= m; ++j)
    for (int r = 1; r <= m; ++r) {
      const auto& pos = o.position[(r - 1) * m + (j - 1)];
      std::vector<int> ids(pos.size());
      for (std::size_t id = 0; id < pos.size(); ++id) ids[pos[id]] = static_cast<int>(id);
      auto ranking = nlohmann::ordered_json::array();
      for (int id : ids) {
        auto vec = nlohmann::ordered_json::array();
        for (int c : H.distinct_profiles(j)[id]) vec.push_back(to_string(make_rational(c, static_cast<long>(H.order()))));
        ranking.push_back(vec);
      }
      out.push_back({{"j", j}, {"r", r}, {"ranking", ranking}});
    }
  return out;
}

ManipulationReport manipulation_power(const Aggregator& f, const PreferenceOrders& orders) {
  return manipulation_power(f, orders, ir_combinatorial(f, false).profile_distance_ir);
}

ManipulationReport manipulation_power(const Aggregator& f, const PreferenceOrders& orders,
                                      const Rational& ir) {
  const Setting& s = f.setting();
  check_budget(s);
  const int m = s.m;
  if (orders.m != m) throw InputError("orders were built for a different m");
  const std::size_t N = s.group.order();
  std::vector<long long> count(s.n, 0);
  std::vector<std::vector<long long>> hist(m);
  for_each_slice(s.profiles, [&](int i, const std::vector<std::size_t>& slice) {
    for (int j = 1; j <= m; ++j) {
      hist[j - 1].assign(s.H.distinct_profiles(j).size(), 0);
      for (std::size_t y = 0; y < N; ++y) ++hist[j - 1][s.H.profile_id(f.output(slice[y]), j)];
    }
    for (std::size_t x = 0; x < N; ++x)
      for (int j = 1; j <= m; ++j) {
        const int r = s.group.rank_of(x, j);
        const auto& pos = orders.position[(r - 1) * m + (j - 1)];
        const int truthful = pos[s.H.profile_id(f.output(slice[x]), j)];
        for (std::size_t id = 0; id < pos.size(); ++id)
          if (pos[id] < truthful) count[i - 1] += hist[j - 1][id];
      }
  });
  ManipulationReport rep;
  rep.orders_source = orders.source;
  rep.c = c_constant(s.H);
  rep.ir = ir;
  rep.total = 0;
  const BigInt denom = pow_big(N, static_cast<std::size_t>(s.n + 1));
  for (int i = 0; i < s.n; ++i) {
    Rational q(BigInt(std::to_string(count[i])), denom);
    q.canonicalize();
    rep.per_voter.push_back(q);
    rep.total += q;
  }
  rep.bound_holds = rep.c * rep.total >= rep.ir;
  rep.doubled_bound_holds = 2 * rep.c * rep.total >= rep.ir;
  return rep;
}

nlohmann::ordered_json to_json(const IRValue& v) {
  nlohmann::ordered_json j;
  j["profile_distance_ir"] = to_string(v.profile_distance_ir);
  j["profile_distance_ir_float"] = to_double(v.profile_distance_ir);
  j["indicator_ir"] = to_string(v.indicator_ir);
  j["quadratic_ir"] = v.quadratic_ir;
  auto pv = nlohmann::ordered_json::array();
  for (const auto& q : v.per_voter) pv.push_back(to_string(q));
  j["per_voter"] = pv;
  return j;
}

nlohmann::ordered_json to_json(const ManipulationReport& r) {
  nlohmann::ordered_json j;
  auto pv = nlohmann::ordered_json::array();
  for (const auto& q : r.per_voter) pv.push_back(to_string(q));
  j["per_voter"] = pv;
  j["total"] = to_string(r.total);
  j["c"] = to_string(r.c);
  j["ir"] = to_string(r.ir);
  j["c_times_M_ge_IR"] = r.bound_holds;
  j["two_c_times_M_ge_IR"] = r.doubled_bound_holds;
  j["orders"] = r.orders_source;
  return j;
}

nlohmann::ordered_json to_json(const CensusReport& r, const Setting& s) {
  nlohmann::ordered_json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["partition"] = partition_to_string(r.partition);
  j["total_functions"] = r.total_functions;
  j["zero_locus_size"] = r.members.size();
  j["constants"] = r.constants;
  j["dictator_family"] = r.dictators;
  j["other"] = r.others;
  j["degenerate_m2"] = r.degenerate;
  auto mem = nlohmann::ordered_json::array();
  for (const auto& c : r.members) {
    nlohmann::ordered_json e;
    e["class"] = census_class_name(c.cls);
    if (c.cls == CensusClass::Dictator) {
      e["voter"] = c.voter;
      auto sig = nlohmann::ordered_json::array();
      for (const auto& x : c.sigmas) sig.push_back(to_string(x));
      e["sigma"] = sig;
    }
    auto outs = nlohmann::ordered_json::array();
    for (auto k : c.table) outs.push_back(to_string(s.H.coset(k).representative));
    e["outputs"] = outs;
    mem.push_back(e);
  }
  j["members"] = mem;
  return j;
}

}  // namespace irs
