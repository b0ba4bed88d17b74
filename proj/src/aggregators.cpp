#include "irspec/aggregators.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "irspec/errors.hpp"

namespace irs {

namespace {

Matrix mean_rho(const std::vector<Permutation>& ys, const SymmetricGroup& group,
                const Rho1Table& rho) {
  Matrix acc = Matrix::Zero(group.m() - 1, group.m() - 1);
  for (const auto& y : ys) acc += rho[group.index_of(y)];
  return acc / static_cast<double>(ys.size());
}

void fill_derived(Setting& s) {
  s.M_H = mean_rho(s.H.members(), s.group, s.rho);
  s.coset_g.clear();
  for (const auto& c : s.H.cosets()) s.coset_g.push_back(mean_rho(c.members, s.group, s.rho));
}

}  // namespace

Setting::Setting(int m_, int n_, const Partition& partition, const Basis& basis)
    : m(m_),
      n(n_),
      group(m_),
      H(Subgroup::fixing(group, partition)),
      profiles(group.order(), n_),
      rho(group, basis) {
  fill_derived(*this);
}

Setting::Setting(int m_, int n_, Subgroup subgroup, const Basis& basis)
    : m(m_),
      n(n_),
      group(m_),
      H(std::move(subgroup)),
      profiles(group.order(), n_),
      rho(group, basis) {
  fill_derived(*this);
}

std::size_t Setting::profile_index(const Profile& x) const {
  if (static_cast<int>(x.size()) != n) throw InputError("profile has wrong voter count");
  std::vector<std::size_t> votes;
  for (const auto& v : x) votes.push_back(group.index_of(v));
  return profiles.encode(votes);
}

Profile Setting::profile_at(std::size_t p) const {
  Profile x;
  for (int i = 1; i <= n; ++i) x.push_back(group[profiles.vote(p, i)]);
  return x;
}

SettingPtr make_setting(int m, int n, const Partition& partition) {
  return make_setting(m, n, partition, build_basis(m));
}

SettingPtr make_setting(int m, int n, const Partition& partition, const Basis& basis) {
  if (m < 2 || m > kMaxEnumerable) throw InputError("m out of range");
  if (n < 1) throw InputError("n must be >= 1");
  return std::make_shared<const Setting>(m, n, partition, basis);
}

const char* rule_name(RuleType t) {
  switch (t) {
    case RuleType::Table: return "table";
    case RuleType::Dictator: return "dictator";
    case RuleType::Constant: return "constant";
    case RuleType::Plurality: return "plurality";
    case RuleType::Borda: return "borda";
  }
  return "?";
}

Aggregator::Aggregator(SettingPtr setting, RuleType type, RuleParams params,
                       std::vector<std::uint32_t> table)
    : setting_(std::move(setting)), type_(type), params_(std::move(params)), table_(std::move(table)) {
  if (table_.size() != setting_->profiles.count())
    throw InputError("aggregator table is not total");
  for (auto k : table_)
    if (k >= setting_->H.coset_count()) throw InputError("table entry is not a coset index");
}

const Coset& Aggregator::evaluate(const Profile& x) const {
  return setting_->H.coset(table_[setting_->profile_index(x)]);
}

Aggregator make_dictator(SettingPtr s, int voter, const Permutation& sigma) {
  if (voter < 1 || voter > s->n) throw InputError("dictator voter out of range");
  if (sigma.size() != s->m) throw InputError("sigma has wrong size");
  const std::size_t sig = s->group.index_of(sigma);
  std::vector<std::uint32_t> t(s->profiles.count());
  for (std::size_t p = 0; p < t.size(); ++p)
    t[p] = static_cast<std::uint32_t>(
        s->H.coset_of(s->group.compose_index(s->profiles.vote(p, voter), sig)));
  RuleParams params;
  params.voter = voter;
  params.sigma = sigma;
  return Aggregator(std::move(s), RuleType::Dictator, params, std::move(t));
}

Aggregator make_constant(SettingPtr s, const Permutation& member) {
  const auto k = static_cast<std::uint32_t>(s->H.coset_of(s->group.index_of(member)));
  RuleParams params;
  params.value = s->H.coset(k).representative;
  std::vector<std::uint32_t> t(s->profiles.count(), k);
  return Aggregator(std::move(s), RuleType::Constant, params, std::move(t));
}

namespace {

// Full ranking by descending score, ties to the smaller name.
Permutation ranking_by_score(const std::vector<long>& score) {
  std::vector<int> names(score.size());
  std::iota(names.begin(), names.end(), 1);
  std::stable_sort(names.begin(), names.end(),
                   [&](int a, int b) { return score[a - 1] > score[b - 1]; });
  return Permutation(names);
}

template <class Scorer>
Aggregator scoring_rule(SettingPtr s, RuleType type, Scorer scorer) {
  const int m = s->m;
  std::vector<std::uint32_t> t(s->profiles.count());
  std::vector<long> score(m);
  for (std::size_t p = 0; p < t.size(); ++p) {
    std::fill(score.begin(), score.end(), 0);
    for (int i = 1; i <= s->n; ++i) {
      const Permutation& x = s->group[s->profiles.vote(p, i)];
      for (int r = 1; r <= m; ++r) score[x(r) - 1] += scorer(r, m);
    }
    t[p] = static_cast<std::uint32_t>(s->H.coset_of(s->group.index_of(ranking_by_score(score))));
  }
  return Aggregator(std::move(s), type, {}, std::move(t));
}

}  // namespace

Aggregator make_plurality(SettingPtr s) {
  return scoring_rule(std::move(s), RuleType::Plurality,
                      [](int r, int) { return r == 1 ? 1L : 0L; });
}

Aggregator make_borda(SettingPtr s) {
  return scoring_rule(std::move(s), RuleType::Borda,
                      [](int r, int m) { return static_cast<long>(m - r); });
}

Aggregator make_table(SettingPtr s, std::vector<std::uint32_t> table) {
  return Aggregator(std::move(s), RuleType::Table, {}, std::move(table));
}

Aggregator random_aggregator(SettingPtr s, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(s->H.coset_count() - 1));
  std::vector<std::uint32_t> t(s->profiles.count());
  for (auto& k : t) k = pick(rng);
  return make_table(std::move(s), std::move(t));
}

namespace {

std::uint32_t different_coset(std::uint32_t current, std::size_t count, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(count - 2));
  const std::uint32_t k = pick(rng);
  return k >= current ? k + 1 : k;
}

}  // namespace

Aggregator corrupt(const Aggregator& f, std::size_t k, Rng& rng) {
  const std::size_t N = f.table().size();
  if (k > N) throw InputError("cannot corrupt more entries than profiles");
  if (f.setting().H.coset_count() < 2) throw InputError("only one coset; nothing to corrupt");
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  auto t = f.table();
  for (std::size_t c = 0; c < k; ++c)
    t[order[c]] = different_coset(t[order[c]], f.setting().H.coset_count(), rng);
  return make_table(f.setting_ptr(), std::move(t));
}

Aggregator corrupt_prefix(const Aggregator& f, std::size_t k, std::uint64_t seed) {
  const std::size_t N = f.table().size();
  if (k > N) throw InputError("cannot corrupt more entries than profiles");
  if (f.setting().H.coset_count() < 2) throw InputError("only one coset; nothing to corrupt");
  Rng rng(seed);
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint32_t> replacement(N);
  for (std::size_t c = 0; c < N; ++c)
    replacement[c] = different_coset(f.table()[order[c]], f.setting().H.coset_count(), rng);
  auto t = f.table();
  for (std::size_t c = 0; c < k; ++c) t[order[c]] = replacement[c];
  return make_table(f.setting_ptr(), std::move(t));
}

GEncoding encode_g(const Aggregator& f) {
  const Setting& s = f.setting();
  GEncoding g;
  g.m = s.m;
  g.n = s.n;
  g.values.reserve(f.table().size());
  for (auto k : f.table()) g.values.push_back(s.coset_g[k]);
  return g;
}

ConsistencyReport consistency_check(const GEncoding& g, const Setting& s) {
  ConsistencyReport rep;
  rep.M = s.M_H;
  rep.idempotence = (s.M_H * s.M_H - s.M_H).cwiseAbs().maxCoeff();
  rep.fixing = s.M_H.norm() > 1e-9;
  for (const auto& v : g.values) {
    rep.max_deviation = std::max(rep.max_deviation, (v * v.transpose() - s.M_H).norm());
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : s.coset_g) nearest = std::min(nearest, (v - c).norm());
    if (nearest > 1e-9) rep.coset_valued = false;
  }
  return rep;
}

ConsistencyReport consistency_check(const Aggregator& f) {
  return consistency_check(encode_g(f), f.setting());
}

nlohmann::ordered_json to_json(const Aggregator& f) {
  const Setting& s = f.setting();
  nlohmann::ordered_json doc;
  doc["m"] = s.m;
  doc["n"] = s.n;
  doc["partition"] = s.H.partition();
  doc["type"] = rule_name(f.type());
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  if (f.type() == RuleType::Dictator) {
    params["voter"] = f.params().voter;
    params["sigma"] = to_string(*f.params().sigma);
  } else if (f.type() == RuleType::Constant) {
    params["output"] = to_string(*f.params().value);
  }
  doc["params"] = params;
  auto entries = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < f.table().size(); ++p) {
    nlohmann::ordered_json e;
    auto votes = nlohmann::ordered_json::array();
    for (int i = 1; i <= s.n; ++i) votes.push_back(to_string(s.group[s.profiles.vote(p, i)]));
    e["profile"] = votes;
    e["output"] = to_string(s.H.coset(f.table()[p]).representative);
    entries.push_back(e);
  }
  doc["entries"] = entries;
  return doc;
}

Aggregator aggregator_from_json(const nlohmann::json& doc) {
  try {
    const int m = doc.at("m").get<int>();
    const int n = doc.at("n").get<int>();
    Partition partition = singleton_partition(m);
    if (doc.contains("partition")) {
      const auto& pj = doc.at("partition");
      if (pj.is_string()) {
        partition = parse_partition(pj.get<std::string>(), m);
      } else {
        partition = pj.get<Partition>();
        partition = parse_partition(partition_to_string(partition), m);
      }
    }
    auto s = make_setting(m, n, partition);
    const std::string type = doc.value("type", "table");
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    if (type == "dictator")
      return make_dictator(s, params.at("voter").get<int>(),
                           parse_perm(params.at("sigma").get<std::string>(), m));
    if (type == "constant")
      return make_constant(s, parse_perm(params.at("output").get<std::string>(), m));
    if (type == "plurality") return make_plurality(s);
    if (type == "borda") return make_borda(s);
    if (type != "table") throw InputError("unknown aggregator type: " + type);

    const std::size_t N = s->profiles.count();
    constexpr std::uint32_t kUnset = ~std::uint32_t{0};
    std::vector<std::uint32_t> t(N, kUnset);
    for (const auto& e : doc.at("entries")) {
      Profile x;
      for (const auto& v : e.at("profile")) x.push_back(parse_perm(v.get<std::string>(), m));
      const std::size_t p = s->profile_index(x);
      if (t[p] != kUnset) throw InputError("profile listed twice in table");
      t[p] = static_cast<std::uint32_t>(
          s->H.coset_of(s->group.index_of(parse_perm(e.at("output").get<std::string>(), m))));
    }
    if (std::find(t.begin(), t.end(), kUnset) != t.end())
      throw InputError("table does not cover every profile");
    return make_table(s, std::move(t));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed aggregator JSON: ") + e.what());
  }
}

}  // namespace irs
