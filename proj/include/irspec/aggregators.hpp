#pragma once

#include <json.hpp>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "irspec/perm.hpp"
#include "irspec/repr.hpp"

namespace irs {

using Profile = std::vector<Permutation>;
using Rng = std::mt19937_64;

// Everything an aggregator over S_m^n -> S_m/H needs: the group, the
// subgroup H, the profile indexing and the rho1 table.
struct Setting {
  Setting(int m, int n, const Partition& partition, const Basis& basis);
  Setting(int m, int n, Subgroup subgroup, const Basis& basis);

  int m;
  int n;
  SymmetricGroup group;
  Subgroup H;
  ProfileSpace profiles;
  Rho1Table rho;
  Matrix M_H;  // E_{h in H} rho1(h)
  std::vector<Matrix> coset_g;  // mean of rho1 over each coset

  std::size_t profile_index(const Profile& x) const;
  Profile profile_at(std::size_t p) const;
};

using SettingPtr = std::shared_ptr<const Setting>;

SettingPtr make_setting(int m, int n, const Partition& partition);
SettingPtr make_setting(int m, int n, const Partition& partition, const Basis& basis);

enum class RuleType { Table, Dictator, Constant, Plurality, Borda };
const char* rule_name(RuleType t);

struct RuleParams {
  int voter = 0;                     // dictator
  std::optional<Permutation> sigma;  // dictator
  std::optional<Permutation> value;  // constant (canonical representative)
};

// A total function from profiles to cosets, always materialized as a
// table of coset indices by profile index.
class Aggregator {
 public:
  Aggregator(SettingPtr setting, RuleType type, RuleParams params,
             std::vector<std::uint32_t> table);

  const Setting& setting() const { return *setting_; }
  const SettingPtr& setting_ptr() const { return setting_; }
  RuleType type() const { return type_; }
  const RuleParams& params() const { return params_; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  std::size_t output(std::size_t profile) const { return table_[profile]; }

  const Coset& evaluate(const Profile& x) const;

 private:
  SettingPtr setting_;
  RuleType type_;
  RuleParams params_;
  std::vector<std::uint32_t> table_;
};

// x -> coset of compose(x_i, sigma).
Aggregator make_dictator(SettingPtr s, int voter, const Permutation& sigma);
Aggregator make_constant(SettingPtr s, const Permutation& member);
Aggregator make_plurality(SettingPtr s);
Aggregator make_borda(SettingPtr s);
Aggregator make_table(SettingPtr s, std::vector<std::uint32_t> table);
Aggregator random_aggregator(SettingPtr s, Rng& rng);
// Reassigns k distinct profiles to a different, uniformly chosen coset.
Aggregator corrupt(const Aggregator& f, std::size_t k, Rng& rng);
// Same, but corrupts the first k profiles of a fixed random order, so
// that corrupt_prefix(f, k) and corrupt_prefix(f, k+1) are nested.
Aggregator corrupt_prefix(const Aggregator& f, std::size_t k, std::uint64_t seed);

GEncoding encode_g(const Aggregator& f);

struct ConsistencyReport {
  Matrix M;                  // E_{h in H} rho1(h)
  double max_deviation = 0;  // max_x ||g(x) g(x)^T - M||
  double idempotence = 0;    // ||M^2 - M||
  bool coset_valued = true;  // every g(x) is the encoding of some coset
  bool fixing = true;        // M != 0
};

ConsistencyReport consistency_check(const Aggregator& f);
ConsistencyReport consistency_check(const GEncoding& g, const Setting& s);

nlohmann::ordered_json to_json(const Aggregator& f);
// Builds the setting from the document. Tables may list profiles in any
// order but must cover every profile exactly once.
Aggregator aggregator_from_json(const nlohmann::json& doc);

}  // namespace irs
