#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "irspec/aggregators.hpp"
#include "irspec/laplacian.hpp"
#include "irspec/rational.hpp"

namespace irs {

struct IRValue {
  Rational profile_distance_ir;  // ordered pairs, squared j-profile distance
  Rational indicator_ir;         // ordered pairs, 1[j-profiles differ]
  double quadratic_ir = 0;       // apply_Ln on the G encoding
  std::vector<Rational> per_voter;
};

// Exact sums over all (i, j, x^{-i}, x_i, y_i) with x_i^{-1}(j) = y_i^{-1}(j).
IRValue ir_combinatorial(const Aggregator& f, bool with_quadratic = true);

// Detector for "for all x, y and j: if every voter ranks j equally in x and
// y then f(x), f(y) give j the same profile".
bool many_voter_ir(const Aggregator& f);
// IR = 0 under the single-switch definition.
bool single_switch_ir(const Aggregator& f);

// Largest possible change of profile_distance_ir caused by reassigning a
// single table entry.
Rational single_entry_bound(const Setting& s);

// Fits IR = kappa * (raw - offset) on a sample: offset from a constant
// aggregator, kappa from the sample member with the largest IR. Returns the
// fitted pair and the worst residual over the whole sample.
struct KappaCalibration {
  FormVariant variant = FormVariant::L;
  double kappa = 0;
  double offset = 0;
  double max_residual = 0;
  std::size_t samples = 0;
};
KappaCalibration calibrate_form(const std::vector<Aggregator>& sample, const LaplacianBundle& bundle,
                                FormVariant variant);

enum class CensusClass { Constant, Dictator, Other };
const char* census_class_name(CensusClass c);

struct CensusMember {
  std::vector<std::uint32_t> table;
  CensusClass cls = CensusClass::Other;
  int voter = 0;                      // dictator family only
  std::vector<Permutation> sigmas;    // every sigma realizing it
};

struct CensusReport {
  int m = 0;
  int n = 0;
  Partition partition;
  std::string total_functions;  // exact count, decimal
  std::size_t constants = 0;
  std::size_t dictators = 0;
  std::size_t others = 0;
  bool degenerate = false;  // m = 2
  std::vector<CensusMember> members;
};

inline constexpr double kCensusLimit = 2e7;

// "k^N" and its decimal value, for refusal messages.
std::string census_size_estimate(std::size_t cosets, std::size_t profiles);
CensusReport census_ir_functions(const SettingPtr& s, double limit = kCensusLimit);

// pos[(r-1)*m + (j-1)][profile id] = place of that j-profile in the order
// <_{r,j}, 0 being most preferred. Profile ids are those of
// Subgroup::distinct_profiles(j).
struct PreferenceOrders {
  int m = 0;
  std::vector<std::vector<int>> position;
  std::string source;
};

// Ascending squared distance to e_r; ties go to the lexicographically
// larger vector (more mass on better ranks first).
PreferenceOrders default_orders(const Subgroup& H);
PreferenceOrders random_orders(const Subgroup& H, Rng& rng);
// Starts from the default orders and replaces each listed (j, r).
PreferenceOrders orders_from_json(const nlohmann::json& doc, const Subgroup& H);
nlohmann::ordered_json orders_to_json(const PreferenceOrders& o, const Subgroup& H);

// max over j and pairs of j-profiles of the squared distance.
Rational c_constant(const Subgroup& H);

struct ManipulationReport {
  std::vector<Rational> per_voter;
  Rational total;
  Rational c;
  Rational ir;
  bool bound_holds = false;          // c M(f) >= IR(f)
  bool doubled_bound_holds = false;  // 2 c M(f) >= IR(f)
  std::string orders_source;
};

ManipulationReport manipulation_power(const Aggregator& f, const PreferenceOrders& orders);
ManipulationReport manipulation_power(const Aggregator& f, const PreferenceOrders& orders,
                                      const Rational& ir);

nlohmann::ordered_json to_json(const IRValue& v);
nlohmann::ordered_json to_json(const ManipulationReport& r);
nlohmann::ordered_json to_json(const CensusReport& r, const Setting& s);

}  // namespace irs
