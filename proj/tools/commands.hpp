#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace irs::cli {

struct RunConfig {
  int m = 3;
  int n = 1;
  std::string partition;  // empty: singletons (SWF)
  std::string input;
  std::string rule;
  std::string orders;     // "default", "random" or a JSON path
  std::string sigma_hyper = "auto";
  int samples = 0;        // 0: per-command default
  std::uint64_t seed = 1;
  std::size_t dense_limit = 5000;
  bool center = false;
  std::optional<int> m_max;
  int audit_samples = 5;
  std::string out;
};

// Each returns the report; the caller writes it.
nlohmann::ordered_json cmd_spectra(const RunConfig& c);
nlohmann::ordered_json cmd_analyze(const RunConfig& c);
nlohmann::ordered_json cmd_census(const RunConfig& c);
nlohmann::ordered_json cmd_moments(const RunConfig& c);

// One-paragraph human summary printed when the report goes to a file.
std::string summarize(const std::string& command, const nlohmann::ordered_json& report);

}  // namespace irs::cli
