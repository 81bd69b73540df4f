#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <lgp/lgp.hpp>
#include <json.hpp>

#include "lgp_runner/expression.hpp"

namespace lgp::runner {

/// Fully resolved experiment description. Output directory and thread count are
/// run-time choices and deliberately not part of it.
struct RunConfig {
  std::string group_id = "abelian1";

  std::string shape = "box";  ///< box | ball
  std::vector<double> lower, upper;
  std::vector<double> center;
  double radius = 0.0;
  double halo_width = 0.0;  ///< resolved: explicit value or the largest eps
  bool halo_tracks_eps = false;

  std::string psi = "0";
  std::string reference;  ///< optional expression for the L1 column

  std::vector<double> eps;
  double rho = 10.0;
  std::string region = "omega_m";  ///< omega_m | omega_1
  std::string artifacts = "solution";  ///< none | solution | all

  SolveParams solver;
  double certificate_tol = 1e-6;

  std::string mincut = "auto";  ///< auto | on | off
  double mincut_tol = 1e-6;
  std::vector<double> p_list;
  double p_tol = 0.02;
  std::size_t p_max_iter = 500;

  std::uint64_t seed = 1;
};

/// Reads an INI file with sections [group], [domain], [datum], [sweep], [solver], [oracle], [run].
/// Unknown sections or keys and malformed values raise UsageError.
RunConfig load_config(const std::filesystem::path& path);

/// Same, from INI text.
RunConfig parse_config(const std::string& text);

/// Validates cross-field constraints and fills derived defaults (halo width). Throws UsageError.
void resolve(RunConfig& config);

nlohmann::ordered_json to_json(const RunConfig& config);

/// Hex SHA-1 of the canonical JSON form of the resolved config.
std::string run_id(const RunConfig& config);

CarnotGroup make_group(const std::string& id);
DomainSpec make_domain(const RunConfig& config, const CarnotGroup& group);
BoundaryDatum make_datum(const RunConfig& config, const CarnotGroup& group);
SweepPlan make_plan(const RunConfig& config);

/// "0.1 0.05", "0.1,0.05" or "0.1;0.05" to a list. Throws UsageError.
std::vector<double> parse_list(const std::string& text);

}  // namespace lgp::runner
