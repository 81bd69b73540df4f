#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>

#include "lgp_runner/config.hpp"

namespace lgp::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

/// Version string echoed in every report.
std::string_view tool_version();

/// Output directory; nullopt prints the table only.
using OutDir = std::optional<std::filesystem::path>;

/// Runs the algebra invariant suite. 0 iff every check passes.
int cmd_group_check(const CarnotGroup& group, const GroupCheckOptions& options, const OutDir& out, std::ostream& log);
/// As above; an unknown id returns 2.
int cmd_group_check(std::string_view group_id, const GroupCheckOptions& options, const OutDir& out, std::ostream& log);

/// Difference-quotient errors for a shipped polynomial along eps_list. 0 iff order >= 0.9 or errors
/// vanish; 2 for fewer than two eps values, an unknown group or an unknown preset.
int cmd_lemma_check(const CarnotGroup& group, std::string_view phi_preset, std::span<const double> eps_list,
                    const OutDir& out, std::ostream& log);
int cmd_lemma_check(std::string_view group_id, std::string_view phi_preset, std::span<const double> eps_list,
                    const OutDir& out, std::ostream& log);

/// Solves at the first eps; writes solution.csv, dual.csv, report.json.
/// 0 iff converged and certificate residuals within certificate_tol.
int cmd_solve(const RunConfig& config, const OutDir& out, std::ostream& log);

/// Sweeps over the eps list (length >= 2); writes sweep.csv, report.json and per-eps artifacts.
/// 0 iff every solve converged.
int cmd_sweep(const RunConfig& config, const OutDir& out, std::ostream& log);

/// Primal-dual vs min-cut (binary data) vs p-Laplacian tail, per eps. 0 iff all agreements hold.
int cmd_oracle_compare(const RunConfig& config, const OutDir& out, std::ostream& log);

}  // namespace lgp::runner
