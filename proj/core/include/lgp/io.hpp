#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "lgp/limit_lab.hpp"

namespace lgp::io {

/// Shortest round-trip decimal form, '.' separator, independent of the locale.
std::string format_double(double v);

// All writers throw std::runtime_error if the file cannot be written.

/// index, x1..xn, tag (interior|halo), active (0|1), measure
void write_points_csv(const std::filesystem::path& path, const DiscreteDomain& domain);
/// src, dst, weight; one line per unordered edge (src < dst), then one self line per row.
void write_edges_csv(const std::filesystem::path& path, const WalkKernel& kernel);
/// index, x1..xn, tag, u
void write_solution_csv(const std::filesystem::path& path, const DiscreteDomain& domain, std::span<const double> u_psi);
/// src, dst, g with g = g(src, dst)
void write_dual_csv(const std::filesystem::path& path, const WalkKernel& kernel, const DualField& g);
/// index, x1..xn, zeta1..zetam, bulk
void write_zeta_csv(const std::filesystem::path& path, const DiscreteDomain& domain, const ZetaField& zeta);
/// eps, h, points, interior, edges, energy, rescaled_energy, ... one line per entry
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepEntry> entries);

}  // namespace lgp::io
