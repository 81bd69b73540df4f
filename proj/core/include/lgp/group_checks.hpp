#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lgp/carnot.hpp"

namespace lgp {

struct GroupCheckOptions {
  std::size_t samples = 10000;
  unsigned long long seed = 20200615ULL;
  double coord_range = 10.0;  ///< coordinates drawn uniformly from [-range, range]
  double tol_associativity = 1e-9;
  double tol_inverse = 1e-12;
  double tol_dilation = 1e-9;
  double tol_norm_homogeneity = 1e-12;
  double tol_left_invariance = 1e-9;
};

struct CheckLine {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct GroupCheckReport {
  std::string group_id;
  std::size_t samples = 0;
  std::vector<CheckLine> lines;
  double seconds = 0.0;
  bool passed() const;
};

/// Randomized algebra invariant suite: associativity, identity, inverse,
/// dilation homomorphism, box-norm homogeneity, left invariance and
/// horizontal linearity.
GroupCheckReport run_group_checks(const CarnotGroup& group, const GroupCheckOptions& options = {});

}  // namespace lgp
