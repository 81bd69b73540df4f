#include "lgp/group_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace lgp {

bool GroupCheckReport::passed() const {
  return !lines.empty() && std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

namespace {

double sup_diff(const GroupPoint& a, const GroupPoint& b) {
  double m = 0.0;
  for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

GroupCheckReport run_group_checks(const CarnotGroup& group, const GroupCheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int n = group.dimension();
  const int m = group.horizontal_dimension();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coord(-options.coord_range, options.coord_range);
  std::uniform_real_distribution<double> scale(0.1, 3.0);

  auto draw = [&] {
    std::array<double, kMaxDim> c{};
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = coord(rng);
    return GroupPoint(std::span<const double>(c.data(), static_cast<std::size_t>(n)));
  };

  double assoc = 0, identity = 0, inverse = 0, dilation = 0, homogeneity = 0, left_inv = 0, horizontal = 0;
  const GroupPoint zero = GroupPoint::zero(n);
  for (std::size_t s = 0; s < options.samples; ++s) {
    const GroupPoint x = draw();
    const GroupPoint y = draw();
    const GroupPoint z = draw();
    const double lambda = scale(rng);

    const GroupPoint xy = group.multiply(x, y);
    assoc = std::max(assoc, sup_diff(group.multiply(xy, z), group.multiply(x, group.multiply(y, z))));
    identity = std::max({identity, sup_diff(group.multiply(x, zero), x), sup_diff(group.multiply(zero, x), x)});
    inverse = std::max({inverse, sup_diff(group.multiply(x, group.inverse(x)), zero),
                        sup_diff(group.multiply(group.inverse(x), x), zero)});
    dilation = std::max(dilation, sup_diff(group.dilate(lambda, xy),
                                           group.multiply(group.dilate(lambda, x), group.dilate(lambda, y))));
    const double nx = group.box_norm(x);
    homogeneity = std::max(homogeneity, std::abs(group.box_norm(group.dilate(lambda, x)) - lambda * nx) /
                                            std::max(1.0, lambda * nx));
    left_inv = std::max(left_inv,
                        std::abs(group.box_dist(group.multiply(z, x), group.multiply(z, y)) - group.box_dist(x, y)));
    for (int k = 0; k < m; ++k) horizontal = std::max(horizontal, std::abs(xy[k] - (x[k] + y[k])));
  }

  GroupCheckReport report;
  report.group_id = group.id();
  report.samples = options.samples;
  auto add = [&](std::string name, double value, double tol) {
    report.lines.push_back({std::move(name), value, tol, value <= tol});
  };
  add("associativity", assoc, options.tol_associativity);
  add("identity", identity, 0.0);
  add("inverse", inverse, options.tol_inverse);
  add("dilation_homomorphism", dilation, options.tol_dilation);
  add("box_norm_homogeneity", homogeneity, options.tol_norm_homogeneity);
  add("left_invariance", left_inv, options.tol_left_invariance);
  add("horizontal_linearity", horizontal, 0.0);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace lgp
