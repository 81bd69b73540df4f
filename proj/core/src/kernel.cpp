#include "lgp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgp/errors.hpp"
#include "lgp/parallel.hpp"

namespace lgp {

double WalkKernel::row_sum(std::size_t i) const {
  if (!has_row(i)) return 0.0;
  CompensatedSum s;
  s.add(self_weight_[i]);
  for (const auto& nb : row(i)) s.add(edges_[nb.edge].weight);
  return s.value();
}

double WalkKernel::min_mass_ratio() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ball_mass_.size(); ++i)
    if (has_row(i)) m = std::min(m, mass_ratio(i));
  return m;
}

double WalkKernel::max_mass_ratio() const {
  double m = 0.0;
  for (std::size_t i = 0; i < ball_mass_.size(); ++i)
    if (has_row(i)) m = std::max(m, mass_ratio(i));
  return m;
}

double discrete_ball_mass(const CarnotGroup& group, double h, const LatticeIndex& x, double eps) {
  CompensatedSum mass;
  for_each_ball_cell(group, h, x, eps, [&](const LatticeIndex&, const double*, double theta) {
    mass.add(theta);
    return true;
  });
  return mass.value() * std::pow(h, group.dimension());
}

namespace {

struct RowScan {
  std::vector<KernelEdge> forward;  // edges to larger ids, theta in the weight slot
  std::vector<double> theta_all;    // per point in the chunk: sum of theta over all ball cells
  std::vector<double> theta_exterior;
};

}  // namespace

WalkKernel build_kernel(const CarnotGroup& group, const DiscreteDomain& domain, double eps) {
  if (group.id() != domain.group().id()) throw std::invalid_argument("kernel group differs from domain group");
  if (std::abs(eps - domain.eps()) > kTieTolerance * eps) throw std::invalid_argument("kernel eps differs from domain eps");

  const std::size_t npts = domain.size();
  const double h = domain.spacing();
  const int n = group.dimension();

  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (npts + kChunk - 1) / kChunk;
  std::vector<RowScan> scans(chunks);
  parallel_for(npts, kChunk, [&](std::size_t begin, std::size_t end) {
    RowScan& scan = scans[begin / kChunk];
    scan.theta_all.assign(end - begin, 0.0);
    scan.theta_exterior.assign(end - begin, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      if (!domain.is_active(i)) continue;
      const auto xi = static_cast<std::uint32_t>(i);
      CompensatedSum all, ext;
      const std::size_t first = scan.forward.size();
      for_each_ball_cell(group, h, domain.index(i), eps, [&](const LatticeIndex& y, const double*, double theta) {
        all.add(theta);
        const auto id = domain.find(y);
        if (!id || !domain.is_active(*id)) {
          ext.add(theta);
        } else if (*id > xi) {
          scan.forward.push_back({xi, *id, theta});
        }
        return true;
      });
      std::sort(scan.forward.begin() + static_cast<std::ptrdiff_t>(first), scan.forward.end(),
                [](const KernelEdge& l, const KernelEdge& r) { return l.b < r.b; });
      scan.theta_all[i - begin] = all.value();
      scan.theta_exterior[i - begin] = ext.value();
    }
  });

  WalkKernel k;
  k.eps_ = eps;
  k.cell_measure_ = std::pow(h, n);
  k.analytic_mass_ = group.ball_volume(eps);
  k.has_row_.assign(npts, 0);
  k.self_weight_.assign(npts, 0.0);
  k.exterior_weight_.assign(npts, 0.0);
  k.ball_mass_.assign(npts, std::numeric_limits<double>::quiet_NaN());

  double max_theta = 0.0;
  std::size_t total_edges = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    total_edges += scans[c].forward.size();
    for (std::size_t j = 0; j < scans[c].theta_all.size(); ++j) {
      const std::size_t i = c * kChunk + j;
      if (!domain.is_active(i)) continue;
      k.has_row_[i] = 1;
      k.ball_mass_[i] = scans[c].theta_all[j] * k.cell_measure_;
      max_theta = std::max(max_theta, scans[c].theta_all[j]);
    }
  }
  if (max_theta <= 0.0) throw ConstructionError("kernel has no active rows");
  k.reference_mass_ = max_theta * k.cell_measure_;

  k.edges_.reserve(total_edges);
  for (auto& scan : scans) {
    for (auto& e : scan.forward) k.edges_.push_back({e.a, e.b, e.weight / max_theta});
    scan.forward.clear();
    scan.forward.shrink_to_fit();
  }
  for (std::size_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < scans[c].theta_exterior.size(); ++j)
      k.exterior_weight_[c * kChunk + j] = scans[c].theta_exterior[j] / max_theta;

  // Symmetric adjacency, neighbours in ascending id order.
  std::vector<std::size_t> degree(npts + 1, 0);
  for (const auto& e : k.edges_) {
    ++degree[e.a];
    ++degree[e.b];
  }
  k.row_ptr_.assign(npts + 1, 0);
  for (std::size_t i = 0; i < npts; ++i) k.row_ptr_[i + 1] = k.row_ptr_[i] + degree[i];
  k.neighbors_.resize(k.row_ptr_[npts]);
  std::vector<std::size_t> fill(k.row_ptr_.begin(), k.row_ptr_.end() - 1);
  // Edges are sorted by (a, b): for fixed b the lower neighbours a arrive in ascending order, and
  // for fixed a the upper neighbours b arrive in ascending order after all lower ones.
  for (std::size_t e = 0; e < k.edges_.size(); ++e) {
    const auto& edge = k.edges_[e];
    k.neighbors_[fill[edge.b]++] = {edge.a, static_cast<std::uint32_t>(e)};
  }
  for (std::size_t e = 0; e < k.edges_.size(); ++e) {
    const auto& edge = k.edges_[e];
    k.neighbors_[fill[edge.a]++] = {edge.b, static_cast<std::uint32_t>(e)};
  }

  for (std::size_t i = 0; i < npts; ++i) {
    if (!k.has_row(i)) continue;
    if (k.row_ptr_[i + 1] == k.row_ptr_[i]) throw ConstructionError("lattice point with empty neighbourhood");
    CompensatedSum s;
    for (const auto& nb : k.row(i)) s.add(k.edges_[nb.edge].weight);
    k.self_weight_[i] = 1.0 - s.value();
  }
  return k;
}

}  // namespace lgp
