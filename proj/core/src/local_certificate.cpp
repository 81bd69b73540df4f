#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgp/limit_lab.hpp"
#include "lgp/parallel.hpp"

namespace lgp {

namespace {

constexpr double kAlign = 1e-9;

// Multilinear interpolation of interior values at an arbitrary point.
std::optional<double> interpolate(const DiscreteDomain& dom, std::span<const double> u, const double* p) {
  const int n = dom.dimension();
  const double h = dom.spacing();
  LatticeIndex base{};
  std::array<double, kMaxDim> frac{};
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double t = p[k] / h - 0.5;
    double fl = std::floor(t);
    double fr = t - fl;
    if (fr > 1.0 - kAlign) {
      fl += 1.0;
      fr = 0.0;
    } else if (fr < kAlign) {
      fr = 0.0;
    }
    base[kk] = static_cast<std::int32_t>(fl);
    frac[kk] = fr;
  }
  double value = 0.0;
  for (unsigned corner = 0; corner < (1U << n); ++corner) {
    double w = 1.0;
    LatticeIndex idx = base;
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      if (corner & (1U << k)) {
        w *= frac[kk];
        idx[kk] += 1;
      } else {
        w *= 1.0 - frac[kk];
      }
    }
    if (w == 0.0) continue;
    const auto id = dom.find(idx);
    if (!id || !dom.is_interior(*id)) return std::nullopt;
    value += w * u[static_cast<std::size_t>(dom.interior_slot(*id))];
  }
  return value;
}

double horizontal_norm(const HorizontalVector& v, HorizontalNorm norm) {
  return norm == HorizontalNorm::Euclidean ? v.euclidean_norm() : v.sup_norm();
}

}  // namespace

ZetaField extract_zeta(const NonlocalProblem& problem, const DualField& g) {
  const auto& dom = problem.domain();
  const auto& ker = problem.kernel();
  const auto& group = dom.group();
  const auto edges = ker.edges();
  if (g.g.size() != edges.size()) throw std::invalid_argument("dual field does not match the kernel");
  const int m = group.horizontal_dimension();
  const double eps = ker.eps();
  const double dz = dom.cell_measure() / std::pow(eps, group.homogeneous_dimension());
  const double scale = dz / group.c_constant();

  ZetaField zeta;
  zeta.m = m;
  const auto interior = dom.interior();
  zeta.values.assign(interior.size() * static_cast<std::size_t>(m), 0.0);
  zeta.bulk.assign(interior.size(), 0);
  parallel_for(interior.size(), 256, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t s = lo; s < hi; ++s) {
      const auto i = interior[s];
      const auto x = dom.coords(i);
      std::array<CompensatedSum, kMaxDim> acc{};
      for (const auto& nb : ker.row(i)) {
        const auto& e = edges[nb.edge];
        const double gxy = e.a == i ? g.g[nb.edge] : -g.g[nb.edge];
        if (gxy == 0.0) continue;
        const auto y = dom.coords(nb.point);
        const double th = ker.theta(e);
        // Horizontal coordinates of x^{-1} y are y_j - x_j.
        for (int j = 0; j < m; ++j)
          acc[static_cast<std::size_t>(j)].add(gxy * th * (y[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]) / eps);
      }
      for (int j = 0; j < m; ++j)
        zeta.values[s * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] = scale * acc[static_cast<std::size_t>(j)].value();
      zeta.bulk[s] = ker.exterior_weight(i) == 0.0 ? 1 : 0;
    }
  });
  for (std::size_t s = 0; s < interior.size(); ++s) {
    double n2 = 0.0;
    for (double v : zeta.at(s)) n2 += v * v;
    zeta.sup_norm = std::max(zeta.sup_norm, std::sqrt(n2));
  }
  return zeta;
}

std::optional<HorizontalVector> discrete_horizontal_gradient(const DiscreteDomain& domain,
                                                             std::span<const double> u_interior, std::size_t slot) {
  const auto& group = domain.group();
  const int n = group.dimension();
  const int m = group.horizontal_dimension();
  const double h = domain.spacing();
  const auto i = domain.interior()[slot];
  const auto x = domain.coords(i);
  const double ux = u_interior[slot];
  std::array<double, kMaxDim> step{}, target{}, out{};
  for (int j = 0; j < m; ++j) {
    std::fill(step.begin(), step.end(), 0.0);
    step[static_cast<std::size_t>(j)] = h;
    group.multiply_raw(x.data(), step.data(), target.data());
    if (auto fwd = interpolate(domain, u_interior, target.data())) {
      out[static_cast<std::size_t>(j)] = (*fwd - ux) / h;
      continue;
    }
    step[static_cast<std::size_t>(j)] = -h;
    group.multiply_raw(x.data(), step.data(), target.data());
    if (auto bwd = interpolate(domain, u_interior, target.data())) {
      out[static_cast<std::size_t>(j)] = (ux - *bwd) / h;
      continue;
    }
    return std::nullopt;
  }
  (void)n;
  return HorizontalVector(CoordVector(std::span<const double>(out.data(), static_cast<std::size_t>(m))));
}

double local_tv_estimate(const CarnotGroup& group, const DiscreteDomain& domain, std::span<const double> u_interior,
                         HorizontalNorm norm) {
  if (group.id() != domain.group().id()) throw std::invalid_argument("group differs from the domain group");
  if (u_interior.size() != domain.interior().size()) throw std::invalid_argument("u length differs from interior size");
  const double total = parallel_sum(u_interior.size(), 512, [&](std::size_t lo, std::size_t hi) {
    CompensatedSum acc;
    for (std::size_t s = lo; s < hi; ++s)
      if (auto xu = discrete_horizontal_gradient(domain, u_interior, s)) acc.add(horizontal_norm(*xu, norm));
    return acc.value();
  });
  return total * domain.cell_measure();
}

LocalCertReport check_local_certificate(const DiscreteDomain& domain, std::span<const double> u_interior,
                                        const ZetaField& zeta, const LocalCertOptions& options) {
  const auto& group = domain.group();
  const int n = group.dimension();
  const int m = group.horizontal_dimension();
  const auto interior = domain.interior();
  if (u_interior.size() != interior.size() || zeta.values.size() != interior.size() * static_cast<std::size_t>(m))
    throw std::invalid_argument("local certificate inputs do not match the domain");

  LocalCertReport rep;
  rep.zeta_sup = zeta.sup_norm;
  rep.zeta_feasible = zeta.sup_norm <= 1.0 + options.tol;

  // Bounding box of the interior cells.
  std::array<double, kMaxDim> lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    lo[static_cast<std::size_t>(k)] = std::numeric_limits<double>::infinity();
    hi[static_cast<std::size_t>(k)] = -std::numeric_limits<double>::infinity();
  }
  for (auto i : interior) {
    const auto x = domain.coords(i);
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      lo[kk] = std::min(lo[kk], x[kk] - 0.5 * domain.spacing());
      hi[kk] = std::max(hi[kk], x[kk] + 0.5 * domain.spacing());
    }
  }

  // Test fields: tensor bumps on the tiles of a 2^s-per-axis partition, s = 1, 2, 3.
  constexpr int kScales = 3;
  std::vector<std::vector<CompensatedSum>> sums(kScales);
  std::vector<std::size_t> tiles_per_axis(kScales);
  for (int s = 0; s < kScales; ++s) {
    tiles_per_axis[static_cast<std::size_t>(s)] = std::size_t{2} << s;
    std::size_t count = 1;
    for (int k = 0; k < n; ++k) count *= tiles_per_axis[static_cast<std::size_t>(s)];
    sums[static_cast<std::size_t>(s)].resize(count);
    rep.test_fields += count;
  }

  CompensatedSum pairing;
  std::vector<double> grad(static_cast<std::size_t>(n));
  for (std::size_t slot = 0; slot < interior.size(); ++slot) {
    const auto xs = domain.coords(interior[slot]);
    const GroupPoint x(xs);
    const auto z = zeta.at(slot);
    const FrameMatrix frame = group.horizontal_frame(x);
    for (int s = 0; s < kScales; ++s) {
      const auto tiles = tiles_per_axis[static_cast<std::size_t>(s)];
      std::size_t flat = 0;
      double value = 1.0;
      std::array<double, kMaxDim> factor{}, dfactor{};
      for (int k = 0; k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double width = (hi[kk] - lo[kk]) / static_cast<double>(tiles);
        auto t_idx = static_cast<std::size_t>(std::clamp((xs[kk] - lo[kk]) / width, 0.0, static_cast<double>(tiles) - 1.0));
        const double center = lo[kk] + (static_cast<double>(t_idx) + 0.5) * width;
        const double r = 0.5 * width;
        const double t = (xs[kk] - center) / r;
        const double q = 1.0 - t * t;
        factor[kk] = q > 0 ? q * q * q : 0.0;
        dfactor[kk] = q > 0 ? -6.0 * t * q * q / r : 0.0;
        value *= factor[kk];
        flat = flat * tiles + t_idx;
      }
      if (value == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        double d = dfactor[static_cast<std::size_t>(k)];
        for (int l = 0; l < n; ++l)
          if (l != k) d *= factor[static_cast<std::size_t>(l)];
        grad[static_cast<std::size_t>(k)] = d;
      }
      double pair = 0.0;
      for (int j = 0; j < m; ++j) {
        double xv = 0.0;
        for (int k = 0; k < n; ++k) xv += frame(k, j) * grad[static_cast<std::size_t>(k)];
        pair += z[static_cast<std::size_t>(j)] * xv;
      }
      sums[static_cast<std::size_t>(s)][flat].add(pair);
    }
    if (auto xu = discrete_horizontal_gradient(domain, u_interior, slot)) {
      double dotp = 0.0;
      for (int j = 0; j < m; ++j) dotp += z[static_cast<std::size_t>(j)] * (*xu)[j];
      pairing.add(horizontal_norm(*xu, options.norm) - dotp);
    }
  }
  const double nu = domain.cell_measure();
  for (const auto& scale : sums)
    for (const auto& acc : scale) rep.divergence_residual = std::max(rep.divergence_residual, std::abs(acc.value()) * nu);
  rep.pairing_defect = pairing.value() * nu;
  return rep;
}

}  // namespace lgp
