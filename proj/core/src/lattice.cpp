#include "lgp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "group_law.hpp"
#include "interval.hpp"
#include "lgp/errors.hpp"

namespace lgp {

using detail::Interval;

DomainSpec DomainSpec::box(std::vector<double> lower, std::vector<double> upper, double halo_width) {
  if (lower.empty() || lower.size() != upper.size()) throw std::invalid_argument("box bounds must have equal, nonzero length");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) throw std::invalid_argument("box bounds must be finite");
  }
  if (!(halo_width > 0.0)) throw std::invalid_argument("halo width must be positive");
  DomainSpec s;
  s.shape_ = Shape::Box;
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.halo_width_ = halo_width;
  return s;
}

DomainSpec DomainSpec::box_ball(GroupPoint center, double radius, double halo_width) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  if (!(halo_width > 0.0)) throw std::invalid_argument("halo width must be positive");
  DomainSpec s;
  s.shape_ = Shape::BoxBall;
  s.center_ = center;
  s.radius_ = radius;
  s.halo_width_ = halo_width;
  s.lower_.assign(static_cast<std::size_t>(center.size()), 0.0);
  s.upper_.assign(static_cast<std::size_t>(center.size()), 0.0);
  return s;
}

DomainSpec DomainSpec::with_halo_width(double width) const {
  if (!(width > 0.0)) throw std::invalid_argument("halo width must be positive");
  DomainSpec s = *this;
  s.halo_width_ = width;
  return s;
}

bool DomainSpec::contains(const CarnotGroup& group, const double* p) const {
  if (shape_ == Shape::Box) {
    for (std::size_t k = 0; k < lower_.size(); ++k)
      if (!(p[k] > lower_[k] && p[k] < upper_[k])) return false;
    return true;
  }
  std::array<double, kMaxDim> rel{};
  group.relative_raw(center_.data(), p, rel.data());
  return group.box_norm_raw(rel.data()) < radius_;
}

GroupPoint DiscreteDomain::point(std::size_t i) const { return GroupPoint(coords(i)); }

std::optional<std::uint32_t> DiscreteDomain::find(const LatticeIndex& idx) const {
  std::size_t flat = 0;
  for (int k = 0; k < dimension(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const std::int64_t off = std::int64_t{idx[kk]} - grid_lo_[kk];
    if (off < 0 || off >= grid_extent_[kk]) return std::nullopt;
    flat = flat * static_cast<std::size_t>(grid_extent_[kk]) + static_cast<std::size_t>(off);
  }
  const std::int32_t id = grid_[flat];
  if (id < 0) return std::nullopt;
  return static_cast<std::uint32_t>(id);
}

namespace {

void enclose_law(const CarnotGroup& group, const Interval* x, const Interval* y, Interval* out) {
  switch (group.kind()) {
    case GroupKind::Abelian:
      detail::abelian_law(group.dimension(), x, y, out);
      return;
    case GroupKind::Heisenberg1:
      detail::heisenberg_law(x, y, out);
      return;
    case GroupKind::Engel4:
      detail::engel_law(x, y, out);
      return;
    case GroupKind::Custom:
      break;
  }
  throw std::invalid_argument("lattices are only available for catalog groups");
}

std::array<Interval, kMaxDim> ball_box(const CarnotGroup& group, double r) {
  std::array<Interval, kMaxDim> b{};
  for (int k = 0; k < group.dimension(); ++k) {
    const double e = std::pow(r, group.degree(k));
    b[static_cast<std::size_t>(k)] = {-e, e};
  }
  return b;
}

// Enclosure of the domain itself.
std::array<Interval, kMaxDim> domain_box(const CarnotGroup& group, const DomainSpec& spec) {
  std::array<Interval, kMaxDim> out{};
  if (spec.shape() == DomainSpec::Shape::Box) {
    for (int k = 0; k < group.dimension(); ++k)
      out[static_cast<std::size_t>(k)] = {spec.lower()[static_cast<std::size_t>(k)], spec.upper()[static_cast<std::size_t>(k)]};
    return out;
  }
  std::array<Interval, kMaxDim> c{};
  for (int k = 0; k < group.dimension(); ++k) c[static_cast<std::size_t>(k)] = {spec.center()[k], spec.center()[k]};
  const auto ball = ball_box(group, spec.radius());
  enclose_law(group, c.data(), ball.data(), out.data());
  return out;
}

std::int32_t index_floor(double coord, double h) {
  return static_cast<std::int32_t>(std::floor(coord / h - 0.5));
}

}  // namespace

DiscreteDomain build_lattice(const CarnotGroup& group, const DomainSpec& spec, double eps, double h) {
  const int n = group.dimension();
  if (group.kind() == GroupKind::Custom) throw std::invalid_argument("lattices are only available for catalog groups");
  if (spec.dimension() != n) throw std::invalid_argument("domain dimension does not match group");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("lattice spacing must be positive");
  if (h > 0.5 * eps * (1.0 + kTieTolerance)) throw std::invalid_argument("lattice spacing must satisfy h <= eps/2");
  const double width = spec.halo_width();
  if (width < eps * (1.0 - kTieTolerance)) throw std::invalid_argument("halo width must be at least eps");
  if (spec.shape() == DomainSpec::Shape::Box) {
    for (int k = 0; k < n; ++k)
      if (!(spec.lower()[static_cast<std::size_t>(k)] < spec.upper()[static_cast<std::size_t>(k)]))
        throw ConstructionError("domain box is empty");
  }

  DiscreteDomain dom(group, spec, eps, h);
  dom.cell_measure_ = std::pow(h, n);

  const auto inner = domain_box(group, spec);
  const auto halo_ball = ball_box(group, width);
  std::array<Interval, kMaxDim> outer{};
  enclose_law(group, inner.data(), halo_ball.data(), outer.data());

  LatticeIndex window_lo{}, window_hi{}, cand_lo{}, cand_hi{};
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    window_lo[kk] = index_floor(inner[kk].lo, h) - 1;
    window_hi[kk] = index_floor(inner[kk].hi, h) + 2;
    const double pad = 1e-9 * std::max(1.0, std::abs(outer[kk].hi - outer[kk].lo));
    cand_lo[kk] = index_floor(outer[kk].lo - pad, h) - 1;
    cand_hi[kk] = index_floor(outer[kk].hi + pad, h) + 2;
  }

  auto coords_of = [&](const LatticeIndex& idx, double* out) {
    for (int k = 0; k < n; ++k) out[k] = lattice_coordinate(idx[static_cast<std::size_t>(k)], h);
  };
  auto near_interior = [&](const LatticeIndex& idx, double r) {
    bool found = false;
    std::array<double, kMaxDim> yc{};
    for_each_ball_cell(
        group, h, idx, r,
        [&](const LatticeIndex& y, const double*, double) {
          coords_of(y, yc.data());
          if (spec.contains(group, yc.data())) {
            found = true;
            return false;
          }
          return true;
        },
        &window_lo, &window_hi);
    return found;
  };

  const bool halo_is_walk_boundary = width <= eps * (1.0 + kTieTolerance);
  LatticeIndex idx = cand_lo;
  std::array<double, kMaxDim> pc{};
  for (;;) {
    coords_of(idx, pc.data());
    bool keep = false;
    PointTag tag = PointTag::Halo;
    bool active = false;
    if (spec.contains(group, pc.data())) {
      keep = true;
      tag = PointTag::Interior;
      active = true;
    } else if (near_interior(idx, width)) {
      keep = true;
      active = halo_is_walk_boundary || near_interior(idx, eps);
    }
    if (keep) {
      const auto id = static_cast<std::uint32_t>(dom.tags_.size());
      dom.coords_.insert(dom.coords_.end(), pc.begin(), pc.begin() + n);
      dom.indices_.push_back(idx);
      dom.tags_.push_back(tag);
      dom.active_.push_back(active ? 1 : 0);
      if (tag == PointTag::Interior) {
        dom.interior_slot_.push_back(static_cast<std::int32_t>(dom.interior_.size()));
        dom.interior_.push_back(id);
      } else {
        dom.interior_slot_.push_back(-1);
        dom.halo_.push_back(id);
        if (active) dom.boundary_.push_back(id);
      }
    }
    // Odometer over the candidate box, last coordinate fastest.
    int k = n - 1;
    while (k >= 0) {
      const auto kk = static_cast<std::size_t>(k);
      if (++idx[kk] <= cand_hi[kk]) break;
      idx[kk] = cand_lo[kk];
      --k;
    }
    if (k < 0) break;
  }

  if (dom.interior_.empty()) throw ConstructionError("domain has no interior lattice points at this spacing");

  LatticeIndex lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    lo[static_cast<std::size_t>(k)] = std::numeric_limits<std::int32_t>::max();
    hi[static_cast<std::size_t>(k)] = std::numeric_limits<std::int32_t>::min();
  }
  for (const auto& p : dom.indices_)
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      lo[kk] = std::min(lo[kk], p[kk]);
      hi[kk] = std::max(hi[kk], p[kk]);
    }
  std::size_t cells = 1;
  for (int k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    dom.grid_lo_[kk] = lo[kk];
    dom.grid_extent_[kk] = hi[kk] - lo[kk] + 1;
    cells *= static_cast<std::size_t>(dom.grid_extent_[kk]);
  }
  dom.grid_.assign(cells, -1);
  for (std::size_t i = 0; i < dom.indices_.size(); ++i) {
    std::size_t flat = 0;
    for (int k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      flat = flat * static_cast<std::size_t>(dom.grid_extent_[kk]) +
             static_cast<std::size_t>(dom.indices_[i][kk] - dom.grid_lo_[kk]);
    }
    dom.grid_[flat] = static_cast<std::int32_t>(i);
  }
  return dom;
}

}  // namespace lgp
