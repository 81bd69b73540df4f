#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgp/carnot.hpp"

namespace lgp {

/// Relative tolerance below which |z_k| and r^deg(k) are treated as a tie.
inline constexpr double kTieTolerance = 1e-9;

enum class PointTag : std::uint8_t { Interior, Halo };

/// Bounded open domain: an axis-aligned coordinate box or a centered box ball U(c, r).
class DomainSpec {
 public:
  enum class Shape { Box, BoxBall };

  static DomainSpec box(std::vector<double> lower, std::vector<double> upper, double halo_width);
  static DomainSpec box_ball(GroupPoint center, double radius, double halo_width);

  Shape shape() const { return shape_; }
  int dimension() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const GroupPoint& center() const { return center_; }
  double radius() const { return radius_; }
  double halo_width() const { return halo_width_; }
  DomainSpec with_halo_width(double width) const;

  bool contains(const CarnotGroup& group, const double* p) const;

 private:
  Shape shape_ = Shape::Box;
  std::vector<double> lower_, upper_;
  GroupPoint center_;
  double radius_ = 0.0;
  double halo_width_ = 0.0;
};

using LatticeIndex = std::array<std::int32_t, kMaxDim>;

/// Coordinate of lattice cell center i along any axis: (i + 1/2) h.
inline double lattice_coordinate(std::int32_t i, double h) { return (static_cast<double>(i) + 0.5) * h; }

/**
 * Enumerates lattice cells y with box_dist(x, y) <= r on the infinite
 * origin-aligned lattice of spacing h, x itself included.
 *
 * The callback receives (y index, z = x^{-1} y, theta) and returns false to
 * stop. theta is the fraction of the cell credited to the ball: 1 inside,
 * 1/2 per coordinate whose |z_k| ties with r^deg(k). Optional per-axis
 * index windows [lo, hi] restrict the enumeration.
 *
 * Enumeration runs coordinate by coordinate: in exponential coordinates the
 * k-th coordinate of x^{-1} y is y_k - x_k plus a polynomial in lower-degree
 * coordinates, so each level is a single interval of lattice offsets.
 */
template <class Callback>
bool for_each_ball_cell(const CarnotGroup& group, double h, const LatticeIndex& x, double r, Callback&& callback,
                        const LatticeIndex* window_lo = nullptr, const LatticeIndex* window_hi = nullptr);

class DiscreteDomain {
 public:
  const CarnotGroup& group() const { return group_; }
  const DomainSpec& spec() const { return spec_; }
  double eps() const { return eps_; }
  double spacing() const { return h_; }
  double cell_measure() const { return cell_measure_; }
  int dimension() const { return group_.dimension(); }

  std::size_t size() const { return tags_.size(); }
  GroupPoint point(std::size_t i) const;
  std::span<const double> coords(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dimension()), static_cast<std::size_t>(dimension())};
  }
  const LatticeIndex& index(std::size_t i) const { return indices_[i]; }
  PointTag tag(std::size_t i) const { return tags_[i]; }
  bool is_interior(std::size_t i) const { return tags_[i] == PointTag::Interior; }
  /// Interior points and halo points within eps of the interior (the set reached by the walk).
  bool is_active(std::size_t i) const { return active_[i] != 0; }

  std::span<const std::uint32_t> interior() const { return interior_; }
  std::span<const std::uint32_t> halo() const { return halo_; }
  /// Active halo points (the walk boundary).
  std::span<const std::uint32_t> boundary() const { return boundary_; }
  /// Position of point i in interior(), or -1.
  std::int32_t interior_slot(std::size_t i) const { return interior_slot_[i]; }

  std::optional<std::uint32_t> find(const LatticeIndex& idx) const;

 private:
  friend DiscreteDomain build_lattice(const CarnotGroup&, const DomainSpec&, double, double);
  DiscreteDomain(CarnotGroup group, DomainSpec spec, double eps, double h)
      : group_(std::move(group)), spec_(std::move(spec)), eps_(eps), h_(h) {}

  CarnotGroup group_;
  DomainSpec spec_;
  double eps_;
  double h_;
  double cell_measure_ = 0.0;
  std::vector<double> coords_;
  std::vector<LatticeIndex> indices_;
  std::vector<PointTag> tags_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint32_t> interior_, halo_, boundary_;
  std::vector<std::int32_t> interior_slot_;
  // Dense lookup over the bounding box of stored indices.
  LatticeIndex grid_lo_{}, grid_extent_{};
  std::vector<std::int32_t> grid_;
};

/**
 * Lattice cell centers of the domain and its halo.
 *
 * Interior points lie in the open domain; halo points lie outside it within
 * halo_width (box distance, tie inclusive) of some interior point.
 * Requires h <= eps/2 and halo_width >= eps.
 */
DiscreteDomain build_lattice(const CarnotGroup& group, const DomainSpec& spec, double eps, double h);

// ---------------------------------------------------------------------------

namespace detail {

template <class Callback>
struct BallWalk {
  const CarnotGroup& group;
  double h;
  const LatticeIndex& x;
  Callback& callback;
  const LatticeIndex* window_lo;
  const LatticeIndex* window_hi;
  int n;
  std::array<double, kMaxDim> radius_pow{};
  std::array<double, kMaxDim> x_coords{};
  std::array<double, kMaxDim> y_coords{};
  std::array<double, kMaxDim> z{};
  LatticeIndex y{};

  bool run(int k, double theta) {
    if (k == n) return callback(static_cast<const LatticeIndex&>(y), static_cast<const double*>(z.data()), theta);
    const auto kk = static_cast<std::size_t>(k);
    double shift = 0.0;
    if (group.degree(k) > 1) {
      std::array<double, kMaxDim> probe = y_coords;
      for (int j = k; j < n; ++j) probe[static_cast<std::size_t>(j)] = x_coords[static_cast<std::size_t>(j)];
      std::array<double, kMaxDim> rel{};
      group.relative_raw(x_coords.data(), probe.data(), rel.data());
      shift = rel[kk];
    }
    const double radius = radius_pow[kk];
    const double outer = radius * (1.0 + kTieTolerance);
    const double inner = radius * (1.0 - kTieTolerance);
    auto a_lo = static_cast<std::int64_t>(std::floor((-outer - shift) / h)) - 1;
    auto a_hi = static_cast<std::int64_t>(std::ceil((outer - shift) / h)) + 1;
    if (window_lo) a_lo = std::max<std::int64_t>(a_lo, std::int64_t{(*window_lo)[kk]} - x[kk]);
    if (window_hi) a_hi = std::min<std::int64_t>(a_hi, std::int64_t{(*window_hi)[kk]} - x[kk]);
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
      const double zk = shift + static_cast<double>(a) * h;
      const double abs_z = std::abs(zk);
      if (abs_z > outer) continue;
      const double factor = abs_z >= inner ? 0.5 : 1.0;
      y[kk] = static_cast<std::int32_t>(x[kk] + a);
      y_coords[kk] = lattice_coordinate(y[kk], h);
      z[kk] = zk;
      if (!run(k + 1, theta * factor)) return false;
    }
    return true;
  }
};

}  // namespace detail

template <class Callback>
bool for_each_ball_cell(const CarnotGroup& group, double h, const LatticeIndex& x, double r, Callback&& callback,
                        const LatticeIndex* window_lo, const LatticeIndex* window_hi) {
  detail::BallWalk<std::remove_reference_t<Callback>> walk{group, h, x, callback, window_lo, window_hi,
                                                           group.dimension()};
  for (int k = 0; k < walk.n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    walk.radius_pow[kk] = std::pow(r, group.degree(k));
    walk.x_coords[kk] = lattice_coordinate(x[kk], h);
  }
  walk.y_coords = walk.x_coords;
  return walk.run(0, 1.0);
}

}  // namespace lgp
