#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lgp {

/// Largest supported dimension of a catalog group (abelian R^n with n <= 8).
inline constexpr int kMaxDim = 8;

/**
 * Layer dimensions (m_1, ..., m_l) of a stratified Lie algebra.
 *
 * Coordinates are ordered adapted to the stratification: the first m_1
 * coordinates have degree 1, the next m_2 have degree 2, and so on.
 */
class StratificationSpec {
 public:
  StratificationSpec() = default;
  explicit StratificationSpec(std::vector<int> layer_dims);

  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int dimension() const { return n_; }
  int horizontal_dimension() const { return layer_dims_.empty() ? 0 : layer_dims_.front(); }
  int homogeneous_dimension() const { return q_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  int degree(int coord) const { return degrees_[static_cast<std::size_t>(coord)]; }
  std::span<const int> degrees() const { return {degrees_.data(), static_cast<std::size_t>(n_)}; }

 private:
  std::vector<int> layer_dims_;
  std::array<int, kMaxDim> degrees_{};
  int n_ = 0;
  int q_ = 0;
};

/// Small fixed-capacity vector of finite reals; base of points and horizontal vectors.
class CoordVector {
 public:
  CoordVector() = default;
  explicit CoordVector(std::span<const double> values);
  CoordVector(std::initializer_list<double> values);

  static CoordVector zero(int size);

  int size() const { return size_; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return {data_.data(), static_cast<std::size_t>(size_)}; }
  const double* data() const { return data_.data(); }

  friend bool operator==(const CoordVector& a, const CoordVector& b) {
    if (a.size_ != b.size_) return false;
    for (int i = 0; i < a.size_; ++i)
      if (a.data_[static_cast<std::size_t>(i)] != b.data_[static_cast<std::size_t>(i)]) return false;
    return true;
  }

 protected:
  std::array<double, kMaxDim> data_{};
  int size_ = 0;
};

/// A point of a Carnot group in exponential coordinates of the first kind.
class GroupPoint : public CoordVector {
 public:
  using CoordVector::CoordVector;
  GroupPoint() = default;
  explicit GroupPoint(const CoordVector& v) : CoordVector(v) {}
  static GroupPoint zero(int n) { return GroupPoint(CoordVector::zero(n)); }
};

/// Components (X_1 f, ..., X_m f) along the horizontal frame.
class HorizontalVector : public CoordVector {
 public:
  using CoordVector::CoordVector;
  HorizontalVector() = default;
  explicit HorizontalVector(const CoordVector& v) : CoordVector(v) {}
  double euclidean_norm() const;
  double sup_norm() const;
};

/// Coefficients of the horizontal frame at a point: column j is X_j in the basis d_1..d_n.
class FrameMatrix {
 public:
  FrameMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int row, int col) const { return a_[index(row, col)]; }
  double& operator()(int row, int col) { return a_[index(row, col)]; }

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * kMaxDim + static_cast<std::size_t>(col);
  }
  int rows_;
  int cols_;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

enum class GroupKind { Abelian, Heisenberg1, Engel4, Custom };

/**
 * A catalog Carnot group with its closed-form group law in exponential
 * coordinates.
 *
 * Supported: abelian R^n (n <= 8), the first Heisenberg group H^1 and the
 * Engel group E^4. Groups are small values and cheap to copy. A custom law
 * can be attached for testing the invariant suite; custom groups support the
 * algebra operations but not lattice construction.
 */
class CarnotGroup {
 public:
  using LawFunction = std::function<void(const double* x, const double* y, double* out)>;
  using FrameFunction = std::function<void(const double* x, FrameMatrix& frame)>;

  static CarnotGroup abelian(int n);
  static CarnotGroup heisenberg1();
  static CarnotGroup engel4();
  static CarnotGroup custom(std::string name, StratificationSpec spec, LawFunction law, FrameFunction frame);

  /// Accepts "heisenberg1", "engel4", "abelianN" and "abelian(N)".
  static CarnotGroup from_id(std::string_view id);

  GroupKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  const StratificationSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension(); }
  int horizontal_dimension() const { return spec_.horizontal_dimension(); }
  int homogeneous_dimension() const { return spec_.homogeneous_dimension(); }
  int degree(int coord) const { return spec_.degree(coord); }

  GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) const;
  GroupPoint inverse(const GroupPoint& x) const;
  GroupPoint dilate(double lambda, const GroupPoint& x) const;
  double box_norm(const GroupPoint& x) const;
  double box_dist(const GroupPoint& x, const GroupPoint& y) const;

  /// Lebesgue measure of the box ball U(0, r) = 2^n r^Q.
  double ball_volume(double r) const;
  /// Integral of |z_1| over the unit box ball [-1, 1]^n, i.e. 2^(n-1).
  double c_constant() const;

  FrameMatrix horizontal_frame(const GroupPoint& x) const;
  /// (X phi)_j = column_j(frame(x)) . grad_phi, with grad_phi the Euclidean partials at x.
  HorizontalVector horizontal_gradient(std::span<const double> grad_phi, const GroupPoint& x) const;

  // Raw-array kernels for hot loops; no validation.
  void multiply_raw(const double* x, const double* y, double* out) const;
  /// out = x^{-1} y.
  void relative_raw(const double* x, const double* y, double* out) const;
  double box_norm_raw(const double* z) const;

 private:
  CarnotGroup(GroupKind kind, std::string id, StratificationSpec spec);
  void check_point(const GroupPoint& x) const;

  GroupKind kind_;
  std::string id_;
  StratificationSpec spec_;
  LawFunction custom_law_;
  FrameFunction custom_frame_;
};

using ScalarField = std::function<double(const GroupPoint&)>;

/// (phi(x o delta_eps(z)) - phi(x)) / eps.
double difference_quotient(const CarnotGroup& group, const ScalarField& phi, const GroupPoint& x,
                           const GroupPoint& z, double eps);

struct LemmaReport {
  std::vector<double> eps;
  std::vector<double> errors;       ///< |difference_quotient - <z, X phi(x)>| per eps
  std::vector<double> ratios;       ///< errors[k] / errors[k+1]
  double limit = 0.0;               ///< <z, X phi(x)>
  double fitted_order = 0.0;        ///< least-squares slope of log(error) against log(eps)
  bool exact = false;               ///< every error at round-off level; fitted_order is then meaningless
};

/// Compares difference quotients with <z, X phi> along a decreasing list of eps.
LemmaReport verify_horizontal_lemma(const CarnotGroup& group, const ScalarField& phi,
                                    std::span<const double> grad_phi_at_x, const GroupPoint& x,
                                    const GroupPoint& z, std::span<const double> eps_list);

double monte_carlo_ball_volume(const CarnotGroup& group, double r, std::size_t samples, unsigned long long seed);
double monte_carlo_c_constant(const CarnotGroup& group, std::size_t samples, unsigned long long seed);

}  // namespace lgp
