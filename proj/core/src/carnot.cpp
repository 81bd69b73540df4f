#include "lgp/carnot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "group_law.hpp"

namespace lgp {

StratificationSpec::StratificationSpec(std::vector<int> layer_dims) : layer_dims_(std::move(layer_dims)) {
  if (layer_dims_.empty()) throw std::invalid_argument("stratification needs at least one layer");
  int coord = 0;
  for (std::size_t j = 0; j < layer_dims_.size(); ++j) {
    const int dim = layer_dims_[j];
    if (dim <= 0) throw std::invalid_argument("layer dimensions must be positive");
    for (int k = 0; k < dim; ++k) {
      if (coord >= kMaxDim) throw std::invalid_argument("group dimension exceeds kMaxDim");
      degrees_[static_cast<std::size_t>(coord++)] = static_cast<int>(j) + 1;
    }
    q_ += (static_cast<int>(j) + 1) * dim;
  }
  n_ = coord;
}

CoordVector::CoordVector(std::span<const double> values) {
  if (values.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("coordinate vector longer than kMaxDim");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("coordinates must be finite");
    data_[i] = values[i];
  }
  size_ = static_cast<int>(values.size());
}

CoordVector::CoordVector(std::initializer_list<double> values)
    : CoordVector(std::span<const double>(values.begin(), values.size())) {}

CoordVector CoordVector::zero(int size) {
  if (size < 0 || size > kMaxDim) throw std::invalid_argument("bad coordinate vector size");
  CoordVector v;
  v.size_ = size;
  return v;
}

double HorizontalVector::euclidean_norm() const {
  double s = 0.0;
  for (double c : values()) s += c * c;
  return std::sqrt(s);
}

double HorizontalVector::sup_norm() const {
  double s = 0.0;
  for (double c : values()) s = std::max(s, std::abs(c));
  return s;
}

CarnotGroup::CarnotGroup(GroupKind kind, std::string id, StratificationSpec spec)
    : kind_(kind), id_(std::move(id)), spec_(std::move(spec)) {}

CarnotGroup CarnotGroup::abelian(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("abelian group dimension must be in [1, 8]");
  return CarnotGroup(GroupKind::Abelian, "abelian" + std::to_string(n), StratificationSpec({n}));
}

CarnotGroup CarnotGroup::heisenberg1() {
  return CarnotGroup(GroupKind::Heisenberg1, "heisenberg1", StratificationSpec({2, 1}));
}

CarnotGroup CarnotGroup::engel4() {
  return CarnotGroup(GroupKind::Engel4, "engel4", StratificationSpec({2, 1, 1}));
}

CarnotGroup CarnotGroup::custom(std::string name, StratificationSpec spec, LawFunction law, FrameFunction frame) {
  if (!law || !frame) throw std::invalid_argument("custom group needs a law and a frame");
  CarnotGroup g(GroupKind::Custom, std::move(name), std::move(spec));
  g.custom_law_ = std::move(law);
  g.custom_frame_ = std::move(frame);
  return g;
}

CarnotGroup CarnotGroup::from_id(std::string_view id) {
  if (id == "heisenberg1" || id == "H1") return heisenberg1();
  if (id == "engel4" || id == "E4") return engel4();
  if (id.starts_with("abelian")) {
    std::string_view rest = id.substr(7);
    if (rest.starts_with("(") && rest.ends_with(")")) rest = rest.substr(1, rest.size() - 2);
    if (!rest.empty() && std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        rest.size() <= 2) {
      return abelian(std::stoi(std::string(rest)));
    }
  }
  throw std::invalid_argument("unknown group id '" + std::string(id) + "'");
}

void CarnotGroup::check_point(const GroupPoint& x) const {
  if (x.size() != dimension())
    throw std::invalid_argument("point dimension " + std::to_string(x.size()) + " does not match group " + id_);
}

void CarnotGroup::multiply_raw(const double* x, const double* y, double* out) const {
  switch (kind_) {
    case GroupKind::Abelian:
      detail::abelian_law(dimension(), x, y, out);
      return;
    case GroupKind::Heisenberg1:
      detail::heisenberg_law(x, y, out);
      return;
    case GroupKind::Engel4:
      detail::engel_law(x, y, out);
      return;
    case GroupKind::Custom:
      custom_law_(x, y, out);
      return;
  }
}

void CarnotGroup::relative_raw(const double* x, const double* y, double* out) const {
  std::array<double, kMaxDim> neg{};
  for (int k = 0; k < dimension(); ++k) neg[static_cast<std::size_t>(k)] = -x[k];
  multiply_raw(neg.data(), y, out);
}

double CarnotGroup::box_norm_raw(const double* z) const {
  double norm = 0.0;
  for (int k = 0; k < dimension(); ++k) {
    const double a = std::abs(z[k]);
    const int d = degree(k);
    const double root = d == 1 ? a : (d == 2 ? std::sqrt(a) : (d == 3 ? std::cbrt(a) : std::pow(a, 1.0 / d)));
    norm = std::max(norm, root);
  }
  return norm;
}

GroupPoint CarnotGroup::multiply(const GroupPoint& x, const GroupPoint& y) const {
  check_point(x);
  check_point(y);
  std::array<double, kMaxDim> out{};
  multiply_raw(x.data(), y.data(), out.data());
  return GroupPoint(std::span<const double>(out.data(), static_cast<std::size_t>(dimension())));
}

GroupPoint CarnotGroup::inverse(const GroupPoint& x) const {
  check_point(x);
  std::array<double, kMaxDim> out{};
  for (int k = 0; k < dimension(); ++k) out[static_cast<std::size_t>(k)] = -x[k];
  return GroupPoint(std::span<const double>(out.data(), static_cast<std::size_t>(dimension())));
}

GroupPoint CarnotGroup::dilate(double lambda, const GroupPoint& x) const {
  check_point(x);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("dilation factor must be positive");
  std::array<double, kMaxDim> out{};
  for (int k = 0; k < dimension(); ++k) {
    double scale = lambda;
    for (int j = 1; j < degree(k); ++j) scale *= lambda;
    out[static_cast<std::size_t>(k)] = scale * x[k];
  }
  return GroupPoint(std::span<const double>(out.data(), static_cast<std::size_t>(dimension())));
}

double CarnotGroup::box_norm(const GroupPoint& x) const {
  check_point(x);
  return box_norm_raw(x.data());
}

double CarnotGroup::box_dist(const GroupPoint& x, const GroupPoint& y) const {
  check_point(x);
  check_point(y);
  std::array<double, kMaxDim> rel{};
  relative_raw(x.data(), y.data(), rel.data());
  return box_norm_raw(rel.data());
}

double CarnotGroup::ball_volume(double r) const {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("ball radius must be positive");
  return std::ldexp(std::pow(r, homogeneous_dimension()), dimension());
}

double CarnotGroup::c_constant() const { return std::ldexp(1.0, dimension() - 1); }

FrameMatrix CarnotGroup::horizontal_frame(const GroupPoint& x) const {
  check_point(x);
  const int n = dimension();
  const int m = horizontal_dimension();
  FrameMatrix frame(n, m);
  for (int j = 0; j < m; ++j) frame(j, j) = 1.0;
  switch (kind_) {
    case GroupKind::Abelian:
      break;
    case GroupKind::Heisenberg1:
      frame(2, 0) = -0.5 * x[1];
      frame(2, 1) = 0.5 * x[0];
      break;
    case GroupKind::Engel4:
      // W^j_k(x) = d/dt (x o t e_j)_k at t = 0, read off the group law.
      frame(2, 0) = -0.5 * x[1];
      frame(3, 0) = -0.5 * x[2] - x[1] * x[1] / 12.0 - x[0] * x[1] / 12.0;
      frame(2, 1) = 0.5 * x[0];
      frame(3, 1) = -0.5 * x[2] + x[0] * x[0] / 12.0 + x[0] * x[1] / 12.0;
      break;
    case GroupKind::Custom:
      custom_frame_(x.data(), frame);
      break;
  }
  return frame;
}

HorizontalVector CarnotGroup::horizontal_gradient(std::span<const double> grad_phi, const GroupPoint& x) const {
  if (grad_phi.size() != static_cast<std::size_t>(dimension()))
    throw std::invalid_argument("gradient length does not match group dimension");
  const FrameMatrix frame = horizontal_frame(x);
  std::array<double, kMaxDim> out{};
  for (int j = 0; j < frame.cols(); ++j) {
    double s = 0.0;
    for (int k = 0; k < frame.rows(); ++k) s += frame(k, j) * grad_phi[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(j)] = s;
  }
  return HorizontalVector(std::span<const double>(out.data(), static_cast<std::size_t>(frame.cols())));
}

double difference_quotient(const CarnotGroup& group, const ScalarField& phi, const GroupPoint& x,
                           const GroupPoint& z, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const GroupPoint shifted = group.multiply(x, group.dilate(eps, z));
  return (phi(shifted) - phi(x)) / eps;
}

LemmaReport verify_horizontal_lemma(const CarnotGroup& group, const ScalarField& phi,
                                    std::span<const double> grad_phi_at_x, const GroupPoint& x,
                                    const GroupPoint& z, std::span<const double> eps_list) {
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0)) throw std::invalid_argument("eps values must be positive");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw std::invalid_argument("eps list must be decreasing");
  }
  LemmaReport report;
  const HorizontalVector xphi = group.horizontal_gradient(grad_phi_at_x, x);
  double limit = 0.0;
  for (int j = 0; j < group.horizontal_dimension(); ++j) limit += z[j] * xphi[j];
  report.limit = limit;

  // Round-off floor: a quotient carries about ulp(phi)/eps of noise.
  const double phi_scale = std::max(1.0, std::abs(phi(x)));
  bool exact = true;
  for (double eps : eps_list) {
    const double err = std::abs(difference_quotient(group, phi, x, z, eps) - limit);
    report.eps.push_back(eps);
    report.errors.push_back(err);
    if (err > 64.0 * phi_scale * 2.220446049250313e-16 / eps) exact = false;
  }
  for (std::size_t k = 0; k + 1 < report.errors.size(); ++k)
    report.ratios.push_back(report.errors[k + 1] > 0.0 ? report.errors[k] / report.errors[k + 1] : 0.0);
  report.exact = exact;

  if (!exact && report.eps.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t k = 0; k < report.eps.size(); ++k) {
      if (report.errors[k] <= 0.0) continue;
      const double lx = std::log(report.eps[k]);
      const double ly = std::log(report.errors[k]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++count;
    }
    if (count >= 2) report.fitted_order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  return report;
}

namespace {

// Uniform samples on the box prod_k [-1.5 r^deg, 1.5 r^deg]; the box ball sits strictly inside.
template <class Integrand>
double box_monte_carlo(const CarnotGroup& group, double r, std::size_t samples, unsigned long long seed,
                       Integrand&& integrand) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const int n = group.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.5, 1.5);
  std::array<double, kMaxDim> half{};
  double box_volume = 1.0;
  for (int k = 0; k < n; ++k) {
    half[static_cast<std::size_t>(k)] = std::pow(r, group.degree(k));
    box_volume *= 3.0 * half[static_cast<std::size_t>(k)];
  }
  double sum = 0.0;
  std::array<double, kMaxDim> z{};
  for (std::size_t s = 0; s < samples; ++s) {
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = unit(rng) * half[static_cast<std::size_t>(k)];
    if (group.box_norm_raw(z.data()) < r) sum += integrand(z.data());
  }
  return box_volume * sum / static_cast<double>(samples);
}

}  // namespace

double monte_carlo_ball_volume(const CarnotGroup& group, double r, std::size_t samples, unsigned long long seed) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  return box_monte_carlo(group, r, samples, seed, [](const double*) { return 1.0; });
}

double monte_carlo_c_constant(const CarnotGroup& group, std::size_t samples, unsigned long long seed) {
  return box_monte_carlo(group, 1.0, samples, seed, [](const double* z) { return std::abs(z[0]); });
}

}  // namespace lgp
