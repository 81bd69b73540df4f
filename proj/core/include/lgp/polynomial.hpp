#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lgp/carnot.hpp"

namespace lgp {

/// Polynomial in exponential coordinates with exact Euclidean gradient.
class Polynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::array<int, kMaxDim> powers{};
  };

  Polynomial(int n, std::vector<Term> terms);

  /// x_{k+1}; k is zero-based.
  static Polynomial coordinate(int n, int k);

  /**
   * Shipped test polynomials:
   *   xK     coordinate K (1-based)
   *   top    x_n
   *   quad   x1 x2 + x_n^2
   *   cubic  x1^3 + x1 x_n - x2 x_n^2
   *   mixed  x1 x_n + x2^2 - x_n
   * On R^1 the formulas collapse to x1^2, x1^3 and x1^2 + x1 respectively.
   */
  static Polynomial preset(std::string_view name, int n);
  static std::vector<std::string> preset_names();

  int dimension() const { return n_; }
  int degree() const;
  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  double operator()(const GroupPoint& x) const { return value(x.values()); }

 private:
  int n_;
  std::vector<Term> terms_;
};

}  // namespace lgp
