#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lgp::runner {

/// Malformed user input (config, expression, flag); mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Compiled scalar expression over coordinates x1..xn.
 *
 * Grammar: numeric literals, x1..xn, unary and binary + - * /, parentheses,
 * sign(a), step(a) (1 if a > 0 else 0), abs(a), min(a, b), max(a, b).
 */
class Expression {
 public:
  /// Throws UsageError on a syntax error or a coordinate index outside 1..dimension.
  static Expression parse(std::string_view text, int dimension);

  double operator()(std::span<const double> x) const;
  const std::string& text() const { return text_; }
  /// Largest coordinate index referenced (0 if none).
  int max_coordinate() const { return max_coord_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_coord_ = 0;
};

}  // namespace lgp::runner
