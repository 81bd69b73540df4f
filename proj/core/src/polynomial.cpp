#include "lgp/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace lgp {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

Polynomial::Term term(double coef, std::initializer_list<std::pair<int, int>> factors) {
  Polynomial::Term t;
  t.coef = coef;
  for (auto [k, p] : factors) t.powers[static_cast<std::size_t>(k)] += p;
  return t;
}

}  // namespace

Polynomial::Polynomial(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("polynomial dimension out of range");
  for (const Term& t : terms_)
    for (int k = n; k < kMaxDim; ++k)
      if (t.powers[static_cast<std::size_t>(k)] != 0) throw std::invalid_argument("term uses a coordinate beyond n");
}

Polynomial Polynomial::coordinate(int n, int k) {
  if (k < 0 || k >= n) throw std::invalid_argument("coordinate index out of range");
  return Polynomial(n, {term(1.0, {{k, 1}})});
}

Polynomial Polynomial::preset(std::string_view name, int n) {
  const int top = n - 1;
  if (name == "top") return coordinate(n, top);
  if (name.size() >= 2 && name[0] == 'x') {
    int k = 0;
    for (char c : name.substr(1)) {
      if (c < '0' || c > '9') throw std::invalid_argument("unknown polynomial preset '" + std::string(name) + "'");
      k = 10 * k + (c - '0');
    }
    return coordinate(n, k - 1);
  }
  if (n == 1) {
    if (name == "quad") return Polynomial(1, {term(1.0, {{0, 2}})});
    if (name == "cubic") return Polynomial(1, {term(1.0, {{0, 3}})});
    if (name == "mixed") return Polynomial(1, {term(1.0, {{0, 2}}), term(1.0, {{0, 1}})});
  } else {
    if (name == "quad") return Polynomial(n, {term(1.0, {{0, 1}, {1, 1}}), term(1.0, {{top, 2}})});
    if (name == "cubic")
      return Polynomial(n, {term(1.0, {{0, 3}}), term(1.0, {{0, 1}, {top, 1}}), term(-1.0, {{1, 1}, {top, 2}})});
    if (name == "mixed")
      return Polynomial(n, {term(1.0, {{0, 1}, {top, 1}}), term(1.0, {{1, 2}}), term(-1.0, {{top, 1}})});
  }
  throw std::invalid_argument("unknown polynomial preset '" + std::string(name) + "'");
}

std::vector<std::string> Polynomial::preset_names() { return {"x1", "top", "quad", "cubic", "mixed"}; }

int Polynomial::degree() const {
  int d = 0;
  for (const Term& t : terms_) {
    int s = 0;
    for (int p : t.powers) s += p;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::value(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("point dimension mismatch");
  double s = 0.0;
  for (const Term& t : terms_) {
    double v = t.coef;
    for (int k = 0; k < n_; ++k) v *= ipow(x[static_cast<std::size_t>(k)], t.powers[static_cast<std::size_t>(k)]);
    s += v;
  }
  return s;
}

std::vector<double> Polynomial::gradient(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("point dimension mismatch");
  std::vector<double> g(static_cast<std::size_t>(n_), 0.0);
  for (const Term& t : terms_) {
    for (int i = 0; i < n_; ++i) {
      const int pi = t.powers[static_cast<std::size_t>(i)];
      if (pi == 0) continue;
      double v = t.coef * pi;
      for (int k = 0; k < n_; ++k) {
        const int e = t.powers[static_cast<std::size_t>(k)] - (k == i ? 1 : 0);
        v *= ipow(x[static_cast<std::size_t>(k)], e);
      }
      g[static_cast<std::size_t>(i)] += v;
    }
  }
  return g;
}

}  // namespace lgp
