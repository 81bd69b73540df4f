#pragma once

// Closed-form group laws of the catalog groups, templated on the scalar so
// that the same polynomial is evaluated on doubles and on intervals.

namespace lgp::detail {

template <class T>
void abelian_law(int n, const T* x, const T* y, T* out) {
  for (int k = 0; k < n; ++k) out[k] = x[k] + y[k];
}

// (x1 + y1, x2 + y2, x3 + y3 + (x1 y2 - x2 y1)/2)
template <class T>
void heisenberg_law(const T* x, const T* y, T* out) {
  const T bracket = x[0] * y[1] - x[1] * y[0];
  out[0] = x[0] + y[0];
  out[1] = x[1] + y[1];
  out[2] = x[2] + y[2] + 0.5 * bracket;
}

// Engel group E^4, degrees (1, 1, 2, 3):
//   out3 = x3 + y3 + (x1 y2 - x2 y1)/2
//   out4 = x4 + y4 + (x1 y3 - x3 y1)/2 + (x2 y3 - x3 y2)/2
//          + (x1 + x2 - y1 - y2)(x1 y2 - x2 y1)/12
template <class T>
void engel_law(const T* x, const T* y, T* out) {
  const T bracket = x[0] * y[1] - x[1] * y[0];
  const T out3 = x[2] + y[2] + 0.5 * bracket;
  const T out4 = x[3] + y[3] + 0.5 * (x[0] * y[2] - x[2] * y[0]) + 0.5 * (x[1] * y[2] - x[2] * y[1]) +
                 (1.0 / 12.0) * ((x[0] + x[1] - y[0] - y[1]) * bracket);
  out[0] = x[0] + y[0];
  out[1] = x[1] + y[1];
  out[2] = out3;
  out[3] = out4;
}

}  // namespace lgp::detail
