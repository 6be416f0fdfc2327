#include "anisomesh/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "anisomesh/errors.hpp"

namespace anisomesh {

namespace {

// a11 a22 - a12^2 with one rounding error, via Kahan's fma trick.
double accurate_det(const SymTensor2& t) {
  const double w = t.a12 * t.a12;
  const double err = std::fma(-t.a12, t.a12, w);
  return std::fma(t.a11, t.a22, -w) + err;
}

}  // namespace

SymEigen2 eig_sym2(const SymTensor2& t) {
  const double mean = 0.5 * (t.a11 + t.a22);
  const double half_diff = 0.5 * (t.a11 - t.a22);
  const double r = std::hypot(half_diff, t.a12);
  SymEigen2 e;
  // The eigenvalue of smaller magnitude comes from the determinant, so it
  // keeps full relative accuracy.
  if (mean >= 0.0) {
    e.l1 = mean + r;
    e.l2 = e.l1 == 0.0 ? 0.0 : accurate_det(t) / e.l1;
  } else {
    e.l2 = mean - r;
    e.l1 = accurate_det(t) / e.l2;
  }
  e.angle = (r == 0.0) ? 0.0 : 0.5 * std::atan2(t.a12, half_diff);
  return e;
}

SymTensor2 compose(const SymEigen2& e) {
  const double c = std::cos(e.angle), s = std::sin(e.angle);
  // l1 * v v^T + l2 * w w^T with v = (c, s), w = (-s, c)
  return {e.l1 * c * c + e.l2 * s * s, (e.l1 - e.l2) * c * s, e.l1 * s * s + e.l2 * c * c};
}

SymTensor2 abs_tensor(const SymTensor2& t) {
  auto e = eig_sym2(t);
  if (e.l2 >= 0.0) return t;
  e.l1 = std::abs(e.l1);
  e.l2 = std::abs(e.l2);
  return compose(e);
}

SymTensor2 floor_regularize(const SymTensor2& t, double alpha) {
  if (!(alpha > 0.0)) throw NonPositiveAlpha("flooring parameter must be positive");
  return abs_tensor(t) + SymTensor2::identity(alpha);
}

double anisotropy_factor(const SymTensor2& h) {
  if (!is_spd(h)) throw NotSPD("anisotropy factor needs an SPD tensor");
  const double det = accurate_det(h);
  if (!(det > 0.0)) throw NotSPD("anisotropy factor needs an SPD tensor");
  return std::sqrt(h.trace() / std::sqrt(det));
}

SymTensor2 rotate(const SymTensor2& t, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  // R = [[c, -s], [s, c]]; (R t R^T)
  const double b11 = c * t.a11 - s * t.a12, b12 = c * t.a12 - s * t.a22;
  const double b21 = s * t.a11 + c * t.a12, b22 = s * t.a12 + c * t.a22;
  return {b11 * c - b12 * s, b11 * s + b12 * c, b21 * s + b22 * c};
}

}  // namespace anisomesh
