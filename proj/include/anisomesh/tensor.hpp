#pragma once

#include <cmath>

#include "anisomesh/geometry.hpp"

namespace anisomesh {

/// Symmetric 2x2 tensor [[a11, a12], [a12, a22]].
struct SymTensor2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static constexpr SymTensor2 identity(double s = 1.0) { return {s, 0.0, s}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a12; }
  /// x^T A y
  constexpr double form(Vec2 x, Vec2 y) const { return a11 * x.x * y.x + a12 * (x.x * y.y + x.y * y.x) + a22 * x.y * y.y; }
  constexpr double form(Vec2 x) const { return form(x, x); }
  constexpr Vec2 apply(Vec2 x) const { return {a11 * x.x + a12 * x.y, a12 * x.x + a22 * x.y}; }

  constexpr SymTensor2& operator+=(const SymTensor2& o) { a11 += o.a11; a12 += o.a12; a22 += o.a22; return *this; }
  constexpr SymTensor2& operator*=(double s) { a11 *= s; a12 *= s; a22 *= s; return *this; }
  friend constexpr bool operator==(const SymTensor2&, const SymTensor2&) = default;
};

constexpr SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
constexpr SymTensor2 operator-(const SymTensor2& a, const SymTensor2& b) { return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22}; }
constexpr SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }

/// Eigen-decomposition A = R^T diag(l1, l2) R with l1 >= l2. The eigenvector
/// of l1 is (cos angle, sin angle); R holds the eigenvectors as rows.
struct SymEigen2 {
  double l1 = 0.0;
  double l2 = 0.0;
  double angle = 0.0;
};

SymEigen2 eig_sym2(const SymTensor2& t);

/// Rebuilds R^T diag(l1, l2) R.
SymTensor2 compose(const SymEigen2& e);

/// Absolute value taken on the eigenvalues.
SymTensor2 abs_tensor(const SymTensor2& t);

/// alpha * I + |t|. Throws NonPositiveAlpha unless alpha > 0.
SymTensor2 floor_regularize(const SymTensor2& t, double alpha);

/// [tr(h) / sqrt(det h)]^(1/2) for SPD h; >= sqrt(2), equal at isotropy.
/// Throws NotSPD.
double anisotropy_factor(const SymTensor2& h);

/// R t R^T for the rotation by angle.
SymTensor2 rotate(const SymTensor2& t, double angle);

inline double spectral_radius(const SymTensor2& t) {
  const auto e = eig_sym2(t);
  return std::max(std::abs(e.l1), std::abs(e.l2));
}

inline bool is_spd(const SymTensor2& t) { return t.a11 > 0.0 && t.det() > 0.0; }

}  // namespace anisomesh
