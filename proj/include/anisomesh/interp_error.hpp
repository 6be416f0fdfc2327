#pragma once

#include <cstdint>
#include <vector>

#include "anisomesh/mesh.hpp"
#include "anisomesh/metric.hpp"
#include "anisomesh/tensor.hpp"

// Exact linear-interpolation errors of quadratic functions on triangles.
// Every function returns a squared norm on one element and depends on the
// Hessian only, since the error of an affine function vanishes.

namespace anisomesh {

/// u(x) = 1/2 x^T H x + g.x + c, so the Hessian of u is exactly H.
struct QuadraticFunction {
  SymTensor2 hessian;
  Vec2 linear;
  double constant = 0.0;

  double value(Vec2 p) const { return 0.5 * hessian.form(p) + dot(linear, p) + constant; }
  Vec2 gradient(Vec2 p) const { return hessian.apply(p) + linear; }
};

/// |u - u_I|_{H1(K)}^2 = 1/(48|K|) sum_i (l_{i+1}.H l_{i+2})^2 |l_i|^2.
double h1_error_thm21(const SymTensor2& hessian, const ElementGeometry& geom);

/// |u - u_I|_{H1(K)}^2 = 1/4 v^T B v with v_i = l_i.H l_i and
/// B = 1/(48|K|) [sum|l|^2 on the diagonal, 2 l_i.l_j off it].
double h1_error_bank_smith(const SymTensor2& hessian, const ElementGeometry& geom);

/// ||u - u_I||_{L2(K)}^2 = |K|/180 [(d1+d2+d3)^2 + d1^2+d2^2+d3^2] with
/// d_i = 1/2 l_i.H l_i.
double l2_error_nadler(const SymTensor2& hessian, const ElementGeometry& geom);

struct EtaResult {
  double eta = 0.0;
  /// Squared per-element contributions e_K^2.
  std::vector<double> per_element;
};

/// Global estimator sqrt(sum_K e_K^2), e_K^2 from the closed form above with
/// the element Hessian taken as the mean of its three vertex tensors.
EtaResult eta_global(const NodalTensorField& hessian, const TriMesh& mesh);

/// Coefficient of variation (population stddev / mean) of the values.
double coefficient_of_variation(const std::vector<double>& values);

/// Brute-force reference: integrates (u - u_I)^2 or |grad(u - u_I)|^2 for
/// u = 1/2 x^T H x with the degree-6 rule.
double oracle_interp_error(const SymTensor2& hessian, Vec2 a, Vec2 b, Vec2 c, ErrorNorm norm);

/// Largest pairwise relative deviations seen by check_formulas.
struct FormulaDeviation {
  double thm21_vs_bank_smith = 0.0;
  double thm21_vs_oracle = 0.0;
  double bank_smith_vs_oracle = 0.0;
  double nadler_vs_oracle = 0.0;
  int trials = 0;

  double worst() const;
};

/// Compares the closed forms with the oracle on random Hessians (either sign,
/// eigenvalues spanning four decades) and random triangles with aspect
/// ratios up to max_aspect.
FormulaDeviation check_formulas(int trials, std::uint64_t seed = 1, double max_aspect = 1e3);

}  // namespace anisomesh
