#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "anisomesh/geometry.hpp"

namespace anisomesh {

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the triangle area; weights sum to 1
};

/// 12-point symmetric rule, exact for polynomials of degree 6.
std::span<const QuadPoint> triangle_rule_degree6();

using Bary = std::array<double, 3>;

/// Relative size, against the squared magnitudes being subtracted, below
/// which an error integrand is treated as rounding noise.
inline constexpr double kRoundoffFloor = 1e-24;

namespace detail {

template <std::size_t N, class F>
std::array<double, N> rule_on(const std::array<Bary, 3>& corner, const std::array<Vec2, 3>& p, double area, F& f) {
  std::array<double, N> sum{};
  for (const auto& q : triangle_rule_degree6()) {
    Bary lam{};
    for (int k = 0; k < 3; ++k) lam[k] = q.bary[0] * corner[0][k] + q.bary[1] * corner[1][k] + q.bary[2] * corner[2][k];
    const Vec2 x = lam[0] * p[0] + lam[1] * p[1] + lam[2] * p[2];
    const std::array<double, N> v = f(x, lam);
    for (std::size_t i = 0; i < N; ++i) sum[i] += q.weight * v[i];
  }
  for (auto& s : sum) s *= area;
  return sum;
}

template <std::size_t N, class F>
std::array<double, N> refine(const std::array<Bary, 3>& corner, const std::array<Vec2, 3>& p, double area,
                             const std::array<double, N>& coarse, F& f, double rel_tol, double abs_tol, int depth) {
  auto mid = [](const Bary& u, const Bary& v) {
    return Bary{0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1]), 0.5 * (u[2] + v[2])};
  };
  const Bary m01 = mid(corner[0], corner[1]), m12 = mid(corner[1], corner[2]), m20 = mid(corner[2], corner[0]);
  const std::array<std::array<Bary, 3>, 4> child{{
      {corner[0], m01, m20},
      {m01, corner[1], m12},
      {m20, m12, corner[2]},
      {m12, m20, m01},
  }};
  std::array<std::array<double, N>, 4> part;
  std::array<double, N> fine{};
  for (int c = 0; c < 4; ++c) {
    part[c] = rule_on<N>(child[c], p, 0.25 * area, f);
    for (std::size_t i = 0; i < N; ++i) fine[i] += part[c][i];
  }
  double gap = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    gap = std::max(gap, std::abs(fine[i] - coarse[i]));
    scale = std::max(scale, std::abs(fine[i]));
  }
  if (depth == 0 || gap <= rel_tol * scale + abs_tol) return fine;
  std::array<double, N> total{};
  for (int c = 0; c < 4; ++c) {
    const auto sub = refine<N>(child[c], p, 0.25 * area, part[c], f, rel_tol, 0.25 * abs_tol, depth - 1);
    for (std::size_t i = 0; i < N; ++i) total[i] += sub[i];
  }
  return total;
}

}  // namespace detail

/// Integrates a vector-valued f(x, barycentric coordinates of x) over the
/// triangle abc with the degree-6 rule, subdividing into four congruent
/// children wherever one level of refinement changes the result by more than
/// rel_tol in relative terms and by more than abs_tol in absolute terms
/// (abs_tol is shared out among children). Polynomials up to degree 6 are
/// integrated exactly at the top level.
template <std::size_t N, class F>
std::array<double, N> integrate_adaptive(Vec2 a, Vec2 b, Vec2 c, double area, F&& f, double rel_tol = 1e-9,
                                         int max_depth = 10, double abs_tol = 0.0) {
  const std::array<Bary, 3> corner{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
  const std::array<Vec2, 3> p{a, b, c};
  const auto coarse = detail::rule_on<N>(corner, p, area, f);
  return detail::refine<N>(corner, p, area, coarse, f, rel_tol, abs_tol, max_depth);
}

}  // namespace anisomesh
