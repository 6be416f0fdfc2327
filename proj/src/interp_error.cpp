#include "anisomesh/interp_error.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>

#include "anisomesh/errors.hpp"
#include "anisomesh/kernels.hpp"
#include "anisomesh/quadrature.hpp"

namespace anisomesh {

namespace {

void require_nondegenerate(const ElementGeometry& geom) {
  if (!(geom.area > 0.0)) throw DegenerateTriangle("element has non-positive area");
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// The closed forms below cancel heavily on thin elements with indefinite
// Hessians, so they are evaluated in extended precision.
using Wide = long double;

Wide wide_form(const SymTensor2& h, Vec2 x, Vec2 y) {
  const Wide xx = x.x, xy = x.y, yx = y.x, yy = y.y;
  return Wide{h.a11} * xx * yx + Wide{h.a12} * (xx * yy + xy * yx) + Wide{h.a22} * xy * yy;
}

Wide wide_dot(Vec2 x, Vec2 y) { return Wide{x.x} * y.x + Wide{x.y} * y.y; }

}  // namespace

double h1_error_thm21(const SymTensor2& h, const ElementGeometry& geom) {
  require_nondegenerate(geom);
  const auto& l = geom.edges;
  Wide sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Wide q = wide_form(h, l[(i + 1) % 3], l[(i + 2) % 3]);
    sum += q * q * wide_dot(l[i], l[i]);
  }
  return static_cast<double>(sum / (48.0L * geom.area));
}

double h1_error_bank_smith(const SymTensor2& h, const ElementGeometry& geom) {
  require_nondegenerate(geom);
  const auto& l = geom.edges;
  const std::array<Wide, 3> d{wide_form(h, l[0], l[0]), wide_form(h, l[1], l[1]), wide_form(h, l[2], l[2])};
  const Wide diag = wide_dot(l[0], l[0]) + wide_dot(l[1], l[1]) + wide_dot(l[2], l[2]);
  Wide vbv = diag * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) vbv += 4.0L * wide_dot(l[i], l[j]) * d[i] * d[j];
  }
  return static_cast<double>(0.25L * vbv / (48.0L * geom.area));
}

double l2_error_nadler(const SymTensor2& h, const ElementGeometry& geom) {
  require_nondegenerate(geom);
  const auto& l = geom.edges;
  const std::array<Wide, 3> d{0.5L * wide_form(h, l[0], l[0]), 0.5L * wide_form(h, l[1], l[1]),
                              0.5L * wide_form(h, l[2], l[2])};
  const Wide s = d[0] + d[1] + d[2];
  return static_cast<double>(geom.area / 180.0L * (s * s + d[0] * d[0] + d[1] * d[1] + d[2] * d[2]));
}

EtaResult eta_global(const NodalTensorField& hessian, const TriMesh& mesh) {
  const Index nt = mesh.num_triangles();
  if (static_cast<Index>(hessian.size()) != mesh.num_vertices()) {
    throw ValidationError("Hessian field length does not match the mesh");
  }
  std::vector<double> x0(nt), y0(nt), x1(nt), y1(nt), x2(nt), y2(nt), a11(nt), a12(nt), a22(nt);
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 p0 = mesh.vertex(tri[0]), p1 = mesh.vertex(tri[1]), p2 = mesh.vertex(tri[2]);
    x0[t] = p0.x; y0[t] = p0.y;
    x1[t] = p1.x; y1[t] = p1.y;
    x2[t] = p2.x; y2[t] = p2.y;
    const SymTensor2 h = (1.0 / 3.0) * (hessian[tri[0]] + hessian[tri[1]] + hessian[tri[2]]);
    a11[t] = h.a11; a12[t] = h.a12; a22[t] = h.a22;
  }
  EtaResult r;
  r.per_element.resize(nt);
  kernels::element_h1_error_sq({x0, y0, x1, y1, x2, y2}, {a11, a12, a22}, r.per_element);
  r.eta = std::sqrt(std::accumulate(r.per_element.begin(), r.per_element.end(), 0.0));
  return r;
}

double coefficient_of_variation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return std::sqrt(var / n) / mean;
}

double oracle_interp_error(const SymTensor2& h, Vec2 a, Vec2 b, Vec2 c, ErrorNorm norm) {
  // Shift to the first vertex: only an affine term changes, which u_I reproduces.
  const std::array<Vec2, 3> p{Vec2{}, b - a, c - a};
  const double twice_area = orient2d(p[0], p[1], p[2]);
  if (!(twice_area > 0.0)) throw DegenerateTriangle("oracle needs a counterclockwise, non-degenerate triangle");

  struct W {
    Wide x, y;
  };
  auto hx = [&](W x) { return W{h.a11 * x.x + h.a12 * x.y, h.a12 * x.x + h.a22 * x.y}; };
  auto half_form = [&](W x) {
    const W y = hx(x);
    return 0.5L * (x.x * y.x + x.y * y.y);
  };

  std::array<W, 3> wp{};
  for (int i = 0; i < 3; ++i) wp[i] = {p[i].x, p[i].y};
  const Wide twice = wp[1].x * wp[2].y - wp[1].y * wp[2].x;

  std::array<Wide, 3> nodal{};
  W grad_interp{0.0L, 0.0L};
  for (int i = 0; i < 3; ++i) {
    nodal[i] = half_form(wp[i]);
    const W e{wp[(i + 2) % 3].x - wp[(i + 1) % 3].x, wp[(i + 2) % 3].y - wp[(i + 1) % 3].y};
    grad_interp.x += nodal[i] * -e.y / twice;
    grad_interp.y += nodal[i] * e.x / twice;
  }

  Wide sum = 0.0L;
  for (const auto& q : triangle_rule_degree6()) {
    W x{0.0L, 0.0L};
    for (int i = 0; i < 3; ++i) {
      x.x += q.bary[i] * wp[i].x;
      x.y += q.bary[i] * wp[i].y;
    }
    if (norm == ErrorNorm::l2) {
      const Wide e = half_form(x) - (q.bary[0] * nodal[0] + q.bary[1] * nodal[1] + q.bary[2] * nodal[2]);
      sum += q.weight * e * e;
    } else {
      const W g = hx(x);
      const Wide dx = g.x - grad_interp.x, dy = g.y - grad_interp.y;
      sum += q.weight * (dx * dx + dy * dy);
    }
  }
  return static_cast<double>(sum * 0.5L * twice);
}

double FormulaDeviation::worst() const {
  return std::max({thm21_vs_bank_smith, thm21_vs_oracle, bank_smith_vs_oracle, nadler_vs_oracle});
}

FormulaDeviation check_formulas(int trials, std::uint64_t seed, double max_aspect) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto angle = [&] { return 2.0 * std::numbers::pi * unit(rng); };
  auto eigenvalue = [&] { return (unit(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, 4.0 * unit(rng) - 2.0); };

  FormulaDeviation dev;
  dev.trials = trials;
  for (int n = 0; n < trials; ++n) {
    const SymTensor2 h = rotate(SymTensor2{eigenvalue(), 0.0, eigenvalue()}, angle());

    // A well-shaped triangle inscribed in the unit circle, squeezed along y,
    // then rotated and moved.
    std::array<Vec2, 3> p;
    const double t0 = angle();
    for (int i = 0; i < 3; ++i) {
      const double t = t0 + i * (2.0 * std::numbers::pi / 3.0) + unit(rng) - 0.5;
      p[i] = Vec2{std::cos(t), std::sin(t)};
    }
    const double squeeze = std::pow(max_aspect, -unit(rng));
    const double phi = angle(), size = std::pow(10.0, 2.0 * unit(rng) - 1.0);
    const Vec2 shift{unit(rng) * 4.0 - 2.0, unit(rng) * 4.0 - 2.0};
    for (auto& q : p) {
      const Vec2 s{q.x, squeeze * q.y};
      q = shift + size * Vec2{std::cos(phi) * s.x - std::sin(phi) * s.y, std::sin(phi) * s.x + std::cos(phi) * s.y};
    }
    // Snap to a common dyadic grid so that every edge vector is computed
    // exactly and all formulas see the same triangle.
    const double grid = std::ldexp(1.0, std::ilogb(std::abs(shift.x) + std::abs(shift.y) + 4.0 * size) - 50);
    for (auto& q : p) q = Vec2{std::round(q.x / grid) * grid, std::round(q.y / grid) * grid};
    if (orient2d(p[0], p[1], p[2]) < 0.0) std::swap(p[1], p[2]);
    const ElementGeometry geom = element_geometry(p[0], p[1], p[2]);

    const double thm = h1_error_thm21(h, geom);
    const double bs = h1_error_bank_smith(h, geom);
    const double o1 = oracle_interp_error(h, p[0], p[1], p[2], ErrorNorm::h1);
    const double nad = l2_error_nadler(h, geom);
    const double o0 = oracle_interp_error(h, p[0], p[1], p[2], ErrorNorm::l2);
    dev.thm21_vs_bank_smith = std::max(dev.thm21_vs_bank_smith, relative_gap(thm, bs));
    dev.thm21_vs_oracle = std::max(dev.thm21_vs_oracle, relative_gap(thm, o1));
    dev.bank_smith_vs_oracle = std::max(dev.bank_smith_vs_oracle, relative_gap(bs, o1));
    dev.nadler_vs_oracle = std::max(dev.nadler_vs_oracle, relative_gap(nad, o0));
  }
  return dev;
}

}  // namespace anisomesh
