#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anisomesh/errors.hpp"
#include "anisomesh/recovery.hpp"

using namespace anisomesh;

namespace {

std::vector<double> sample(const TriMesh& m, double (*f)(Vec2)) {
  std::vector<double> out(m.num_vertices());
  for (Index v = 0; v < m.num_vertices(); ++v) out[v] = f(m.vertex(v));
  return out;
}

/// Vertices whose whole one-ring is interior. The second recovery pass at a
/// vertex next to the boundary reads one-sided boundary gradients, so only
/// these see a symmetric two-ring.
std::vector<Index> deep_interior(const TriMesh& m) {
  std::vector<Index> out;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    bool ok = !m.on_boundary(v);
    for (Index t : m.vertex_triangles(v))
      for (Index w : m.triangle(t)) ok = ok && !m.on_boundary(w);
    if (ok) out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("gradient recovery is exact for affine fields") {
  const TriMesh m = structured_unit_square(5);
  for (const Vec2 g : zz_gradient(sample(m, [](Vec2 p) { return p.x + 2 * p.y; }), m)) {
    CHECK(std::abs(g.x - 1) <= 1e-12);
    CHECK(std::abs(g.y - 2) <= 1e-12);
  }
  for (const Vec2 g : zz_gradient(std::vector<double>(m.num_vertices(), 3.0), m)) {
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);
  }
  for (const auto& h : recover_hessian(sample(m, [](Vec2 p) { return 4 - p.x + 2 * p.y; }), m).values) {
    CHECK(std::abs(h.a11) + std::abs(h.a12) + std::abs(h.a22) <= 1e-11);
  }
}

TEST_CASE("x^2 on a 4x4 mesh: derivative at an interior vertex on x = 0.5") {
  const TriMesh m = structured_unit_square(4);
  const auto g = zz_gradient(sample(m, [](Vec2 p) { return p.x * p.x; }), m);
  int seen = 0;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    if (m.on_boundary(v) || m.vertex(v).x != 0.5) continue;
    CHECK(std::abs(g[v].x - 1.0) <= 1e-12);
    ++seen;
  }
  CHECK(seen == 3);
}

TEST_CASE("Hessian of x^2 + 3y^2 is recovered away from the boundary") {
  const TriMesh m = structured_unit_square(8);
  const auto h = recover_hessian(sample(m, [](Vec2 p) { return p.x * p.x + 3 * p.y * p.y; }), m);
  CHECK(h.role == TensorRole::hessian);
  const auto inner = deep_interior(m);
  CHECK(inner.size() == 25);
  for (Index v : inner) {
    CHECK(std::abs(h[v].a11 - 2) <= 0.2);
    CHECK(std::abs(h[v].a22 - 6) <= 0.6);
    CHECK(std::abs(h[v].a12) <= 0.1);
  }
  // Next to the boundary the one-sided patches leave an O(1) error.
  double near_boundary = 0;
  for (Index v = 0; v < m.num_vertices(); ++v)
    if (!m.on_boundary(v)) near_boundary = std::max(near_boundary, std::abs(h[v].a22 - 6));
  MESSAGE("largest a22 error over all interior vertices: " << near_boundary);
}

TEST_CASE("Hessian recovery is linear") {
  const TriMesh m = structured_unit_square(6);
  const auto u = sample(m, [](Vec2 p) { return std::sin(3 * p.x) * p.y; });
  const auto w = sample(m, [](Vec2 p) { return p.x * p.x * p.x - p.y; });
  std::vector<double> mix(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mix[i] = 2 * u[i] - 0.5 * w[i];
  const auto hu = recover_hessian(u, m), hw = recover_hessian(w, m), hm = recover_hessian(mix, m);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const SymTensor2 e = hm[i] - (2.0 * hu[i] + (-0.5) * hw[i]);
    CHECK(std::abs(e.a11) + std::abs(e.a12) + std::abs(e.a22) <= 1e-10);
  }
}

TEST_CASE("interior Hessian error shrinks under refinement") {
  double prev = 0;
  for (int n : {8, 16, 32}) {
    const TriMesh m = structured_unit_square(n);
    const auto h = recover_hessian(sample(m, [](Vec2 p) { return p.x * p.x - p.x * p.y + 2 * p.y * p.y; }), m);
    double err = 0;
    for (Index v : deep_interior(m)) {
      err = std::max({err, std::abs(h[v].a11 - 2), std::abs(h[v].a12 + 1), std::abs(h[v].a22 - 4)});
    }
    MESSAGE("n = " << n << " max error " << err);
    if (n > 8) CHECK(err <= std::max(prev / 2, 1e-11));
    prev = err;
  }
  CHECK(prev <= 1e-10);
}

TEST_CASE("h2_error examples") {
  const TriMesh m = structured_unit_square(3);
  ProblemSpec p;
  p.exact_hessian = [](Vec2) { return SymTensor2{1, 2, 3}; };
  NodalTensorField exact{std::vector<SymTensor2>(m.num_vertices(), {1, 2, 3}), TensorRole::hessian};
  CHECK(h2_error(exact, p, m) <= 1e-14);
  NodalTensorField off{std::vector<SymTensor2>(m.num_vertices(), {2, 1, 3}), TensorRole::hessian};
  // E = [[1,-1],[-1,0]] so ||E||_F = sqrt(3) on a unit-area domain.
  CHECK(h2_error(off, p, m) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  p.exact_hessian = nullptr;
  CHECK_THROWS_AS(h2_error(off, p, m), MissingExactSolution);
}
