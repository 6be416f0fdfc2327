#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anisomesh/errors.hpp"
#include "anisomesh/mesh.hpp"

using namespace anisomesh;

namespace {

TriMesh two_triangle_square() {
  return build_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}}, {});
}

}  // namespace

TEST_CASE("build_mesh accepts the two-triangle square") {
  const TriMesh m = two_triangle_square();
  CHECK(m.num_vertices() == 4);
  CHECK(m.num_triangles() == 2);
  CHECK(m.num_edges() == 5);
  CHECK(m.boundary_edges().size() == 4);
  for (Index v = 0; v < 4; ++v) CHECK(m.on_boundary(v));
  CHECK(m.neighbor(0, 1) == 1);
  CHECK(m.neighbor(1, 2) == 0);
}

TEST_CASE("clockwise triangles are reoriented") {
  const TriMesh m = build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}, {});
  CHECK(m.area(0) == doctest::Approx(0.5));
  CHECK(element_geometry(m, 0).area > 0.0);
}

TEST_CASE("an edge used three times is non-conforming") {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {0.6, 0.8}};
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}, {}), NonConforming);
}

TEST_CASE("overlapping triangles on the same side of an edge are rejected") {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {0.5, 1}, {0.4, 0.5}};
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2}, {0, 1, 3}}, {}), NonConforming);
}

TEST_CASE("degenerate, dangling and duplicate entities") {
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {}), DegenerateTriangle);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}}, {}), DanglingVertex);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}, {0, 0}}, {{0, 1, 2}, {3, 1, 2}}, {}), DuplicateEntity);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}, {1, 2, 0}}, {}), DuplicateEntity);
  CHECK_THROWS_AS(build_mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 7}}, {}), ValidationError);
}

TEST_CASE("boundary tags must cover the boundary and lie in range") {
  std::vector<Vec2> v{{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2}}, {{{0, 1}, 1}, {{1, 2}, 2}}), NonConforming);
  CHECK_THROWS_AS(build_mesh(v, {{0, 1, 2}}, {{{0, 1}, 1}, {{1, 2}, 2}, {{2, 0}, 40}}), ValidationError);
  const TriMesh m = build_mesh(v, {{0, 1, 2}}, {{{0, 1}, 1}, {{1, 2}, 2}, {{2, 0}, 3}});
  for (Index i = 0; i < 3; ++i) CHECK(m.vertex_kind(i) == VertexKind::corner);
}

TEST_CASE("structured_unit_square counts, tags and area") {
  for (int n : {1, 2, 10}) {
    const TriMesh m = structured_unit_square(n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1));
    CHECK(m.num_triangles() == 2 * n * n);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-12));
  }
  const TriMesh m = structured_unit_square(4);
  CHECK(m.vertex_tags(0) == ((1u << 1) | (1u << 4)));
  CHECK(m.vertex_kind(0) == VertexKind::corner);
  CHECK(m.vertex_kind(2) == VertexKind::boundary);
  CHECK(m.vertex_kind(6) == VertexKind::interior);
  for (const auto& e : m.boundary_edges()) {
    const Vec2 a = m.vertex(e.v[0]), b = m.vertex(e.v[1]);
    if (e.tag == 1) CHECK((a.y == 0.0 && b.y == 0.0));
    if (e.tag == 2) CHECK((a.x == 1.0 && b.x == 1.0));
    if (e.tag == 3) CHECK((a.y == 1.0 && b.y == 1.0));
    if (e.tag == 4) CHECK((a.x == 0.0 && b.x == 0.0));
  }
  CHECK_THROWS_AS(structured_unit_square(0), ValidationError);
  CHECK_NOTHROW(validate(m));
}

TEST_CASE("element_geometry follows the l1 + l2 + l3 = 0 convention") {
  const auto g = element_geometry({0, 0}, {1, 0}, {0, 1});
  CHECK(g.area == doctest::Approx(0.5));
  CHECK(g.edges[0].x == -1.0);
  CHECK(g.edges[0].y == 1.0);
  CHECK(g.edges[1].x == 0.0);
  CHECK(g.edges[1].y == -1.0);
  CHECK(g.edges[2].x == 1.0);
  CHECK(g.edges[2].y == 0.0);

  const auto e = element_geometry({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
  CHECK(e.area == doctest::Approx(std::sqrt(3.0) / 4));
  for (double l : e.edge_lengths) CHECK(l == doctest::Approx(1.0));
  const Vec2 s = e.edges[0] + e.edges[1] + e.edges[2];
  CHECK(std::abs(s.x) + std::abs(s.y) < 1e-15);

  const TriMesh m = structured_unit_square(2);
  CHECK_THROWS_AS(element_geometry(m, 99), std::out_of_range);
}

TEST_CASE("locate_point: centroid, vertices, shared edges, outside") {
  const TriMesh m = structured_unit_square(4);
  for (Index t = 0; t < m.num_triangles(); t += 5) {
    const auto& tri = m.triangle(t);
    const Vec2 c = (1.0 / 3.0) * (m.vertex(tri[0]) + m.vertex(tri[1]) + m.vertex(tri[2]));
    const auto loc = locate_point(m, c, (t * 7) % m.num_triangles());
    CHECK(loc.triangle == t);
    for (double b : loc.bary) CHECK(b == doctest::Approx(1.0 / 3.0));
  }
  for (Index v = 0; v < m.num_vertices(); ++v) {
    const auto loc = locate_point(m, m.vertex(v), m.num_triangles() - 1);
    CHECK(loc.triangle == m.vertex_triangles(v).front());
    const auto& tri = m.triangle(loc.triangle);
    for (int i = 0; i < 3; ++i)
      if (tri[i] == v) CHECK(loc.bary[i] == doctest::Approx(1.0));
  }
  // Midpoint of the diagonal of the first cell is shared by triangles 0 and 1.
  CHECK(locate_point(m, {0.125, 0.125}, 1).triangle == 0);
  CHECK_THROWS_AS(locate_point(m, {1.1, 0.5}), PointOutsideDomain);
  CHECK(locate_point(m, {1.0 + 1e-12, 0.5}).triangle != kNoIndex);
}

TEST_CASE("transfer_field reproduces affine functions") {
  const TriMesh coarse = structured_unit_square(3);
  const TriMesh fine = structured_unit_square(7);
  std::vector<double> f(coarse.num_vertices()), c(coarse.num_vertices(), 5.0);
  for (Index v = 0; v < coarse.num_vertices(); ++v) f[v] = 3 * coarse.vertex(v).x - 2 * coarse.vertex(v).y;
  const auto g = transfer_field(f, coarse, fine);
  const auto h = transfer_field(c, coarse, fine);
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    CHECK(std::abs(g[v] - (3 * fine.vertex(v).x - 2 * fine.vertex(v).y)) <= 1e-12);
    CHECK(std::abs(h[v] - 5.0) <= 1e-12);
  }
  CHECK_THROWS_AS(transfer_field(std::vector<double>(3), coarse, fine), ValidationError);
}

TEST_CASE("transfer of x^2 to a uniform refinement obeys the interpolation bound") {
  const int n = 4;
  const TriMesh coarse = structured_unit_square(n);
  const TriMesh fine = structured_unit_square(2 * n);
  std::vector<double> f(coarse.num_vertices());
  for (Index v = 0; v < coarse.num_vertices(); ++v) f[v] = coarse.vertex(v).x * coarse.vertex(v).x;
  const auto g = transfer_field(f, coarse, fine);
  const double diam = std::sqrt(2.0) / n;
  for (Index v = 0; v < fine.num_vertices(); ++v) {
    const double x = fine.vertex(v).x;
    CHECK(std::abs(g[v] - x * x) <= diam * diam / 4 + 1e-15);
  }
}
