#include "anisomesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "anisomesh/errors.hpp"

namespace anisomesh {

namespace {

struct HalfEdge {
  Index lo, hi;
  Index tri;
  int local;  // local index of the opposite vertex
  bool forward;  // true when the triangle traverses lo -> hi
};

std::string edge_name(Index a, Index b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

std::array<double, 3> barycentric(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  const double det = orient2d(a, b, c);
  const double l0 = orient2d(p, b, c) / det;
  const double l1 = orient2d(a, p, c) / det;
  return {l0, l1, 1.0 - l0 - l1};
}

Vec2 closest_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 d = b - a;
  const double len2 = norm2(d);
  const double s = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return a + s * d;
}

}  // namespace

TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
                   std::vector<BoundaryEdge> boundary_edges) {
  const auto nv = static_cast<Index>(vertices.size());
  const auto nt = static_cast<Index>(triangles.size());
  if (nt == 0) throw DegenerateTriangle("mesh has no triangles");

  for (const Vec2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("non-finite vertex coordinate");
  }

  for (Index t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (Index v : tri) {
      if (v < 0 || v >= nv) {
        throw ValidationError("triangle " + std::to_string(t) + " references missing vertex " + std::to_string(v));
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw DegenerateTriangle("triangle " + std::to_string(t) + " repeats a vertex");
    }
  }

  TriMesh mesh;
  {
    double xmin = std::numeric_limits<double>::max(), ymin = xmin;
    double xmax = std::numeric_limits<double>::lowest(), ymax = xmax;
    for (const Vec2& p : vertices) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    mesh.diameter_ = std::hypot(xmax - xmin, ymax - ymin);
  }
  const double diam = mesh.diameter_;

  const double area_tol = 1e-14 * diam * diam;
  for (Index t = 0; t < nt; ++t) {
    auto& tri = triangles[t];
    double twice = orient2d(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
    if (twice < 0.0) {
      std::swap(tri[1], tri[2]);
      twice = -twice;
    }
    if (0.5 * twice <= area_tol) {
      throw DegenerateTriangle("triangle " + std::to_string(t) + " has area " + std::to_string(0.5 * twice));
    }
  }

  // Duplicate vertices: sweep in x order.
  {
    const double tol = 1e-12 * diam;
    std::vector<Index> order(nv);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return vertices[a].x < vertices[b].x; });
    for (Index i = 0; i < nv; ++i) {
      const Vec2 p = vertices[order[i]];
      for (Index j = i + 1; j < nv && vertices[order[j]].x - p.x <= tol; ++j) {
        if (norm(vertices[order[j]] - p) <= tol) {
          throw DuplicateEntity("duplicate vertices " + edge_name(order[i], order[j]));
        }
      }
    }
  }

  // Duplicate triangles.
  {
    std::vector<Triangle> sorted(triangles);
    for (auto& tri : sorted) std::sort(tri.begin(), tri.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DuplicateEntity("duplicate triangles");
    }
  }

  // Dangling vertices.
  {
    std::vector<char> used(nv, 0);
    for (const auto& tri : triangles)
      for (Index v : tri) used[v] = 1;
    for (Index v = 0; v < nv; ++v) {
      if (!used[v]) throw DanglingVertex("vertex " + std::to_string(v) + " belongs to no triangle");
    }
  }

  // Edge conformity and adjacency.
  std::vector<HalfEdge> half;
  half.reserve(3 * static_cast<std::size_t>(nt));
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int i = 0; i < 3; ++i) {
      const Index a = tri[(i + 1) % 3];
      const Index b = tri[(i + 2) % 3];
      half.push_back({std::min(a, b), std::max(a, b), t, i, a < b});
    }
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& a, const HalfEdge& b) {
    return std::tie(a.lo, a.hi, a.tri) < std::tie(b.lo, b.hi, b.tri);
  });

  mesh.neighbors_.assign(nt, {kNoIndex, kNoIndex, kNoIndex});
  std::vector<BoundaryEdge> found_boundary;
  Index num_edges = 0;
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i + 1;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
    const std::size_t count = j - i;
    if (count > 2) {
      throw NonConforming("edge " + edge_name(half[i].lo, half[i].hi) + " shared by " + std::to_string(count) +
                          " triangles");
    }
    if (count == 2) {
      if (half[i].forward == half[i + 1].forward) {
        throw NonConforming("triangles on edge " + edge_name(half[i].lo, half[i].hi) + " overlap");
      }
      mesh.neighbors_[half[i].tri][half[i].local] = half[i + 1].tri;
      mesh.neighbors_[half[i + 1].tri][half[i + 1].local] = half[i].tri;
    } else {
      const HalfEdge& h = half[i];
      BoundaryEdge be;
      be.v = h.forward ? std::array<Index, 2>{h.lo, h.hi} : std::array<Index, 2>{h.hi, h.lo};
      be.tag = 1;
      found_boundary.push_back(be);
    }
    ++num_edges;
    i = j;
  }
  mesh.num_edges_ = num_edges;

  auto edge_key = [](Index a, Index b) { return std::pair{std::min(a, b), std::max(a, b)}; };
  if (!boundary_edges.empty()) {
    std::vector<std::pair<std::pair<Index, Index>, int>> given;
    given.reserve(boundary_edges.size());
    for (const auto& be : boundary_edges) {
      if (be.v[0] < 0 || be.v[0] >= nv || be.v[1] < 0 || be.v[1] >= nv) {
        throw ValidationError("boundary edge references missing vertex");
      }
      given.push_back({edge_key(be.v[0], be.v[1]), be.tag});
    }
    std::sort(given.begin(), given.end());
    for (std::size_t i = 1; i < given.size(); ++i) {
      if (given[i].first == given[i - 1].first) {
        throw DuplicateEntity("boundary edge " + edge_name(given[i].first.first, given[i].first.second) +
                              " listed twice");
      }
    }
    if (given.size() != found_boundary.size()) {
      throw NonConforming("boundary edge list has " + std::to_string(given.size()) + " entries but mesh has " +
                          std::to_string(found_boundary.size()) + " boundary edges");
    }
    for (auto& be : found_boundary) {
      auto key = edge_key(be.v[0], be.v[1]);
      auto it = std::lower_bound(given.begin(), given.end(), std::pair{key, std::numeric_limits<int>::min()});
      if (it == given.end() || it->first != key) {
        throw NonConforming("boundary edge " + edge_name(key.first, key.second) + " is not tagged");
      }
      be.tag = it->second;
    }
  }

  // Keep the caller's ordering of boundary edges when one was given.
  if (!boundary_edges.empty()) {
    std::vector<BoundaryEdge> ordered;
    ordered.reserve(boundary_edges.size());
    std::vector<std::pair<std::pair<Index, Index>, std::size_t>> pos;
    for (std::size_t i = 0; i < found_boundary.size(); ++i) {
      pos.push_back({edge_key(found_boundary[i].v[0], found_boundary[i].v[1]), i});
    }
    std::sort(pos.begin(), pos.end());
    for (const auto& be : boundary_edges) {
      auto key = edge_key(be.v[0], be.v[1]);
      auto it = std::lower_bound(pos.begin(), pos.end(), std::pair{key, std::size_t{0}});
      ordered.push_back(found_boundary[it->second]);
    }
    found_boundary = std::move(ordered);
  }

  mesh.kinds_.assign(nv, VertexKind::interior);
  mesh.tag_masks_.assign(nv, 0u);
  {
    std::vector<int> degree(nv, 0);
    for (const auto& be : found_boundary) {
      if (be.tag < 1 || be.tag > 31) throw ValidationError("boundary tag " + std::to_string(be.tag) + " outside [1, 31]");
      for (Index v : be.v) {
        ++degree[v];
        mesh.tag_masks_[v] |= 1u << be.tag;
      }
    }
    for (Index v = 0; v < nv; ++v) {
      if (degree[v] == 0) continue;
      if (degree[v] != 2) {
        throw NonConforming("boundary vertex " + std::to_string(v) + " has " + std::to_string(degree[v]) +
                            " boundary edges");
      }
      // Two incident boundary edges with distinct tags make a corner.
      mesh.kinds_[v] = (mesh.tag_masks_[v] & (mesh.tag_masks_[v] - 1)) ? VertexKind::corner : VertexKind::boundary;
    }
  }

  mesh.vt_offsets_.assign(nv + 1, 0);
  for (const auto& tri : triangles)
    for (Index v : tri) ++mesh.vt_offsets_[v + 1];
  for (Index v = 0; v < nv; ++v) mesh.vt_offsets_[v + 1] += mesh.vt_offsets_[v];
  mesh.vt_list_.resize(mesh.vt_offsets_[nv]);
  {
    std::vector<Index> fill(mesh.vt_offsets_.begin(), mesh.vt_offsets_.end() - 1);
    for (Index t = 0; t < nt; ++t)
      for (Index v : triangles[t]) mesh.vt_list_[fill[v]++] = t;
  }

  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.boundary_edges_ = std::move(found_boundary);
  return mesh;
}

void validate(const TriMesh& mesh) {
  const auto tris = mesh.triangles();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.area(t) <= 0.0) throw DegenerateTriangle("triangle " + std::to_string(t) + " is not counterclockwise");
  }
  auto verts = mesh.vertices();
  auto bnd = mesh.boundary_edges();
  (void)build_mesh({verts.begin(), verts.end()}, {tris.begin(), tris.end()}, {bnd.begin(), bnd.end()});
}

std::vector<std::array<Index, 2>> TriMesh::edges() const {
  std::vector<std::array<Index, 2>> out;
  out.reserve(num_edges_);
  for (Index t = 0; t < num_triangles(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const Index nb = neighbors_[t][i];
      if (nb != kNoIndex && nb < t) continue;
      const Index a = triangles_[t][(i + 1) % 3];
      const Index b = triangles_[t][(i + 2) % 3];
      out.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double TriMesh::area(Index t) const {
  const auto& tri = triangles_[t];
  return 0.5 * orient2d(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (Index t = 0; t < num_triangles(); ++t) sum += area(t);
  return sum;
}

TriMesh structured_unit_square(int n) {
  if (n < 1) throw ValidationError("structured_unit_square needs n >= 1");
  const Index stride = n + 1;
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(stride) * stride);
  for (Index j = 0; j <= n; ++j)
    for (Index i = 0; i <= n; ++i) vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});

  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index v00 = j * stride + i, v10 = v00 + 1, v01 = v00 + stride, v11 = v01 + 1;
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  std::vector<BoundaryEdge> boundary;
  for (Index i = 0; i < n; ++i) boundary.push_back({{i, i + 1}, 1});
  for (Index j = 0; j < n; ++j) boundary.push_back({{j * stride + n, (j + 1) * stride + n}, 2});
  for (Index i = n; i > 0; --i) boundary.push_back({{n * stride + i, n * stride + i - 1}, 3});
  for (Index j = n; j > 0; --j) boundary.push_back({{j * stride, (j - 1) * stride}, 4});
  return build_mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

ElementGeometry element_geometry(Vec2 a, Vec2 b, Vec2 c) {
  ElementGeometry g;
  g.edges = {c - b, a - c, b - a};
  for (int i = 0; i < 3; ++i) g.edge_lengths[i] = norm(g.edges[i]);
  g.area = 0.5 * cross(g.edges[2], -g.edges[1]);
  return g;
}

ElementGeometry element_geometry(const TriMesh& mesh, Index t) {
  if (t < 0 || t >= mesh.num_triangles()) throw std::out_of_range("triangle index " + std::to_string(t));
  const auto& tri = mesh.triangle(t);
  return element_geometry(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
}

PointLocation locate_point(const TriMesh& mesh, Vec2 p, Index hint) {
  constexpr double kBaryEps = 1e-12;
  const Index nt = mesh.num_triangles();
  auto bary_of = [&](Index t) {
    const auto& tri = mesh.triangle(t);
    return barycentric(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]), p);
  };
  auto min_of = [](const std::array<double, 3>& l) { return std::min({l[0], l[1], l[2]}); };

  auto lowest_container = [&](Index t, std::array<double, 3> l) {
    PointLocation best{t, l};
    if (min_of(l) > kBaryEps) return best;
    // On an edge or vertex of t: all candidates are incident to t's vertices.
    for (Index v : mesh.triangle(t)) {
      for (Index s : mesh.vertex_triangles(v)) {
        if (s >= best.triangle) break;
        auto ls = bary_of(s);
        if (min_of(ls) >= -kBaryEps) best = {s, ls};
      }
    }
    return best;
  };

  Index t = (hint >= 0 && hint < nt) ? hint : 0;
  const int max_steps = 64 + 4 * static_cast<int>(std::sqrt(static_cast<double>(nt)));
  for (int step = 0; step < max_steps; ++step) {
    auto l = bary_of(t);
    int worst = 0;
    if (l[1] < l[worst]) worst = 1;
    if (l[2] < l[worst]) worst = 2;
    if (l[worst] >= -kBaryEps) return lowest_container(t, l);
    const Index next = mesh.neighbor(t, worst);
    if (next == kNoIndex) break;
    t = next;
  }

  for (Index s = 0; s < nt; ++s) {
    auto l = bary_of(s);
    if (min_of(l) >= -kBaryEps) return {s, l};
  }

  // Outside every triangle: accept round-off distance from the boundary.
  const double tol = kLocateTolerance * std::max(1.0, mesh.diameter());
  double best_d = std::numeric_limits<double>::max();
  PointLocation best;
  Vec2 best_q;
  for (Index s = 0; s < nt; ++s) {
    const auto& tri = mesh.triangle(s);
    for (int i = 0; i < 3; ++i) {
      const Vec2 q = closest_on_segment(mesh.vertex(tri[i]), mesh.vertex(tri[(i + 1) % 3]), p);
      const double d = norm(q - p);
      if (d < best_d) {
        best_d = d;
        best.triangle = s;
        best_q = q;
      }
    }
  }
  if (best_d > tol) {
    throw PointOutsideDomain("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                             ") lies outside the mesh");
  }
  const auto& tri = mesh.triangle(best.triangle);
  auto l = barycentric(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]), best_q);
  double sum = 0.0;
  for (double& x : l) {
    x = std::clamp(x, 0.0, 1.0);
    sum += x;
  }
  for (double& x : l) x /= sum;
  best.bary = l;
  return best;
}

double evaluate_p1(const TriMesh& mesh, std::span<const double> field, const PointLocation& loc) {
  const auto& tri = mesh.triangle(loc.triangle);
  return loc.bary[0] * field[tri[0]] + loc.bary[1] * field[tri[1]] + loc.bary[2] * field[tri[2]];
}

NodalScalarField transfer_field(std::span<const double> field, const TriMesh& old_mesh, const TriMesh& new_mesh) {
  if (static_cast<Index>(field.size()) != old_mesh.num_vertices()) {
    throw ValidationError("field length does not match the source mesh");
  }
  NodalScalarField out(new_mesh.num_vertices());
  Index hint = 0;
  for (Index v = 0; v < new_mesh.num_vertices(); ++v) {
    const auto loc = locate_point(old_mesh, new_mesh.vertex(v), hint);
    hint = loc.triangle;
    out[v] = evaluate_p1(old_mesh, field, loc);
  }
  return out;
}

}  // namespace anisomesh
