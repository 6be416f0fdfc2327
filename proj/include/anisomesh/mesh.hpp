#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "anisomesh/geometry.hpp"

namespace anisomesh {

using Index = std::int32_t;
inline constexpr Index kNoIndex = -1;

using Triangle = std::array<Index, 3>;

struct BoundaryEdge {
  std::array<Index, 2> v;
  int tag = 0;
};

enum class VertexKind : std::uint8_t { interior, boundary, corner };

/// Area and edge vectors of one triangle. Edge i is opposite local vertex i:
/// l1 = v3 - v2, l2 = v1 - v3, l3 = v2 - v1, so the three edges sum to zero.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> edges{};
  std::array<double, 3> edge_lengths{};
};

/// Conforming, counterclockwise 2D triangulation. Instances are immutable and
/// only obtainable through build_mesh(), which validates every invariant.
class TriMesh {
 public:
  TriMesh() = default;

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const BoundaryEdge> boundary_edges() const { return boundary_edges_; }

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const { return num_edges_; }

  Vec2 vertex(Index v) const { return vertices_[v]; }
  const Triangle& triangle(Index t) const { return triangles_[t]; }
  VertexKind vertex_kind(Index v) const { return kinds_[v]; }
  bool on_boundary(Index v) const { return kinds_[v] != VertexKind::interior; }

  /// Bitmask of the boundary tags of the edges incident to v (bit k = tag k).
  std::uint32_t vertex_tags(Index v) const { return tag_masks_[v]; }

  /// Triangle across the edge opposite local vertex i of t, or kNoIndex.
  Index neighbor(Index t, int i) const { return neighbors_[t][i]; }

  /// Triangles incident to vertex v, ascending.
  std::span<const Index> vertex_triangles(Index v) const {
    return {vt_list_.data() + vt_offsets_[v], vt_list_.data() + vt_offsets_[v + 1]};
  }

  /// Unique undirected edges (smaller index first), sorted.
  std::vector<std::array<Index, 2>> edges() const;

  double area(Index t) const;
  double total_area() const;
  /// Diagonal of the bounding box.
  double diameter() const { return diameter_; }

 private:
  friend TriMesh build_mesh(std::vector<Vec2>, std::vector<Triangle>, std::vector<BoundaryEdge>);

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<VertexKind> kinds_;
  std::vector<std::uint32_t> tag_masks_;
  std::vector<std::array<Index, 3>> neighbors_;
  std::vector<Index> vt_offsets_;
  std::vector<Index> vt_list_;
  Index num_edges_ = 0;
  double diameter_ = 0.0;
};

/// One value per vertex of a mesh.
using NodalScalarField = std::vector<double>;

/// Validates and assembles a mesh. Clockwise triangles are reoriented.
/// If boundary_edges is empty, every boundary edge receives tag 1.
/// Boundary tags must lie in [1, 31].
TriMesh build_mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles,
                   std::vector<BoundaryEdge> boundary_edges);

/// Re-checks every TriMesh invariant; throws the matching ValidationError.
void validate(const TriMesh& mesh);

/// Unit square with n x n cells, each split along the (0,0)-(1,1) diagonal
/// direction. Boundary tags: 1 bottom, 2 right, 3 top, 4 left.
TriMesh structured_unit_square(int n);

ElementGeometry element_geometry(const TriMesh& mesh, Index t);
ElementGeometry element_geometry(Vec2 a, Vec2 b, Vec2 c);

struct PointLocation {
  Index triangle = kNoIndex;
  std::array<double, 3> bary{};
};

inline constexpr double kLocateTolerance = 1e-10;

/// Finds the triangle containing p by a barycentric walk from hint, falling
/// back to a full scan. Among several containing triangles the lowest index
/// wins. Points outside by at most kLocateTolerance (relative to the domain
/// diameter when it exceeds 1) are projected onto the nearest triangle.
PointLocation locate_point(const TriMesh& mesh, Vec2 p, Index hint = 0);

/// Evaluates the P1 interpolant of field at p.
double evaluate_p1(const TriMesh& mesh, std::span<const double> field, const PointLocation& loc);

/// P1 interpolation of field (on old_mesh) at the vertices of new_mesh.
NodalScalarField transfer_field(std::span<const double> field, const TriMesh& old_mesh,
                                const TriMesh& new_mesh);

}  // namespace anisomesh
