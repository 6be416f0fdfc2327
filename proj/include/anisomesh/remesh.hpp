#pragma once

#include <cmath>
#include <vector>

#include "anisomesh/mesh.hpp"
#include "anisomesh/metric.hpp"

namespace anisomesh {

/// Knobs of the local remesher and of the adaptive loop that drives it.
struct AdaptConfig {
  int n_target = 1000;
  int iterations = 10;
  double split_threshold = std::sqrt(2.0);
  double collapse_threshold = 1.0 / std::sqrt(2.0);
  int max_local_passes = 20;
  int smoothing_passes = 2;
  MetricParams metric;
  /// Run full mesh validation after every pass of local operations.
  bool validate_each_step = false;
};

/// Throws ValidationError when the thresholds do not bracket 1 or counts are
/// out of range.
void check_config(const AdaptConfig& config);

/// Per-operation statistics of one adapt_mesh call.
struct RemeshStats {
  int sweeps = 0;
  int splits = 0;
  int collapses = 0;
  int flips = 0;
  int moves = 0;
  /// Topological changes per sweep (splits + collapses + flips).
  std::vector<int> changes_per_sweep;
  /// Fraction of edges with metric length inside the band after each sweep.
  std::vector<double> unit_fraction_per_sweep;
};

// The single-operation entry points take a mesh plus a metric field defined on
// that same mesh. New vertices get their metric by interpolation in it.

/// Bisects every edge with metric length above threshold at its Euclidean
/// midpoint, using the 1/2/3-edge refinement templates.
TriMesh split_long_edges(const TriMesh& mesh, const NodalTensorField& metric, double threshold);

/// Collapses edges shorter than threshold onto an endpoint. Corners are never
/// removed, boundary vertices only slide along their own side, and collapses
/// that invert or badly degrade a triangle are rejected.
TriMesh collapse_short_edges(const TriMesh& mesh, const NodalTensorField& metric, double threshold,
                             double split_threshold = std::sqrt(2.0));

/// Flips interior edges failing the in-circle test under the mean metric of
/// the four vertices involved. Stops after max_passes sweeps.
TriMesh flip_edges(const TriMesh& mesh, const NodalTensorField& metric, int max_passes = 20);

/// Moves vertices toward the metric-length-weighted mean of their neighbors.
TriMesh smooth_vertices(const TriMesh& mesh, const NodalTensorField& metric, int passes);

/// Repeats split/collapse/flip/smooth sweeps until fewer than 1% of edges
/// change or max_local_passes is reached.
TriMesh adapt_mesh(const TriMesh& mesh, const NodalTensorField& metric, const AdaptConfig& config,
                   RemeshStats* stats = nullptr);

/// 4 sqrt(3) |K|_M / sum_i L_M(l_i)^2 with the mean vertex metric; 1 for an
/// equilateral triangle in the metric.
double metric_quality(Vec2 a, Vec2 b, Vec2 c, const SymTensor2& ma, const SymTensor2& mb, const SymTensor2& mc);

/// Metric length of every edge of mesh (in TriMesh::edges() order), with the
/// tensors at the vertices interpolated from a metric on background.
std::vector<double> metric_edge_lengths(const TriMesh& mesh, const TriMesh& background,
                                        const NodalTensorField& metric);

/// Metric field on background sampled at the vertices of mesh.
NodalTensorField sample_metric(const TriMesh& mesh, const TriMesh& background, const NodalTensorField& metric);

/// Metric volume of a unit equilateral triangle, sqrt(3)/4. A unit mesh in a
/// metric with total volume V has about V / kUnitTriangleVolume triangles.
inline constexpr double kUnitTriangleVolume = 0.43301270189221932338;

}  // namespace anisomesh
