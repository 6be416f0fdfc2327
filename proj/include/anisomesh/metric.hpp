#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "anisomesh/mesh.hpp"
#include "anisomesh/tensor.hpp"

namespace anisomesh {

enum class TensorRole { hessian, monitor, metric };

/// One symmetric tensor per mesh vertex.
struct NodalTensorField {
  std::vector<SymTensor2> values;
  TensorRole role = TensorRole::hessian;

  std::size_t size() const { return values.size(); }
  const SymTensor2& operator[](std::size_t i) const { return values[i]; }
  SymTensor2& operator[](std::size_t i) { return values[i]; }
};

enum class MetricKind { new_h1, new_l2, modified_hessian, huang_h1, huang_l2 };

std::string_view metric_kind_name(MetricKind kind);
/// Accepts the CLI spellings: new-h1, new-l2, mod-hessian, huang-h1, huang-l2.
std::optional<MetricKind> parse_metric_kind(std::string_view name);

struct MetricParams {
  int n_target = 1000;
  /// Flooring for the L2-type metrics; unset means default_flooring().
  std::optional<double> alpha0;
  /// Flooring for the H1-type metrics; unset means default_flooring().
  std::optional<double> alpha1;
  MetricKind kind = MetricKind::new_h1;
};

/// max(1e-10, 1e-6 * largest spectral radius of the field).
double default_flooring(const NodalTensorField& hessian);

/// M1 = [tr(Hf)/sqrt(det Hf)]^(1/2) Hf with Hf = alpha1 I + |H|.
NodalTensorField monitor_h1(const NodalTensorField& hessian, double alpha1);
/// M0 = det(Hf)^(-1/6) Hf with Hf = alpha0 I + |H|.
NodalTensorField monitor_l2(const NodalTensorField& hessian, double alpha0);
/// M = alpha1 I + |H|.
NodalTensorField monitor_modified_hessian(const NodalTensorField& hessian, double alpha1);

enum class ErrorNorm { l2, h1 };
/// Huang's tensors up to their global constant: with G = I + |H|/alpha,
/// h1 -> G and l2 -> det(G)^(-1/6) G.
NodalTensorField monitor_huang(const NodalTensorField& hessian, double alpha, ErrorNorm norm);

/// Monitor of the requested kind, resolving unset flooring parameters.
NodalTensorField build_monitor(const NodalTensorField& hessian, const MetricParams& params);

/// Scales the monitor by N / sigma with sigma = integral of sqrt(det M),
/// integrated with the per-element vertex-mean rule. Throws ZeroSigma.
NodalTensorField normalize_metric(const NodalTensorField& monitor, const TriMesh& mesh, double n_target);

/// Integral of sqrt(det M) over the mesh with the vertex-mean rule.
double metric_volume(const NodalTensorField& field, const TriMesh& mesh);

/// Endpoint-average metric length of the segment from a to b.
inline double metric_length(const SymTensor2& at_a, const SymTensor2& at_b, Vec2 e) {
  return 0.5 * (std::sqrt(std::max(at_a.form(e), 0.0)) + std::sqrt(std::max(at_b.form(e), 0.0)));
}

/// Metric length of [a, b] with end tensors interpolated from a field on mesh.
double metric_edge_length(const TriMesh& mesh, const NodalTensorField& metric, Vec2 a, Vec2 b);

/// Barycentric interpolation with an eigenvalue clamp to >= 1e-12 times the
/// local spectral radius.
SymTensor2 interpolate_metric(const TriMesh& mesh, const NodalTensorField& metric, const PointLocation& loc);
SymTensor2 interpolate_metric(const TriMesh& mesh, const NodalTensorField& metric, Vec2 p, Index hint = 0);

}  // namespace anisomesh
