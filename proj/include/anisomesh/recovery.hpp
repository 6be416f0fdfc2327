#pragma once

#include <span>
#include <vector>

#include "anisomesh/fem.hpp"
#include "anisomesh/mesh.hpp"
#include "anisomesh/metric.hpp"

namespace anisomesh {

using NodalVectorField = std::vector<Vec2>;

/// Nodal gradient: area-weighted mean of the P1 gradients of the triangles
/// around each vertex. Boundary vertices use their one-sided patch.
NodalVectorField zz_gradient(std::span<const double> field, const TriMesh& mesh);

/// Applies zz_gradient to the field and then to each gradient component;
/// the mixed derivatives are averaged.
NodalTensorField recover_hessian(std::span<const double> field, const TriMesh& mesh);

/// sqrt(sum_K int_K ||H_exact - H_rec||_F^2), H_rec linear per element.
/// Throws MissingExactSolution when the problem has no exact Hessian.
double h2_error(const NodalTensorField& recovered, const ProblemSpec& problem, const TriMesh& mesh);

}  // namespace anisomesh
