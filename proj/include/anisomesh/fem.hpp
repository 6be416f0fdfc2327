#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "anisomesh/mesh.hpp"
#include "anisomesh/tensor.hpp"

namespace anisomesh {

using ScalarFunction = std::function<double(Vec2)>;
using VectorFunction = std::function<Vec2(Vec2)>;
using TensorFunction = std::function<SymTensor2(Vec2)>;

struct DirichletCondition {
  int tag = 0;
  ScalarFunction value;
};

/// -kappa lap u + b.grad u = f with Dirichlet data on some boundary tags and
/// homogeneous Neumann conditions on the rest.
struct ProblemSpec {
  double kappa = 1.0;
  Vec2 convection{};
  ScalarFunction source;
  std::vector<DirichletCondition> dirichlet;
  std::vector<int> neumann_tags;

  ScalarFunction exact_solution;
  VectorFunction exact_gradient;
  TensorFunction exact_hessian;
};

/// Square system in compressed sparse row form, columns sorted per row.
struct SparseSystem {
  Index n = 0;
  std::vector<Index> row_ptr;
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> rhs;

  double at(Index r, Index c) const;
  std::vector<double> multiply(std::span<const double> x) const;
};

struct AssemblyOptions {
  bool apply_dirichlet = true;
};

/// Checks kappa > 0 and that every boundary tag of mesh has exactly one condition.
void check_problem(const ProblemSpec& problem, const TriMesh& mesh);

/// Vertices carrying a Dirichlet condition, with their values (NaN elsewhere).
std::vector<double> dirichlet_values(const ProblemSpec& problem, const TriMesh& mesh);

/// P1 Galerkin system. Load integrated with adaptive degree-6 quadrature. Dirichlet
/// rows become identity rows and their columns move to the right-hand side.
SparseSystem assemble(const ProblemSpec& problem, const TriMesh& mesh, AssemblyOptions options = {});

/// Sparse LU; throws SolverBreakdown unless ||Ax - b|| <= 1e-10 ||b||.
std::vector<double> solve_system(const SparseSystem& system);

NodalScalarField fem_solve(const ProblemSpec& problem, const TriMesh& mesh);

/// Constant gradient of the P1 function with nodal values on triangle t.
Vec2 element_gradient(const TriMesh& mesh, std::span<const double> values, Index t);

/// |u - u_h|_{H1} with the degree-6 rule per triangle. Throws
/// MissingExactSolution when the problem has no exact gradient.
double true_h1_error(std::span<const double> solution, const ProblemSpec& problem, const TriMesh& mesh);

}  // namespace anisomesh
