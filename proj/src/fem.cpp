#include "anisomesh/fem.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "anisomesh/errors.hpp"
#include "anisomesh/kernels.hpp"
#include "anisomesh/quadrature.hpp"

namespace anisomesh {

namespace {

std::array<Vec2, 3> basis_gradients(Vec2 a, Vec2 b, Vec2 c) {
  const std::array<Vec2, 3> p{a, b, c};
  const double twice_area = orient2d(a, b, c);
  std::array<Vec2, 3> g{};
  for (int i = 0; i < 3; ++i) {
    const Vec2 e = p[(i + 2) % 3] - p[(i + 1) % 3];
    g[i] = Vec2{-e.y, e.x} * (1.0 / twice_area);
  }
  return g;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double SparseSystem::at(Index r, Index c) const {
  auto first = cols.begin() + row_ptr[r], last = cols.begin() + row_ptr[r + 1];
  auto it = std::lower_bound(first, last, c);
  return (it != last && *it == c) ? vals[it - cols.begin()] : 0.0;
}

std::vector<double> SparseSystem::multiply(std::span<const double> x) const {
  std::vector<double> y(n);
  kernels::csr_spmv(row_ptr, cols, vals, x, y);
  return y;
}

void check_problem(const ProblemSpec& problem, const TriMesh& mesh) {
  if (!(problem.kappa > 0.0)) throw ValidationError("diffusion coefficient must be positive");
  std::uint32_t mesh_tags = 0;
  for (const auto& be : mesh.boundary_edges()) mesh_tags |= 1u << be.tag;
  for (int tag = 1; tag < 32; ++tag) {
    if (!(mesh_tags & (1u << tag))) continue;
    int count = 0;
    for (const auto& d : problem.dirichlet) count += d.tag == tag;
    for (int n : problem.neumann_tags) count += n == tag;
    if (count != 1) {
      throw ValidationError("boundary tag " + std::to_string(tag) + " has " + std::to_string(count) +
                            " boundary conditions");
    }
  }
}

std::vector<double> dirichlet_values(const ProblemSpec& problem, const TriMesh& mesh) {
  std::vector<double> g(mesh.num_vertices(), std::numeric_limits<double>::quiet_NaN());
  std::vector<int> tag_of(mesh.num_vertices(), 1 << 30);
  for (const auto& be : mesh.boundary_edges()) {
    for (const auto& d : problem.dirichlet) {
      if (d.tag != be.tag) continue;
      for (Index v : be.v) {
        // A vertex shared by two Dirichlet sides takes the lower tag's data.
        if (be.tag < tag_of[v]) {
          tag_of[v] = be.tag;
          g[v] = d.value(mesh.vertex(v));
        }
      }
    }
  }
  return g;
}

SparseSystem assemble(const ProblemSpec& problem, const TriMesh& mesh, AssemblyOptions options) {
  check_problem(problem, mesh);
  const Index n = mesh.num_vertices();
  std::vector<Eigen::Triplet<double, Index>> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.num_triangles()));
  std::vector<double> rhs(n, 0.0);

  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    const double area = mesh.area(t);
    const auto grad = basis_gradients(a, b, c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        // int (b.grad phi_j) phi_i = (b.grad phi_j) |K| / 3
        const double k = problem.kappa * dot(grad[i], grad[j]) * area + dot(problem.convection, grad[j]) * area / 3.0;
        triplets.emplace_back(tri[i], tri[j], k);
      }
    }
    if (problem.source) {
      const auto load = integrate_adaptive<3>(a, b, c, area, [&](Vec2 x, const Bary& lam) {
        const double fx = problem.source(x);
        return std::array<double, 3>{fx * lam[0], fx * lam[1], fx * lam[2]};
      });
      for (int i = 0; i < 3; ++i) rhs[tri[i]] += load[i];
    }
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor, Index> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());

  if (options.apply_dirichlet) {
    const auto g = dirichlet_values(problem, mesh);
    for (Index r = 0; r < n; ++r) {
      for (decltype(a)::InnerIterator it(a, r); it; ++it) {
        const Index c = it.col();
        if (std::isnan(g[c])) continue;
        if (std::isnan(g[r])) rhs[r] -= it.value() * g[c];
        it.valueRef() = (r == c) ? 1.0 : 0.0;
      }
      if (!std::isnan(g[r])) {
        for (decltype(a)::InnerIterator it(a, r); it; ++it) it.valueRef() = (it.col() == r) ? 1.0 : 0.0;
        rhs[r] = g[r];
      }
    }
    a.prune(0.0);
  }
  a.makeCompressed();

  SparseSystem sys;
  sys.n = n;
  sys.row_ptr.assign(a.outerIndexPtr(), a.outerIndexPtr() + n + 1);
  sys.cols.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
  sys.vals.assign(a.valuePtr(), a.valuePtr() + a.nonZeros());
  sys.rhs = std::move(rhs);
  return sys;
}

std::vector<double> solve_system(const SparseSystem& system) {
  const Index n = system.n;
  const double bnorm = norm2(system.rhs);
  if (bnorm == 0.0) return std::vector<double>(n, 0.0);

  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, Index>> rowmajor(
      n, n, static_cast<Index>(system.vals.size()), system.row_ptr.data(), system.cols.data(), system.vals.data());
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> a = rowmajor;
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, Index>, Eigen::COLAMDOrdering<Index>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolverBreakdown("sparse LU factorization failed: " + lu.lastErrorMessage(), bnorm);

  Eigen::Map<const Eigen::VectorXd> b(system.rhs.data(), n);
  Eigen::VectorXd x = lu.solve(b);
  std::vector<double> xs(x.data(), x.data() + n);

  auto residual = [&](const std::vector<double>& sol) {
    auto ax = system.multiply(sol);
    for (Index i = 0; i < n; ++i) ax[i] = system.rhs[i] - ax[i];
    return ax;
  };
  auto r = residual(xs);
  double rnorm = norm2(r);
  for (int refine = 0; refine < 3 && !(rnorm <= 1e-10 * bnorm); ++refine) {
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    Eigen::VectorXd dx = lu.solve(rv);
    for (Index i = 0; i < n; ++i) xs[i] += dx[i];
    r = residual(xs);
    rnorm = norm2(r);
  }
  if (!(rnorm <= 1e-10 * bnorm)) {
    throw SolverBreakdown("residual " + std::to_string(rnorm / bnorm) + " above tolerance", rnorm);
  }
  return xs;
}

NodalScalarField fem_solve(const ProblemSpec& problem, const TriMesh& mesh) {
  auto x = solve_system(assemble(problem, mesh));
  // Dirichlet rows are identity rows; pin the data exactly.
  const auto g = dirichlet_values(problem, mesh);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (!std::isnan(g[v])) x[v] = g[v];
  }
  return x;
}

Vec2 element_gradient(const TriMesh& mesh, std::span<const double> values, Index t) {
  const auto& tri = mesh.triangle(t);
  const auto g = basis_gradients(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
  return values[tri[0]] * g[0] + values[tri[1]] * g[1] + values[tri[2]] * g[2];
}

double true_h1_error(std::span<const double> solution, const ProblemSpec& problem, const TriMesh& mesh) {
  if (!problem.exact_gradient) throw MissingExactSolution("problem has no exact gradient");
  double sum = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 gh = element_gradient(mesh, solution, t);
    const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    // Where u_h matches u to rounding, the integrand is pure noise and only
    // an absolute floor stops the refinement.
    const Vec2 centroid = (1.0 / 3.0) * (a + b + c);
    const double floor = kRoundoffFloor * mesh.area(t) * (norm2(problem.exact_gradient(centroid)) + norm2(gh));
    const auto local = integrate_adaptive<1>(
        a, b, c, mesh.area(t),
        [&](Vec2 x, const Bary&) { return std::array<double, 1>{anisomesh::norm2(problem.exact_gradient(x) - gh)}; },
        1e-9, 10, floor);
    sum += local[0];
  }
  return std::sqrt(sum);
}

}  // namespace anisomesh
