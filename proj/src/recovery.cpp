#include "anisomesh/recovery.hpp"

#include <cmath>

#include "anisomesh/errors.hpp"
#include "anisomesh/quadrature.hpp"

namespace anisomesh {

namespace {

double frobenius2(const SymTensor2& d) { return d.a11 * d.a11 + 2.0 * d.a12 * d.a12 + d.a22 * d.a22; }

}  // namespace

NodalVectorField zz_gradient(std::span<const double> field, const TriMesh& mesh) {
  if (static_cast<Index>(field.size()) != mesh.num_vertices()) {
    throw ValidationError("field length does not match the mesh");
  }
  std::vector<Vec2> elem(mesh.num_triangles());
  std::vector<double> area(mesh.num_triangles());
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    elem[t] = element_gradient(mesh, field, t);
    area[t] = mesh.area(t);
  }
  NodalVectorField out(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    Vec2 sum{};
    double weight = 0.0;
    for (Index t : mesh.vertex_triangles(v)) {
      sum += area[t] * elem[t];
      weight += area[t];
    }
    out[v] = (1.0 / weight) * sum;
  }
  return out;
}

NodalTensorField recover_hessian(std::span<const double> field, const TriMesh& mesh) {
  const auto grad = zz_gradient(field, mesh);
  std::vector<double> gx(grad.size()), gy(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    gx[i] = grad[i].x;
    gy[i] = grad[i].y;
  }
  const auto dgx = zz_gradient(gx, mesh);
  const auto dgy = zz_gradient(gy, mesh);
  NodalTensorField h;
  h.role = TensorRole::hessian;
  h.values.resize(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    h.values[i] = {dgx[i].x, 0.5 * (dgx[i].y + dgy[i].x), dgy[i].y};
  }
  return h;
}

double h2_error(const NodalTensorField& recovered, const ProblemSpec& problem, const TriMesh& mesh) {
  if (!problem.exact_hessian) throw MissingExactSolution("problem has no exact Hessian");
  if (static_cast<Index>(recovered.size()) != mesh.num_vertices()) {
    throw ValidationError("Hessian field length does not match the mesh");
  }
  double sum = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Vec2 a = mesh.vertex(tri[0]), b = mesh.vertex(tri[1]), c = mesh.vertex(tri[2]);
    const SymTensor2 mean_rec = (1.0 / 3.0) * (recovered[tri[0]] + recovered[tri[1]] + recovered[tri[2]]);
    const double floor =
        kRoundoffFloor * mesh.area(t) * (frobenius2(problem.exact_hessian((1.0 / 3.0) * (a + b + c))) + frobenius2(mean_rec));
    const auto local = integrate_adaptive<1>(
        a, b, c, mesh.area(t),
        [&](Vec2 x, const Bary& lam) {
          const SymTensor2 hr = lam[0] * recovered[tri[0]] + lam[1] * recovered[tri[1]] + lam[2] * recovered[tri[2]];
          return std::array<double, 1>{frobenius2(problem.exact_hessian(x) - hr)};
        },
        1e-9, 10, floor);
    sum += local[0];
  }
  return std::sqrt(sum);
}

}  // namespace anisomesh
