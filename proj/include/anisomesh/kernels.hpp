#pragma once

#include <span>

#include "anisomesh/mesh.hpp"

// Batched arithmetic kernels with a scalar reference implementation and an
// AVX2/FMA variant chosen once at startup from the CPU feature bits. The
// environment variable ANISOMESH_SIMD=scalar forces the reference path.

namespace anisomesh::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
/// Best instruction set supported by this CPU and build.
Isa detected_isa();
Isa active_isa();
/// Selects the variant used by the dispatching entry points. Requests above
/// detected_isa() are clamped.
void set_active_isa(Isa isa);

/// Structure-of-arrays triangle batch.
struct TriangleBatch {
  std::span<const double> x0, y0, x1, y1, x2, y2;
  std::size_t size() const { return x0.size(); }
};

/// Structure-of-arrays batch of symmetric tensors.
struct TensorBatch {
  std::span<const double> a11, a12, a22;
  std::size_t size() const { return a11.size(); }
};

/// Exact squared H1 interpolation error of a quadratic with constant Hessian,
/// per triangle: sum_i (l_{i+1}.H l_{i+2})^2 |l_i|^2 / (48 |K|).
void element_h1_error_sq(const TriangleBatch& tris, const TensorBatch& hessian, std::span<double> out);

/// Endpoint-average metric length 0.5 (sqrt(e^T Ma e) + sqrt(e^T Mb e)).
void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& at_a,
                         const TensorBatch& at_b, std::span<double> out);

/// y = A x for A in compressed sparse row form.
void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y);

namespace scalar {
void element_h1_error_sq(const TriangleBatch& tris, const TensorBatch& hessian, std::span<double> out);
void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& at_a,
                         const TensorBatch& at_b, std::span<double> out);
void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y);
}  // namespace scalar

// Callable only when detected_isa() == Isa::avx2.
namespace avx2 {
void element_h1_error_sq(const TriangleBatch& tris, const TensorBatch& hessian, std::span<double> out);
void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& at_a,
                         const TensorBatch& at_b, std::span<double> out);
void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y);
}  // namespace avx2

}  // namespace anisomesh::kernels
