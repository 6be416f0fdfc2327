#include <atomic>
#include <cstdlib>
#include <cstring>

#include "anisomesh/kernels.hpp"

namespace anisomesh::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(ANISOMESH_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("ANISOMESH_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::scalar;
  }
  return best;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) isa = Isa::scalar;
  active().store(isa, std::memory_order_relaxed);
}

void element_h1_error_sq(const TriangleBatch& tris, const TensorBatch& hessian, std::span<double> out) {
  if (active_isa() == Isa::avx2) return avx2::element_h1_error_sq(tris, hessian, out);
  scalar::element_h1_error_sq(tris, hessian, out);
}

void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& at_a,
                         const TensorBatch& at_b, std::span<double> out) {
  if (active_isa() == Isa::avx2) return avx2::metric_edge_lengths(ex, ey, at_a, at_b, out);
  scalar::metric_edge_lengths(ex, ey, at_a, at_b, out);
}

void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y) {
  if (active_isa() == Isa::avx2) return avx2::csr_spmv(row_ptr, cols, vals, x, y);
  scalar::csr_spmv(row_ptr, cols, vals, x, y);
}

}  // namespace anisomesh::kernels
