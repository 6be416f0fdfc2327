#include <algorithm>
#include <cmath>

#include "anisomesh/kernels.hpp"

namespace anisomesh::kernels::scalar {

namespace {

inline double hform(double a11, double a12, double a22, double ux, double uy, double vx, double vy) {
  return a11 * ux * vx + a12 * (ux * vy + uy * vx) + a22 * uy * vy;
}

}  // namespace

void element_h1_error_sq(const TriangleBatch& t, const TensorBatch& h, std::span<double> out) {
  const std::size_t n = t.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double l1x = t.x2[k] - t.x1[k], l1y = t.y2[k] - t.y1[k];
    const double l2x = t.x0[k] - t.x2[k], l2y = t.y0[k] - t.y2[k];
    const double l3x = t.x1[k] - t.x0[k], l3y = t.y1[k] - t.y0[k];
    const double twice_area = l2x * l3y - l2y * l3x;
    const double a = h.a11[k], b = h.a12[k], c = h.a22[k];
    const double q1 = hform(a, b, c, l2x, l2y, l3x, l3y);
    const double q2 = hform(a, b, c, l3x, l3y, l1x, l1y);
    const double q3 = hform(a, b, c, l1x, l1y, l2x, l2y);
    const double sum = q1 * q1 * (l1x * l1x + l1y * l1y) + q2 * q2 * (l2x * l2x + l2y * l2y) +
                       q3 * q3 * (l3x * l3x + l3y * l3y);
    out[k] = sum / (24.0 * twice_area);
  }
}

void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& ma,
                         const TensorBatch& mb, std::span<double> out) {
  const std::size_t n = ex.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ex[k], y = ey[k];
    const double qa = ma.a11[k] * x * x + 2.0 * ma.a12[k] * x * y + ma.a22[k] * y * y;
    const double qb = mb.a11[k] * x * x + 2.0 * mb.a12[k] * x * y + mb.a22[k] * y * y;
    out[k] = 0.5 * (std::sqrt(std::max(qa, 0.0)) + std::sqrt(std::max(qb, 0.0)));
  }
}

void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y) {
  const std::size_t rows = row_ptr.size() - 1;
  for (std::size_t r = 0; r < rows; ++r) {
    double acc = 0.0;
    for (Index k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += vals[k] * x[cols[k]];
    y[r] = acc;
  }
}

}  // namespace anisomesh::kernels::scalar
