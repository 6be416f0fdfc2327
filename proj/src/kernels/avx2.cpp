// Compiled with -mavx2 -mfma; entered only after a runtime CPU check.

#include "anisomesh/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace anisomesh::kernels::avx2 {

namespace {

inline __m256d load(std::span<const double> s, std::size_t k) { return _mm256_loadu_pd(s.data() + k); }

// a11 ux vx + a12 (ux vy + uy vx) + a22 uy vy
inline __m256d hform(__m256d a, __m256d b, __m256d c, __m256d ux, __m256d uy, __m256d vx, __m256d vy) {
  __m256d r = _mm256_mul_pd(_mm256_mul_pd(a, ux), vx);
  r = _mm256_fmadd_pd(b, _mm256_fmadd_pd(ux, vy, _mm256_mul_pd(uy, vx)), r);
  return _mm256_fmadd_pd(_mm256_mul_pd(c, uy), vy, r);
}

inline __m256d len2(__m256d x, __m256d y) { return _mm256_fmadd_pd(x, x, _mm256_mul_pd(y, y)); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void element_h1_error_sq(const TriangleBatch& t, const TensorBatch& h, std::span<double> out) {
  const std::size_t n = t.size();
  const __m256d k24 = _mm256_set1_pd(24.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x0 = load(t.x0, k), y0 = load(t.y0, k);
    const __m256d x1 = load(t.x1, k), y1 = load(t.y1, k);
    const __m256d x2 = load(t.x2, k), y2 = load(t.y2, k);
    const __m256d l1x = _mm256_sub_pd(x2, x1), l1y = _mm256_sub_pd(y2, y1);
    const __m256d l2x = _mm256_sub_pd(x0, x2), l2y = _mm256_sub_pd(y0, y2);
    const __m256d l3x = _mm256_sub_pd(x1, x0), l3y = _mm256_sub_pd(y1, y0);
    const __m256d twice_area = _mm256_fmsub_pd(l2x, l3y, _mm256_mul_pd(l2y, l3x));
    const __m256d a = load(h.a11, k), b = load(h.a12, k), c = load(h.a22, k);
    const __m256d q1 = hform(a, b, c, l2x, l2y, l3x, l3y);
    const __m256d q2 = hform(a, b, c, l3x, l3y, l1x, l1y);
    const __m256d q3 = hform(a, b, c, l1x, l1y, l2x, l2y);
    __m256d sum = _mm256_mul_pd(_mm256_mul_pd(q1, q1), len2(l1x, l1y));
    sum = _mm256_fmadd_pd(_mm256_mul_pd(q2, q2), len2(l2x, l2y), sum);
    sum = _mm256_fmadd_pd(_mm256_mul_pd(q3, q3), len2(l3x, l3y), sum);
    _mm256_storeu_pd(out.data() + k, _mm256_div_pd(sum, _mm256_mul_pd(k24, twice_area)));
  }
  if (k < n) {
    auto tail = [&](std::span<const double> s) { return s.subspan(k); };
    scalar::element_h1_error_sq({tail(t.x0), tail(t.y0), tail(t.x1), tail(t.y1), tail(t.x2), tail(t.y2)},
                                {tail(h.a11), tail(h.a12), tail(h.a22)}, out.subspan(k));
  }
}

void metric_edge_lengths(std::span<const double> ex, std::span<const double> ey, const TensorBatch& ma,
                         const TensorBatch& mb, std::span<double> out) {
  const std::size_t n = ex.size();
  const __m256d two = _mm256_set1_pd(2.0), half = _mm256_set1_pd(0.5), zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d x = load(ex, k), y = load(ey, k);
    const __m256d xx = _mm256_mul_pd(x, x), xy2 = _mm256_mul_pd(two, _mm256_mul_pd(x, y)), yy = _mm256_mul_pd(y, y);
    __m256d qa = _mm256_mul_pd(load(ma.a11, k), xx);
    qa = _mm256_fmadd_pd(load(ma.a12, k), xy2, qa);
    qa = _mm256_fmadd_pd(load(ma.a22, k), yy, qa);
    __m256d qb = _mm256_mul_pd(load(mb.a11, k), xx);
    qb = _mm256_fmadd_pd(load(mb.a12, k), xy2, qb);
    qb = _mm256_fmadd_pd(load(mb.a22, k), yy, qb);
    const __m256d la = _mm256_sqrt_pd(_mm256_max_pd(qa, zero));
    const __m256d lb = _mm256_sqrt_pd(_mm256_max_pd(qb, zero));
    _mm256_storeu_pd(out.data() + k, _mm256_mul_pd(half, _mm256_add_pd(la, lb)));
  }
  if (k < n) {
    auto tail = [&](std::span<const double> s) { return s.subspan(k); };
    scalar::metric_edge_lengths(tail(ex), tail(ey), {tail(ma.a11), tail(ma.a12), tail(ma.a22)},
                                {tail(mb.a11), tail(mb.a12), tail(mb.a22)}, out.subspan(k));
  }
}

void csr_spmv(std::span<const Index> row_ptr, std::span<const Index> cols, std::span<const double> vals,
              std::span<const double> x, std::span<double> y) {
  static_assert(sizeof(Index) == 4, "gather uses 32-bit column indices");
  const std::size_t rows = row_ptr.size() - 1;
  for (std::size_t r = 0; r < rows; ++r) {
    Index k = row_ptr[r];
    const Index end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols.data() + k));
      const __m256d xv = _mm256_i32gather_pd(x.data(), idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals.data() + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
}

}  // namespace anisomesh::kernels::avx2

#else

#include <stdexcept>

namespace anisomesh::kernels::avx2 {

void element_h1_error_sq(const TriangleBatch&, const TensorBatch&, std::span<double>) {
  throw std::logic_error("AVX2 kernels not built");
}
void metric_edge_lengths(std::span<const double>, std::span<const double>, const TensorBatch&, const TensorBatch&,
                         std::span<double>) {
  throw std::logic_error("AVX2 kernels not built");
}
void csr_spmv(std::span<const Index>, std::span<const Index>, std::span<const double>, std::span<const double>,
              std::span<double>) {
  throw std::logic_error("AVX2 kernels not built");
}

}  // namespace anisomesh::kernels::avx2

#endif
