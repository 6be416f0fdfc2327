#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "anisomesh/fem.hpp"
#include "anisomesh/interp_error.hpp"
#include "anisomesh/kernels.hpp"

using namespace anisomesh;
namespace k = anisomesh::kernels;

namespace {

struct Columns {
  std::vector<double> x0, y0, x1, y1, x2, y2, a11, a12, a22, b11, b12, b22;
};

Columns random_columns(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Columns c;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng);
    c.x0.push_back(x);
    c.y0.push_back(y);
    c.x1.push_back(x + 0.5 + 0.4 * u(rng));
    c.y1.push_back(y + 0.1 * u(rng));
    c.x2.push_back(x + 0.1 * u(rng));
    c.y2.push_back(y + 0.5 + 0.4 * u(rng));
    c.a11.push_back(10 * u(rng));
    c.a12.push_back(10 * u(rng));
    c.a22.push_back(10 * u(rng));
    c.b11.push_back(2 + u(rng));
    c.b12.push_back(0.5 * u(rng));
    c.b22.push_back(2 + u(rng));
  }
  return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("isa selection") {
  const k::Isa best = k::detected_isa();
  k::set_active_isa(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  k::set_active_isa(k::Isa::avx2);
  CHECK(k::active_isa() == best);
  CHECK(std::string(k::isa_name(k::Isa::scalar)) == "scalar");
  MESSAGE("detected isa: " << k::isa_name(best));
}

TEST_CASE("element_h1_error_sq matches the closed form") {
  // Sizes that exercise both the vector body and the scalar tail.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 1001u}) {
    const Columns c = random_columns(n, 100 + n);
    const k::TriangleBatch tris{c.x0, c.y0, c.x1, c.y1, c.x2, c.y2};
    const k::TensorBatch h{c.a11, c.a12, c.a22};
    std::vector<double> ref(n), dispatched(n);
    k::scalar::element_h1_error_sq(tris, h, ref);
    k::element_h1_error_sq(tris, h, dispatched);
    for (std::size_t i = 0; i < n; ++i) {
      const auto g = element_geometry({c.x0[i], c.y0[i]}, {c.x1[i], c.y1[i]}, {c.x2[i], c.y2[i]});
      CHECK(rel(ref[i], h1_error_thm21({c.a11[i], c.a12[i], c.a22[i]}, g)) <= 1e-12);
      CHECK(rel(dispatched[i], ref[i]) <= 1e-13);
    }
    if (k::detected_isa() == k::Isa::avx2) {
      std::vector<double> simd(n);
      k::avx2::element_h1_error_sq(tris, h, simd);
      for (std::size_t i = 0; i < n; ++i) CHECK(rel(simd[i], ref[i]) <= 1e-13);
    }
  }
}

TEST_CASE("metric_edge_lengths scalar and avx2 agree") {
  for (std::size_t n : {1u, 5u, 8u, 513u}) {
    const Columns c = random_columns(n, 7 * n);
    const k::TensorBatch ma{c.b11, c.b12, c.b22};
    const k::TensorBatch mb{c.b22, c.b12, c.b11};
    std::vector<double> ref(n), dispatched(n);
    k::scalar::metric_edge_lengths(c.x0, c.y0, ma, mb, ref);
    k::metric_edge_lengths(c.x0, c.y0, ma, mb, dispatched);
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = metric_length({c.b11[i], c.b12[i], c.b22[i]}, {c.b22[i], c.b12[i], c.b11[i]},
                                          {c.x0[i], c.y0[i]});
      CHECK(rel(ref[i], expect) <= 1e-14);
      CHECK(rel(dispatched[i], ref[i]) <= 1e-13);
    }
    if (k::detected_isa() == k::Isa::avx2) {
      std::vector<double> simd(n);
      k::avx2::metric_edge_lengths(c.x0, c.y0, ma, mb, simd);
      for (std::size_t i = 0; i < n; ++i) CHECK(rel(simd[i], ref[i]) <= 1e-13);
    }
  }
}

TEST_CASE("csr_spmv scalar and avx2 agree on an assembled matrix") {
  ProblemSpec p;
  p.kappa = 0.01;
  p.convection = {1, 0.5};
  p.source = [](Vec2 x) { return x.x * x.y; };
  p.dirichlet = {{1, [](Vec2) { return 0.0; }}};
  p.neumann_tags = {2, 3, 4};
  const TriMesh m = structured_unit_square(13);
  const SparseSystem s = assemble(p, m);
  std::vector<double> x(s.n);
  for (Index i = 0; i < s.n; ++i) x[i] = std::sin(0.37 * i) + 1.5;
  std::vector<double> ref(s.n), dispatched(s.n);
  k::scalar::csr_spmv(s.row_ptr, s.cols, s.vals, x, ref);
  k::csr_spmv(s.row_ptr, s.cols, s.vals, x, dispatched);
  const double scale = [&] {
    double mx = 0;
    for (double v : s.vals) mx = std::max(mx, std::abs(v));
    return mx * 3.0;
  }();
  for (Index i = 0; i < s.n; ++i) {
    double naive = 0;
    for (Index j = s.row_ptr[i]; j < s.row_ptr[i + 1]; ++j) naive += s.vals[j] * x[s.cols[j]];
    CHECK(std::abs(ref[i] - naive) <= 1e-13 * scale);
    CHECK(std::abs(dispatched[i] - ref[i]) <= 1e-13 * scale);
  }
  if (k::detected_isa() == k::Isa::avx2) {
    std::vector<double> simd(s.n);
    k::avx2::csr_spmv(s.row_ptr, s.cols, s.vals, x, simd);
    for (Index i = 0; i < s.n; ++i) CHECK(std::abs(simd[i] - ref[i]) <= 1e-13 * scale);
  }
}
