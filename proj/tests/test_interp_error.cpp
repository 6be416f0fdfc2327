#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "anisomesh/fem.hpp"
#include "anisomesh/interp_error.hpp"

using namespace anisomesh;

namespace {

const Vec2 kA{0, 0}, kB{1, 0}, kC{0, 1};
const SymTensor2 k2I = SymTensor2::identity(2);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fixed values on the unit right triangle") {
  const auto g = element_geometry(kA, kB, kC);
  CHECK(rel(h1_error_thm21(k2I, g), 1.0 / 3.0) <= 1e-14);
  CHECK(rel(h1_error_bank_smith(k2I, g), 1.0 / 3.0) <= 1e-14);
  CHECK(rel(l2_error_nadler(k2I, g), 11.0 / 180.0) <= 1e-14);
  CHECK(rel(oracle_interp_error(k2I, kA, kB, kC, ErrorNorm::h1), 1.0 / 3.0) <= 1e-14);
  CHECK(rel(oracle_interp_error(k2I, kA, kB, kC, ErrorNorm::l2), 11.0 / 180.0) <= 1e-14);

  CHECK(h1_error_thm21({}, g) == 0.0);
  CHECK(h1_error_bank_smith({}, g) == 0.0);
  CHECK(l2_error_nadler({}, g) == 0.0);
  CHECK(oracle_interp_error({}, kA, kB, kC, ErrorNorm::h1) == 0.0);
  CHECK(oracle_interp_error({}, kA, kB, kC, ErrorNorm::l2) == 0.0);
}

TEST_CASE("unit equilateral triangle with H = I") {
  const Vec2 c{0.5, std::sqrt(3.0) / 2};
  const auto g = element_geometry(kA, kB, c);
  CHECK(rel(h1_error_thm21(SymTensor2::identity(), g), 1.0 / (16 * std::sqrt(3.0))) <= 1e-14);
  CHECK(rel(h1_error_bank_smith(SymTensor2::identity(), g), 1.0 / (16 * std::sqrt(3.0))) <= 1e-14);
  CHECK(rel(l2_error_nadler(SymTensor2::identity(), g),
            oracle_interp_error(SymTensor2::identity(), kA, kB, c, ErrorNorm::l2)) <= 1e-13);
}

TEST_CASE("closed forms agree with each other and the oracle") {
  const auto d = check_formulas(2000, 42);
  CHECK(d.trials == 2000);
  CHECK(d.thm21_vs_bank_smith <= 1e-12);
  CHECK(d.thm21_vs_oracle <= 1e-11);
  CHECK(d.bank_smith_vs_oracle <= 1e-11);
  CHECK(d.nadler_vs_oracle <= 1e-11);
  CHECK(d.worst() <= 1e-11);
}

TEST_CASE("errors transform correctly under scaling and rigid motion") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const SymTensor2 h{u(rng) * 10, u(rng) * 10, u(rng) * 10};
    const Vec2 a{u(rng), u(rng)};
    const Vec2 b = a + Vec2{1 + 0.3 * u(rng), 0.2 * u(rng)};
    const Vec2 c = a + Vec2{0.2 * u(rng), 1 + 0.3 * u(rng)};
    const auto g = element_geometry(a, b, c);
    const double e1 = h1_error_thm21(h, g), e0 = l2_error_nadler(h, g);

    // Scaling the triangle by s multiplies the H1 error squared by s^4 and the L2 one by s^6.
    const double s = 3.0;
    const auto gs = element_geometry(s * a, s * b, s * c);
    CHECK(rel(h1_error_thm21(h, gs), std::pow(s, 4) * e1) <= 1e-12);
    CHECK(rel(l2_error_nadler(h, gs), std::pow(s, 6) * e0) <= 1e-12);

    // Rotating the triangle and the Hessian together leaves both unchanged.
    const double th = u(rng) * 3;
    auto rot = [&](Vec2 p) { return Vec2{std::cos(th) * p.x - std::sin(th) * p.y, std::sin(th) * p.x + std::cos(th) * p.y}; };
    const auto gr = element_geometry(rot(a) + Vec2{5, -2}, rot(b) + Vec2{5, -2}, rot(c) + Vec2{5, -2});
    const SymTensor2 hr = rotate(h, th);
    if (e1 > 1e-8) CHECK(rel(h1_error_thm21(hr, gr), e1) <= 1e-10);
    if (e0 > 1e-8) CHECK(rel(l2_error_nadler(hr, gr), e0) <= 1e-10);
  }
}

TEST_CASE("eta_global examples") {
  const TriMesh one = build_mesh({kA, kB, kC}, {{0, 1, 2}}, {});
  NodalTensorField h{std::vector<SymTensor2>(3, k2I), TensorRole::hessian};
  const auto r = eta_global(h, one);
  CHECK(r.eta == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  REQUIRE(r.per_element.size() == 1);
  CHECK(r.per_element[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const TriMesh m = structured_unit_square(5);
  const auto z = eta_global({std::vector<SymTensor2>(m.num_vertices()), TensorRole::hessian}, m);
  CHECK(z.eta == 0.0);
  CHECK(z.per_element.size() == static_cast<std::size_t>(m.num_triangles()));
}

TEST_CASE("eta equals the true H1 interpolation error for quadratics") {
  const QuadraticFunction q{{3, -1.5, 0.5}, {0.2, -1}, 4};
  const TriMesh m = structured_unit_square(20);
  NodalTensorField h{std::vector<SymTensor2>(m.num_vertices(), q.hessian), TensorRole::hessian};
  ProblemSpec p;
  p.exact_gradient = [&](Vec2 x) { return q.gradient(x); };
  std::vector<double> interp(m.num_vertices());
  for (Index v = 0; v < m.num_vertices(); ++v) interp[v] = q.value(m.vertex(v));
  CHECK(rel(eta_global(h, m).eta, true_h1_error(interp, p, m)) <= 1e-8);
}

TEST_CASE("coefficient_of_variation") {
  CHECK(coefficient_of_variation({2, 2, 2}) == 0.0);
  CHECK(coefficient_of_variation({1, 3}) == doctest::Approx(0.5));
}
