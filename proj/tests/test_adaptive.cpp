#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "anisomesh/adaptive.hpp"
#include "anisomesh/experiments.hpp"

using namespace anisomesh;

namespace {

ExperimentSpec small_ex2() {
  ExperimentSpec s;
  s.alpha = 50;
  s.n_target = 300;
  s.iterations = 4;
  s.initial_cells = 8;
  return s;
}

}  // namespace

TEST_CASE("one record per iteration, errors fall, counts approach the target") {
  const auto spec = small_ex2();
  auto cfg = make_config(spec);
  cfg.validate_each_step = true;
  int calls = 0;
  const auto r = adaptive_solve(make_problem(spec), structured_unit_square(spec.initial_cells), cfg,
                                [&](const IterationRecord& rec, const TriMesh& m, const NodalScalarField& u,
                                    const NodalTensorField& metric) {
                                  ++calls;
                                  CHECK(rec.iter == calls);
                                  CHECK(rec.nbt == m.num_triangles());
                                  CHECK(u.size() == static_cast<std::size_t>(m.num_vertices()));
                                  CHECK(metric.role == TensorRole::metric);
                                });
  CHECK(calls == 4);
  REQUIRE(r.report.iterations.size() == 4);
  const auto& first = r.report.iterations.front();
  const auto& last = r.report.iterations.back();
  CHECK(first.solution_change == 0.0);
  CHECK(last.solution_change > 0.0);
  CHECK(first.metric_volume_target == doctest::Approx(300 * kUnitTriangleVolume));
  CHECK(last.nbt == r.mesh.num_triangles());
  CHECK(std::abs(last.nbt - 300) < 0.25 * 300);
  CHECK(last.h1_err < first.h1_err);
  for (const auto& rec : r.report.iterations) {
    CHECK(rec.eta > 0.0);
    CHECK(std::isfinite(rec.h2_err));
    CHECK(rec.lengths.min <= rec.lengths.mean);
    CHECK(rec.lengths.mean <= rec.lengths.max);
  }
  CHECK(r.solution.size() == static_cast<std::size_t>(r.mesh.num_vertices()));
}

TEST_CASE("missing exact data gives NaN errors rather than failing") {
  const auto spec = small_ex2();
  auto p = make_problem(spec);
  p.exact_gradient = nullptr;
  p.exact_hessian = nullptr;
  auto cfg = make_config(spec);
  cfg.iterations = 2;
  const auto r = adaptive_solve(p, structured_unit_square(spec.initial_cells), cfg);
  REQUIRE(r.report.iterations.size() == 2);
  CHECK(std::isnan(r.report.iterations[0].h1_err));
  CHECK(std::isnan(r.report.iterations[0].h2_err));
  CHECK(r.report.iterations[0].eta > 0.0);
}

TEST_CASE("a failure mid-run keeps the partial report") {
  const auto spec = small_ex2();
  auto p = make_problem(spec);
  auto armed = std::make_shared<bool>(false);
  auto exact = p.exact_hessian;
  p.exact_hessian = [armed, exact](Vec2 x) {
    if (*armed) throw Error("exact Hessian unavailable");
    return exact(x);
  };
  try {
    adaptive_solve(p, structured_unit_square(spec.initial_cells), make_config(spec),
                   [armed](const IterationRecord&, const TriMesh&, const NodalScalarField&, const NodalTensorField&) {
                     *armed = true;
                   });
    FAIL("expected AdaptationAborted");
  } catch (const AdaptationAborted& e) {
    CHECK(e.partial_report().iterations.size() == 1);
    CHECK(e.cause() != nullptr);
    CHECK(std::string(e.what()).find("iteration 2") != std::string::npos);
  }
}

TEST_CASE("invalid configuration is rejected up front") {
  const auto spec = small_ex2();
  auto cfg = make_config(spec);
  cfg.iterations = 0;
  CHECK_THROWS_AS(adaptive_solve(make_problem(spec), structured_unit_square(4), cfg), ValidationError);
}

TEST_CASE("runs are deterministic") {
  const auto spec = small_ex2();
  const auto a = adaptive_solve(make_problem(spec), structured_unit_square(spec.initial_cells), make_config(spec));
  const auto b = adaptive_solve(make_problem(spec), structured_unit_square(spec.initial_cells), make_config(spec));
  CHECK(emit_csv(a.report) == emit_csv(b.report));
  CHECK(a.solution == b.solution);
}

TEST_CASE("summarize_lengths") {
  const std::vector<double> l{0.5, 1.0, 1.2, 2.0};
  const auto s = summarize_lengths(l, 1 / std::sqrt(2.0), std::sqrt(2.0));
  CHECK(s.in_band == doctest::Approx(0.5));
  CHECK(s.min == 0.5);
  CHECK(s.max == 2.0);
  CHECK(s.mean == doctest::Approx(1.175));
}
