#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anisomesh/errors.hpp"
#include "anisomesh/experiments.hpp"
#include "anisomesh/medit.hpp"

using namespace anisomesh;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("defaults are the benchmark settings") {
  const ExperimentSpec s;
  CHECK(s.kappa == 0.0015);
  CHECK(s.alpha == 1000.0);
  CHECK(s.beta == 40.0);
  CHECK(s.iterations == 10);
  CHECK(s.metric == MetricKind::new_h1);
  CHECK(parse_example("ex3") == ExampleId::ex3);
  CHECK_FALSE(parse_example("ex4").has_value());
  for (ExampleId id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3}) CHECK(parse_example(example_name(id)) == id);
}

TEST_CASE("problems satisfy their boundary conditions and PDE") {
  for (ExampleId id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3}) {
    ExperimentSpec s;
    s.id = id;
    s.beta = 5;
    s.alpha = 20;
    s.kappa = 0.1;
    const auto p = make_problem(s);
    const TriMesh m = structured_unit_square(2);
    CHECK_NOTHROW(check_problem(p, m));
    for (const auto& d : p.dirichlet)
      for (double t : {0.0, 0.3, 0.9}) {
        Vec2 x = d.tag == 1 ? Vec2{t, 0} : d.tag == 2 ? Vec2{1, t} : d.tag == 3 ? Vec2{t, 1} : Vec2{0, t};
        CHECK(p.exact_solution(x) == doctest::Approx(d.value(x)).epsilon(1e-12));
      }
    // -kappa lap u + b.grad u = f at an interior point.
    const Vec2 x{0.37, 0.61};
    const SymTensor2 h = p.exact_hessian(x);
    const Vec2 g = p.exact_gradient(x);
    CHECK(-p.kappa * h.trace() + dot(p.convection, g) == doctest::Approx(p.source(x)).epsilon(1e-9));
    // Gradient consistent with the solution by central differences.
    const double e = 1e-6;
    CHECK((p.exact_solution(x + Vec2{e, 0}) - p.exact_solution(x - Vec2{e, 0})) / (2 * e) ==
          doctest::Approx(g.x).epsilon(1e-6));
  }
}

TEST_CASE("invalid parameters") {
  ExperimentSpec s;
  s.id = ExampleId::ex1;
  s.kappa = -1;
  CHECK_THROWS_AS(make_problem(s), ValidationError);
  s.id = ExampleId::ex2;
  s.alpha = 0;
  CHECK_THROWS_AS(make_problem(s), ValidationError);
  s.id = ExampleId::ex3;
  s.beta = 1;
  CHECK_THROWS_AS(make_problem(s), ValidationError);
}

TEST_CASE("emit_csv") {
  AdaptReport r;
  for (int k = 1; k <= 10; ++k) r.iterations.push_back({.iter = k, .nbt = 100 * k, .nv = 60 * k, .h1_err = 0.1 / k, .h2_err = 2.0, .eta = 1.0 / 3.0, .cv_eta = 0.5});
  const std::string csv = emit_csv(r);
  CHECK(count(csv, "\n") == 11);
  CHECK(csv.rfind("iter,nbt,nv,h1_err,h2_err,eta,cv_eta\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (int k = 1; k <= 10; ++k) {
    std::getline(in, line);
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 7);
    CHECK(v[0] == k);
    CHECK(v[3] == 0.1 / k);
    CHECK(v[5] == 1.0 / 3.0);
  }
}

TEST_CASE("render_svg") {
  const TriMesh sq = structured_unit_square(1);
  const std::string a = render_svg(sq);
  CHECK(count(a, "<polygon") == 2);
  CHECK(count(a, "fill=\"#dddddd\"") == 2);
  CHECK(a == render_svg(sq));
  const TriMesh m = structured_unit_square(3);
  std::vector<double> f(m.num_vertices());
  for (Index v = 0; v < m.num_vertices(); ++v) f[v] = m.vertex(v).x;
  const std::string b = render_svg(m, f);
  CHECK(count(b, "<polygon") == 18);
  CHECK(count(b, "fill=\"#dddddd\"") == 0);
  CHECK(b == render_svg(m, f));
}

TEST_CASE("run_experiment writes its artifacts") {
  ExperimentSpec s;
  s.id = ExampleId::ex3;
  s.beta = 10;
  s.n_target = 200;
  s.iterations = 2;
  s.initial_cells = 6;
  s.out_dir = std::filesystem::temp_directory_path() / "anisomesh_test_experiments";
  std::filesystem::remove_all(s.out_dir);
  const auto r = run_experiment(s);
  REQUIRE(r.report.iterations.size() == 2);
  CHECK(slurp(s.out_dir / "report.csv") == emit_csv(r.report));
  for (int k = 1; k <= 2; ++k) {
    const auto stem = "_iter_" + std::to_string(k);
    CHECK(std::filesystem::exists(s.out_dir / ("mesh" + stem + ".svg")));
    const TriMesh m = read_medit(slurp(s.out_dir / ("mesh" + stem + ".mesh")));
    CHECK(m.num_triangles() == r.report.iterations[k - 1].nbt);
    const auto metric = tensor_field_from_sol(read_sol(slurp(s.out_dir / ("metric" + stem + ".sol"))));
    CHECK(metric.size() == static_cast<std::size_t>(m.num_vertices()));
  }
  std::filesystem::remove_all(s.out_dir);
}
