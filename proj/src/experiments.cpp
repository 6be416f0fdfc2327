#include "anisomesh/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "anisomesh/errors.hpp"
#include "anisomesh/medit.hpp"

namespace anisomesh {

namespace {

enum Side : int { kBottom = 1, kRight = 2, kTop = 3, kLeft = 4 };

ScalarFunction constant(double c) {
  return [c](Vec2) { return c; };
}

ProblemSpec convection_layer(double kappa) {
  ProblemSpec p;
  p.kappa = kappa;
  p.convection = {1.0, 0.0};
  p.source = constant(0.0);
  p.dirichlet = {{kLeft, constant(0.0)}, {kRight, constant(1.0)}};
  p.neumann_tags = {kBottom, kTop};
  // (1 - e^{x/k}) / (1 - e^{1/k}) rewritten so nothing overflows.
  const double tail = std::exp(-1.0 / kappa);
  const double denom = 1.0 - tail;
  p.exact_solution = [=](Vec2 x) { return (std::exp((x.x - 1.0) / kappa) - tail) / denom; };
  p.exact_gradient = [=](Vec2 x) { return Vec2{std::exp((x.x - 1.0) / kappa) / (kappa * denom), 0.0}; };
  p.exact_hessian = [=](Vec2 x) {
    return SymTensor2{std::exp((x.x - 1.0) / kappa) / (kappa * kappa * denom), 0.0, 0.0};
  };
  return p;
}

ProblemSpec exponential_layer(double alpha) {
  ProblemSpec p;
  const double c = 1.0 - std::exp(-alpha);
  auto g = [=](double x) { return 1.0 - std::exp(-alpha * x) - c * x; };
  auto dg = [=](double x) { return alpha * std::exp(-alpha * x) - c; };
  auto d2g = [=](double x) { return -alpha * alpha * std::exp(-alpha * x); };
  auto h = [](double y) { return 4.0 * y * (1.0 - y); };
  auto dh = [](double y) { return 4.0 - 8.0 * y; };
  p.kappa = 1.0;
  p.source = [=](Vec2 x) { return alpha * alpha * std::exp(-alpha * x.x) * h(x.y) + 8.0 * g(x.x); };
  p.dirichlet = {{kBottom, constant(0.0)}, {kRight, constant(0.0)}, {kTop, constant(0.0)}, {kLeft, constant(0.0)}};
  p.exact_solution = [=](Vec2 x) { return g(x.x) * h(x.y); };
  p.exact_gradient = [=](Vec2 x) { return Vec2{dg(x.x) * h(x.y), g(x.x) * dh(x.y)}; };
  p.exact_hessian = [=](Vec2 x) {
    return SymTensor2{d2g(x.x) * h(x.y), dg(x.x) * dh(x.y), -8.0 * g(x.x)};
  };
  return p;
}

ProblemSpec corner_layers(double beta) {
  ProblemSpec p;
  const double b2 = 2.0 * beta;
  p.kappa = 1.0;
  p.source = [=](Vec2 x) {
    return beta * (beta - 1.0) * std::pow(x.x, beta - 2.0) * (1.0 - std::pow(x.y, b2)) +
           b2 * (b2 - 1.0) * std::pow(x.y, b2 - 2.0) * (1.0 - std::pow(x.x, beta));
  };
  p.dirichlet = {{kRight, constant(0.0)}, {kTop, constant(0.0)}};
  p.neumann_tags = {kBottom, kLeft};
  p.exact_solution = [=](Vec2 x) { return (1.0 - std::pow(x.x, beta)) * (1.0 - std::pow(x.y, b2)); };
  p.exact_gradient = [=](Vec2 x) {
    return Vec2{-beta * std::pow(x.x, beta - 1.0) * (1.0 - std::pow(x.y, b2)),
                -b2 * std::pow(x.y, b2 - 1.0) * (1.0 - std::pow(x.x, beta))};
  };
  p.exact_hessian = [=](Vec2 x) {
    return SymTensor2{-beta * (beta - 1.0) * std::pow(x.x, beta - 2.0) * (1.0 - std::pow(x.y, b2)),
                      beta * b2 * std::pow(x.x, beta - 1.0) * std::pow(x.y, b2 - 1.0),
                      -b2 * (b2 - 1.0) * std::pow(x.y, b2 - 2.0) * (1.0 - std::pow(x.x, beta))};
  };
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

void append_number(std::string& s, const char* fmt, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  s += buf;
}

}  // namespace

std::string_view example_name(ExampleId id) {
  switch (id) {
    case ExampleId::ex1: return "ex1";
    case ExampleId::ex2: return "ex2";
    case ExampleId::ex3: return "ex3";
  }
  return "unknown";
}

std::optional<ExampleId> parse_example(std::string_view name) {
  for (auto id : {ExampleId::ex1, ExampleId::ex2, ExampleId::ex3})
    if (example_name(id) == name) return id;
  return std::nullopt;
}

ProblemSpec make_problem(const ExperimentSpec& spec) {
  switch (spec.id) {
    case ExampleId::ex1:
      if (!(spec.kappa > 0.0)) throw ValidationError("kappa must be positive");
      return convection_layer(spec.kappa);
    case ExampleId::ex2:
      if (!(spec.alpha > 0.0)) throw ValidationError("alpha must be positive");
      return exponential_layer(spec.alpha);
    case ExampleId::ex3:
      if (!(spec.beta >= 2.0)) throw ValidationError("beta must be at least 2");
      return corner_layers(spec.beta);
  }
  throw ValidationError("unknown example");
}

AdaptConfig make_config(const ExperimentSpec& spec) {
  AdaptConfig c;
  c.n_target = spec.n_target;
  c.iterations = spec.iterations;
  c.metric.kind = spec.metric;
  c.metric.alpha0 = spec.alpha0;
  c.metric.alpha1 = spec.alpha1;
  c.metric.n_target = spec.n_target;
  return c;
}

AdaptResult run_experiment(const ExperimentSpec& spec) {
  const ProblemSpec problem = make_problem(spec);
  const AdaptConfig config = make_config(spec);
  const TriMesh initial = structured_unit_square(spec.initial_cells);

  IterationObserver observer;
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    observer = [&](const IterationRecord& rec, const TriMesh& mesh, const NodalScalarField& u,
                   const NodalTensorField& metric) {
      const std::string k = std::to_string(rec.iter);
      write_file(spec.out_dir / ("mesh_iter_" + k + ".mesh"), write_medit(mesh));
      write_file(spec.out_dir / ("mesh_iter_" + k + ".svg"), render_svg(mesh, u));
      write_file(spec.out_dir / ("metric_iter_" + k + ".sol"), write_sol(metric));
    };
  }

  try {
    AdaptResult result = adaptive_solve(problem, initial, config, observer);
    if (!spec.out_dir.empty()) write_file(spec.out_dir / "report.csv", emit_csv(result.report));
    return result;
  } catch (const AdaptationAborted& e) {
    if (!spec.out_dir.empty()) write_file(spec.out_dir / "report.csv", emit_csv(e.partial_report()));
    throw;
  }
}

std::string emit_csv(const AdaptReport& report) {
  std::string s = "iter,nbt,nv,h1_err,h2_err,eta,cv_eta\n";
  for (const auto& r : report.iterations) {
    s += std::to_string(r.iter) + ',' + std::to_string(r.nbt) + ',' + std::to_string(r.nv);
    for (double v : {r.h1_err, r.h2_err, r.eta, r.cv_eta}) {
      s += ',';
      append_number(s, "%.17g", v);
    }
    s += '\n';
  }
  return s;
}

std::string render_svg(const TriMesh& mesh, std::span<const double> field) {
  constexpr double kSize = 800.0, kMargin = 10.0;
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (Vec2 p : mesh.vertices()) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, 1e-300});
  const double scale = (kSize - 2.0 * kMargin) / extent;
  const double width = (hi.x - lo.x) * scale + 2.0 * kMargin;
  const double height = (hi.y - lo.y) * scale + 2.0 * kMargin;

  const bool colored = !field.empty();
  double fmin = 0.0, fmax = 0.0;
  if (colored) {
    const auto [a, b] = std::minmax_element(field.begin(), field.end());
    fmin = *a;
    fmax = *b;
  }

  std::string s;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.3f %.3f\">\n",
                std::ceil(width), std::ceil(height), width, height);
  s += buf;
  s += "<g stroke=\"#000000\" stroke-width=\"0.3\" stroke-linejoin=\"round\">\n";
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    std::string fill = "#dddddd";
    if (colored) {
      const double mean = (field[tri[0]] + field[tri[1]] + field[tri[2]]) / 3.0;
      const double s01 = fmax > fmin ? std::clamp((mean - fmin) / (fmax - fmin), 0.0, 1.0) : 0.5;
      const int r = static_cast<int>(std::lround(255.0 * s01));
      std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, 64, 255 - r);
      fill = buf;
    }
    s += "<polygon points=\"";
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = mesh.vertex(tri[i]);
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", kMargin + (p.x - lo.x) * scale,
                    kMargin + (hi.y - p.y) * scale);
      s += buf;
    }
    s += "\" fill=\"" + fill + "\"/>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

}  // namespace anisomesh
