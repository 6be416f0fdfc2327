#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "anisomesh/errors.hpp"
#include "anisomesh/experiments.hpp"
#include "anisomesh/interp_error.hpp"
#include "anisomesh/medit.hpp"

namespace {

using namespace anisomesh;

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code_for(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const AdaptationAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.cause() ? exit_code_for(e.cause()) : 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverBreakdown& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int run(const ExperimentSpec& spec) {
  const AdaptResult result = run_experiment(spec);
  std::cout << emit_csv(result.report);
  return 0;
}

int formulas(int trials, std::uint64_t seed) {
  const FormulaDeviation d = check_formulas(trials, seed);
  std::printf("trials %d\n", d.trials);
  std::printf("thm21 vs bank-smith  %.3e\n", d.thm21_vs_bank_smith);
  std::printf("thm21 vs oracle      %.3e\n", d.thm21_vs_oracle);
  std::printf("bank-smith vs oracle %.3e\n", d.bank_smith_vs_oracle);
  std::printf("nadler vs oracle     %.3e\n", d.nadler_vs_oracle);
  std::printf("max relative deviation %.3e\n", d.worst());
  return 0;
}

int render(const std::string& mesh_path, const std::string& sol_path, const std::string& out_path) {
  const TriMesh mesh = read_medit(read_text(mesh_path));
  std::vector<double> field;
  if (!sol_path.empty()) {
    const SolData sol = read_sol(read_text(sol_path));
    if (sol.type != SolType::scalar) throw ValidationError("render expects a scalar solution file");
    if (sol.count != mesh.num_vertices()) throw ValidationError("solution length does not match the mesh");
    field = sol.values;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << render_svg(mesh, field);
  if (!out) throw Error("cannot write " + out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic mesh adaptation driven by Hessian-based metric tensors"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string example = "ex2", metric = "new-h1", out_dir = "out";
  double alpha0 = 0.0, alpha1 = 0.0;
  auto* run_cmd = app.add_subcommand("run", "Run an adaptive experiment and write its artifacts");
  run_cmd->add_option("--example", example, "ex1, ex2 or ex3")->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
  run_cmd->add_option("--metric", metric, "new-h1, mod-hessian, new-l2, huang-h1 or huang-l2")
      ->check(CLI::IsMember({"new-h1", "mod-hessian", "new-l2", "huang-h1", "huang-l2"}));
  run_cmd->add_option("--nbt", spec.n_target, "Target number of triangles")->capture_default_str();
  run_cmd->add_option("--iters", spec.iterations, "Adaptive iterations")->capture_default_str();
  run_cmd->add_option("--kappa", spec.kappa, "Diffusion coefficient (ex1)")->capture_default_str();
  run_cmd->add_option("--alpha", spec.alpha, "Layer steepness (ex2)")->capture_default_str();
  run_cmd->add_option("--beta", spec.beta, "Exponent (ex3)")->capture_default_str();
  auto* a0 = run_cmd->add_option("--alpha0", alpha0, "Flooring for the L2 metrics");
  auto* a1 = run_cmd->add_option("--alpha1", alpha1, "Flooring for the H1 metrics");
  run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();

  int trials = 10000;
  std::uint64_t seed = 1;
  auto* formulas_cmd = app.add_subcommand("formulas", "Check the closed-form errors against quadrature");
  formulas_cmd->add_option("--check", trials, "Number of random trials")->capture_default_str();
  formulas_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();

  std::string mesh_path, sol_path, svg_path = "out.svg";
  auto* render_cmd = app.add_subcommand("render", "Render a MEDIT mesh to SVG");
  render_cmd->add_option("mesh", mesh_path, "MEDIT mesh file")->required();
  render_cmd->add_option("sol", sol_path, "Optional scalar .sol file");
  render_cmd->add_option("-o,--output", svg_path, "Output SVG")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run_cmd) {
      spec.id = *parse_example(example);
      spec.metric = *parse_metric_kind(metric);
      if (*a0) spec.alpha0 = alpha0;
      if (*a1) spec.alpha1 = alpha1;
      spec.out_dir = out_dir;
      return run(spec);
    }
    if (*formulas_cmd) return formulas(trials, seed);
    return render(mesh_path, sol_path, svg_path);
  } catch (...) {
    return exit_code_for(std::current_exception());
  }
}
