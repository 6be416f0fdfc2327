#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "anisomesh/adaptive.hpp"
#include "anisomesh/fem.hpp"
#include "anisomesh/mesh.hpp"

namespace anisomesh {

enum class ExampleId { ex1, ex2, ex3 };

std::string_view example_name(ExampleId id);
std::optional<ExampleId> parse_example(std::string_view name);

/// One benchmark run. Defaults are the benchmark settings.
struct ExperimentSpec {
  ExampleId id = ExampleId::ex2;
  /// Diffusion coefficient of ex1.
  double kappa = 0.0015;
  /// Layer steepness of ex2.
  double alpha = 1000.0;
  /// Exponent of ex3, studied at 5, 10, 20 and 40.
  double beta = 40.0;
  MetricKind metric = MetricKind::new_h1;
  std::optional<double> alpha0;
  std::optional<double> alpha1;
  int n_target = 4000;
  int iterations = 10;
  /// Cells per side of the initial structured mesh.
  int initial_cells = 16;
  /// Artifacts are written here when non-empty.
  std::filesystem::path out_dir;
};

/// Boundary-value problem of an example together with its exact solution,
/// gradient and Hessian.
ProblemSpec make_problem(const ExperimentSpec& spec);

AdaptConfig make_config(const ExperimentSpec& spec);

/// Runs adaptive_solve from structured_unit_square(initial_cells). With an
/// output directory, writes report.csv and, per iteration k, mesh_iter_k.mesh,
/// mesh_iter_k.svg and metric_iter_k.sol.
AdaptResult run_experiment(const ExperimentSpec& spec);

/// Header iter,nbt,nv,h1_err,h2_err,eta,cv_eta and one row per iteration,
/// numbers with 17 significant digits.
std::string emit_csv(const AdaptReport& report);

/// One polygon per triangle in a viewport fitted to the mesh. Triangles are
/// colored by the mean nodal value on a linear blue-to-red scale, or filled
/// uniformly when field is empty.
std::string render_svg(const TriMesh& mesh, std::span<const double> field = {});

}  // namespace anisomesh
