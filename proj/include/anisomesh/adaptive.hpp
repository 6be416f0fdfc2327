#pragma once

#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "anisomesh/errors.hpp"
#include "anisomesh/fem.hpp"
#include "anisomesh/mesh.hpp"
#include "anisomesh/metric.hpp"
#include "anisomesh/remesh.hpp"

namespace anisomesh {

/// Distribution of the metric edge lengths of a mesh.
struct LengthSummary {
  /// Fraction of edges inside [collapse_threshold, split_threshold].
  double in_band = 0.0;
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct IterationRecord {
  int iter = 0;
  Index nbt = 0;
  Index nv = 0;
  double h1_err = 0.0;
  double h2_err = 0.0;
  double eta = 0.0;
  double cv_eta = 0.0;
  /// Edges of this iteration's mesh measured in the metric built on it.
  LengthSummary lengths;
  /// Max nodal difference to the previous solution transferred onto this
  /// mesh; zero on the first iteration.
  double solution_change = 0.0;
  /// Normalization target N used for the metric of this iteration.
  double metric_volume_target = 0.0;
};

struct AdaptReport {
  std::vector<IterationRecord> iterations;
};

/// Thrown when an iteration fails; carries everything recorded before it.
class AdaptationAborted : public Error {
 public:
  AdaptationAborted(AdaptReport partial, const std::string& what, std::exception_ptr cause)
      : Error("adaptation aborted: " + what), partial_(std::move(partial)), cause_(std::move(cause)) {}
  const AdaptReport& partial_report() const noexcept { return partial_; }
  /// The original exception.
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  AdaptReport partial_;
  std::exception_ptr cause_;
};

struct AdaptResult {
  TriMesh mesh;
  NodalScalarField solution;
  AdaptReport report;
};

/// Called once per iteration with the mesh, its solution and the normalized
/// metric computed on it.
using IterationObserver =
    std::function<void(const IterationRecord&, const TriMesh&, const NodalScalarField&, const NodalTensorField&)>;

LengthSummary summarize_lengths(std::span<const double> lengths, double lo, double hi);

/// Runs config.iterations solve/estimate cycles, adapting the mesh between
/// consecutive ones. The metric volume target starts at
/// n_target * kUnitTriangleVolume and is rescaled by n_target / nbt after
/// every adaptation so the element count settles near n_target.
AdaptResult adaptive_solve(const ProblemSpec& problem, const TriMesh& initial, const AdaptConfig& config,
                           const IterationObserver& observer = {});

}  // namespace anisomesh
