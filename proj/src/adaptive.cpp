#include "anisomesh/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anisomesh/interp_error.hpp"
#include "anisomesh/recovery.hpp"

namespace anisomesh {

namespace {

// Bounds on the per-iteration correction of the volume target.
constexpr double kMinCorrection = 0.5;
constexpr double kMaxCorrection = 2.0;

std::vector<double> own_metric_lengths(const TriMesh& mesh, const NodalTensorField& metric) {
  const auto edges = mesh.edges();
  std::vector<double> out(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [a, b] = edges[k];
    out[k] = metric_length(metric[a], metric[b], mesh.vertex(b) - mesh.vertex(a));
  }
  return out;
}

}  // namespace

LengthSummary summarize_lengths(std::span<const double> lengths, double lo, double hi) {
  LengthSummary s;
  if (lengths.empty()) return s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  std::size_t inside = 0;
  double sum = 0.0;
  for (double l : lengths) {
    inside += l >= lo && l <= hi;
    sum += l;
    s.min = std::min(s.min, l);
    s.max = std::max(s.max, l);
  }
  s.in_band = static_cast<double>(inside) / static_cast<double>(lengths.size());
  s.mean = sum / static_cast<double>(lengths.size());
  return s;
}

AdaptResult adaptive_solve(const ProblemSpec& problem, const TriMesh& initial, const AdaptConfig& config,
                           const IterationObserver& observer) {
  check_config(config);
  AdaptResult result{initial, {}, {}};
  double volume_target = config.n_target * kUnitTriangleVolume;
  NodalScalarField previous;
  TriMesh previous_mesh;

  for (int k = 1; k <= config.iterations; ++k) {
    try {
      const TriMesh& mesh = result.mesh;
      if (config.validate_each_step) validate(mesh);
      result.solution = fem_solve(problem, mesh);

      IterationRecord rec;
      rec.iter = k;
      rec.nbt = mesh.num_triangles();
      rec.nv = mesh.num_vertices();
      rec.metric_volume_target = volume_target;
      rec.h1_err = problem.exact_gradient ? true_h1_error(result.solution, problem, mesh)
                                          : std::numeric_limits<double>::quiet_NaN();

      const NodalTensorField hessian = recover_hessian(result.solution, mesh);
      rec.h2_err = problem.exact_hessian ? h2_error(hessian, problem, mesh) : std::numeric_limits<double>::quiet_NaN();
      const EtaResult eta = eta_global(hessian, mesh);
      rec.eta = eta.eta;
      rec.cv_eta = coefficient_of_variation(eta.per_element);

      MetricParams params = config.metric;
      params.n_target = config.n_target;
      const NodalTensorField metric = normalize_metric(build_monitor(hessian, params), mesh, volume_target);
      rec.lengths = summarize_lengths(own_metric_lengths(mesh, metric), config.collapse_threshold,
                                      config.split_threshold);

      if (k > 1) {
        const auto moved = transfer_field(previous, previous_mesh, mesh);
        double change = 0.0;
        for (std::size_t i = 0; i < moved.size(); ++i) change = std::max(change, std::abs(moved[i] - result.solution[i]));
        rec.solution_change = change;
      }

      result.report.iterations.push_back(rec);
      if (observer) observer(rec, mesh, result.solution, metric);
      if (k == config.iterations) break;

      TriMesh next = adapt_mesh(mesh, metric, config);
      const double correction =
          std::clamp(static_cast<double>(config.n_target) / next.num_triangles(), kMinCorrection, kMaxCorrection);
      volume_target *= correction;
      previous = result.solution;
      previous_mesh = std::move(result.mesh);
      result.mesh = std::move(next);
    } catch (const AdaptationAborted&) {
      throw;
    } catch (const Error& e) {
      throw AdaptationAborted(result.report, "iteration " + std::to_string(k) + ": " + e.what(), std::current_exception());
    }
  }
  return result;
}

}  // namespace anisomesh
