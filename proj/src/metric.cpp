#include "anisomesh/metric.hpp"

#include <algorithm>
#include <cmath>

#include "anisomesh/errors.hpp"

namespace anisomesh {

namespace {

template <class F>
NodalTensorField map_field(const NodalTensorField& in, F&& f) {
  NodalTensorField out;
  out.role = TensorRole::monitor;
  out.values.reserve(in.size());
  for (const auto& t : in.values) out.values.push_back(f(t));
  return out;
}

void require_positive(double alpha) {
  if (!(alpha > 0.0)) throw NonPositiveAlpha("flooring parameter must be positive");
}

}  // namespace

std::string_view metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::new_h1: return "new-h1";
    case MetricKind::new_l2: return "new-l2";
    case MetricKind::modified_hessian: return "mod-hessian";
    case MetricKind::huang_h1: return "huang-h1";
    case MetricKind::huang_l2: return "huang-l2";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
  for (auto k : {MetricKind::new_h1, MetricKind::new_l2, MetricKind::modified_hessian, MetricKind::huang_h1,
                 MetricKind::huang_l2}) {
    if (metric_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

double default_flooring(const NodalTensorField& hessian) {
  double rho = 0.0;
  for (const auto& t : hessian.values) rho = std::max(rho, spectral_radius(t));
  return std::max(1e-10, 1e-6 * rho);
}

NodalTensorField monitor_h1(const NodalTensorField& hessian, double alpha1) {
  require_positive(alpha1);
  return map_field(hessian, [&](const SymTensor2& h) {
    const SymTensor2 hf = floor_regularize(h, alpha1);
    return anisotropy_factor(hf) * hf;
  });
}

NodalTensorField monitor_l2(const NodalTensorField& hessian, double alpha0) {
  require_positive(alpha0);
  return map_field(hessian, [&](const SymTensor2& h) {
    const SymTensor2 hf = floor_regularize(h, alpha0);
    return std::pow(hf.det(), -1.0 / 6.0) * hf;
  });
}

NodalTensorField monitor_modified_hessian(const NodalTensorField& hessian, double alpha1) {
  require_positive(alpha1);
  return map_field(hessian, [&](const SymTensor2& h) { return floor_regularize(h, alpha1); });
}

NodalTensorField monitor_huang(const NodalTensorField& hessian, double alpha, ErrorNorm norm) {
  require_positive(alpha);
  return map_field(hessian, [&](const SymTensor2& h) {
    const SymTensor2 g = SymTensor2::identity() + (1.0 / alpha) * abs_tensor(h);
    return norm == ErrorNorm::h1 ? g : std::pow(g.det(), -1.0 / 6.0) * g;
  });
}

NodalTensorField build_monitor(const NodalTensorField& hessian, const MetricParams& params) {
  const bool need_default = !params.alpha0 || !params.alpha1;
  const double fallback = need_default ? default_flooring(hessian) : 0.0;
  const double alpha0 = params.alpha0.value_or(fallback);
  const double alpha1 = params.alpha1.value_or(fallback);
  switch (params.kind) {
    case MetricKind::new_h1: return monitor_h1(hessian, alpha1);
    case MetricKind::new_l2: return monitor_l2(hessian, alpha0);
    case MetricKind::modified_hessian: return monitor_modified_hessian(hessian, alpha1);
    case MetricKind::huang_h1: return monitor_huang(hessian, alpha1, ErrorNorm::h1);
    case MetricKind::huang_l2: return monitor_huang(hessian, alpha0, ErrorNorm::l2);
  }
  return {};
}

double metric_volume(const NodalTensorField& field, const TriMesh& mesh) {
  if (static_cast<Index>(field.size()) != mesh.num_vertices()) {
    throw ValidationError("tensor field length does not match the mesh");
  }
  std::vector<double> rho(field.size());
  for (std::size_t v = 0; v < field.size(); ++v) rho[v] = std::sqrt(std::max(field[v].det(), 0.0));
  double sigma = 0.0;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    sigma += mesh.area(t) * (rho[tri[0]] + rho[tri[1]] + rho[tri[2]]) / 3.0;
  }
  return sigma;
}

NodalTensorField normalize_metric(const NodalTensorField& monitor, const TriMesh& mesh, double n_target) {
  if (!(n_target > 0.0)) throw ValidationError("target element count must be positive");
  const auto spd_count = std::count_if(monitor.values.begin(), monitor.values.end(), is_spd);
  if (spd_count == 0) throw ZeroSigma("monitor is degenerate at every vertex");
  if (spd_count != static_cast<std::ptrdiff_t>(monitor.size())) throw NotSPD("monitor is not SPD at every vertex");
  const double sigma = metric_volume(monitor, mesh);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ZeroSigma("monitor has zero metric volume");
  NodalTensorField out = monitor;
  out.role = TensorRole::metric;
  const double theta = n_target / sigma;
  for (auto& t : out.values) t *= theta;
  return out;
}

SymTensor2 interpolate_metric(const TriMesh& mesh, const NodalTensorField& metric, const PointLocation& loc) {
  const auto& tri = mesh.triangle(loc.triangle);
  SymTensor2 m{};
  double radius = 0.0;
  for (int i = 0; i < 3; ++i) {
    m += loc.bary[i] * metric[tri[i]];
    radius = std::max(radius, spectral_radius(metric[tri[i]]));
  }
  auto e = eig_sym2(m);
  const double floor = 1e-12 * radius;
  if (e.l2 >= floor) return m;
  e.l1 = std::max(e.l1, floor);
  e.l2 = std::max(e.l2, floor);
  return compose(e);
}

SymTensor2 interpolate_metric(const TriMesh& mesh, const NodalTensorField& metric, Vec2 p, Index hint) {
  return interpolate_metric(mesh, metric, locate_point(mesh, p, hint));
}

double metric_edge_length(const TriMesh& mesh, const NodalTensorField& metric, Vec2 a, Vec2 b) {
  const auto la = locate_point(mesh, a);
  const auto lb = locate_point(mesh, b, la.triangle);
  return metric_length(interpolate_metric(mesh, metric, la), interpolate_metric(mesh, metric, lb), b - a);
}

}  // namespace anisomesh
