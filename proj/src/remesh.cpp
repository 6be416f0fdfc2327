#include "anisomesh/remesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "anisomesh/errors.hpp"
#include "anisomesh/kernels.hpp"

namespace anisomesh {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

// Collapse acceptance: the worst new triangle keeps at least this fraction of
// the worst old one, or is at least kCollapseQualityFloor outright.
constexpr double kCollapseQualityRatio = 0.5;
constexpr double kCollapseQualityFloor = 0.3;

struct Edge {
  Index a, b;    // t0 traverses a -> b
  Index t0, t1;  // t1 == kNoIndex on the boundary
  int i0, i1;    // local index of the opposite vertex in t0 / t1
};

/// Connectivity snapshot of a WorkMesh, rebuilt at the start of every pass.
struct Topo {
  std::vector<Edge> edges;
  std::vector<std::array<Index, 3>> tri_edge;  // edge opposite local vertex i
  std::vector<Index> vt_offsets, vt;
  std::vector<std::array<Index, 2>> boundary_neighbors;

  std::span<const Index> ball(Index v) const {
    return {vt.data() + vt_offsets[v], vt.data() + vt_offsets[v + 1]};
  }
};

int lowest_tag(std::uint32_t mask) { return mask ? std::countr_zero(mask) : 0; }

class WorkMesh {
 public:
  WorkMesh(const TriMesh& background, const NodalTensorField& metric) : bg_(background), bg_metric_(metric) {
    if (static_cast<Index>(metric.size()) != background.num_vertices()) {
      throw ValidationError("metric field length does not match the mesh");
    }
    for (const auto& t : metric.values) {
      if (!is_spd(t)) throw NotSPD("metric is not SPD at every vertex");
    }
    const Index nv = background.num_vertices();
    pts.assign(background.vertices().begin(), background.vertices().end());
    met.assign(metric.values.begin(), metric.values.end());
    tags.resize(nv);
    hint.resize(nv);
    for (Index v = 0; v < nv; ++v) {
      tags[v] = background.vertex_tags(v);
      const auto ball = background.vertex_triangles(v);
      hint[v] = ball.empty() ? 0 : ball.front();
    }
    tris.assign(background.triangles().begin(), background.triangles().end());
  }

  Index num_vertices() const { return static_cast<Index>(pts.size()); }
  Index num_triangles() const { return static_cast<Index>(tris.size()); }

  bool is_boundary(Index v) const { return tags[v] != 0; }
  bool is_corner(Index v) const { return std::popcount(tags[v]) >= 2; }

  SymTensor2 metric_at(Vec2 p, Index& h) const {
    const auto loc = locate_point(bg_, p, h);
    h = loc.triangle;
    return interpolate_metric(bg_, bg_metric_, loc);
  }

  Index add_vertex(Vec2 p, std::uint32_t tag_mask, Index h) {
    const SymTensor2 m = metric_at(p, h);
    pts.push_back(p);
    met.push_back(m);
    tags.push_back(tag_mask);
    hint.push_back(h);
    return num_vertices() - 1;
  }

  double length(Index a, Index b) const { return metric_length(met[a], met[b], pts[b] - pts[a]); }

  double quality(const Triangle& t) const {
    return metric_quality(pts[t[0]], pts[t[1]], pts[t[2]], met[t[0]], met[t[1]], met[t[2]]);
  }

  Topo topology() const;

  /// Drops dead triangles and unreferenced vertices.
  void compact(const std::vector<char>& dead_tri);

  TriMesh to_mesh() const;

  std::vector<Vec2> pts;
  std::vector<SymTensor2> met;
  std::vector<std::uint32_t> tags;
  std::vector<Index> hint;
  std::vector<Triangle> tris;

 private:
  const TriMesh& bg_;
  const NodalTensorField& bg_metric_;
};

Topo WorkMesh::topology() const {
  struct Half {
    Index lo, hi, tri;
    int local;
  };
  const Index nt = num_triangles(), nv = num_vertices();
  std::vector<Half> half;
  half.reserve(3 * static_cast<std::size_t>(nt));
  for (Index t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const Index a = tris[t][(i + 1) % 3], b = tris[t][(i + 2) % 3];
      half.push_back({std::min(a, b), std::max(a, b), t, i});
    }
  }
  std::sort(half.begin(), half.end(),
            [](const Half& x, const Half& y) { return std::tie(x.lo, x.hi, x.tri) < std::tie(y.lo, y.hi, y.tri); });

  Topo topo;
  topo.tri_edge.assign(nt, {kNoIndex, kNoIndex, kNoIndex});
  topo.boundary_neighbors.assign(nv, {kNoIndex, kNoIndex});
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i + 1;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
    if (j - i > 2) throw NonConforming("remesher produced an edge shared by more than two triangles");
    const Half& h = half[i];
    Edge e;
    e.t0 = h.tri;
    e.i0 = h.local;
    e.a = tris[h.tri][(h.local + 1) % 3];
    e.b = tris[h.tri][(h.local + 2) % 3];
    e.t1 = kNoIndex;
    e.i1 = -1;
    if (j - i == 2) {
      e.t1 = half[i + 1].tri;
      e.i1 = half[i + 1].local;
    } else {
      for (auto [v, w] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
        auto& slot = topo.boundary_neighbors[v];
        (slot[0] == kNoIndex ? slot[0] : slot[1]) = w;
      }
    }
    const auto id = static_cast<Index>(topo.edges.size());
    topo.tri_edge[e.t0][e.i0] = id;
    if (e.t1 != kNoIndex) topo.tri_edge[e.t1][e.i1] = id;
    topo.edges.push_back(e);
    i = j;
  }

  topo.vt_offsets.assign(nv + 1, 0);
  for (const auto& t : tris)
    for (Index v : t) ++topo.vt_offsets[v + 1];
  for (Index v = 0; v < nv; ++v) topo.vt_offsets[v + 1] += topo.vt_offsets[v];
  topo.vt.resize(topo.vt_offsets[nv]);
  std::vector<Index> fill(topo.vt_offsets.begin(), topo.vt_offsets.end() - 1);
  for (Index t = 0; t < nt; ++t)
    for (Index v : tris[t]) topo.vt[fill[v]++] = t;
  return topo;
}

void WorkMesh::compact(const std::vector<char>& dead_tri) {
  std::vector<Triangle> kept;
  kept.reserve(tris.size());
  std::vector<Index> remap(pts.size(), kNoIndex);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    if (dead_tri[t]) continue;
    kept.push_back(tris[t]);
    for (Index v : tris[t]) remap[v] = 0;
  }
  Index next = 0;
  for (std::size_t v = 0; v < pts.size(); ++v) {
    if (remap[v] == kNoIndex) continue;
    remap[v] = next;
    pts[next] = pts[v];
    met[next] = met[v];
    tags[next] = tags[v];
    hint[next] = hint[v];
    ++next;
  }
  pts.resize(next);
  met.resize(next);
  tags.resize(next);
  hint.resize(next);
  for (auto& t : kept)
    for (Index& v : t) v = remap[v];
  tris = std::move(kept);
}

TriMesh WorkMesh::to_mesh() const {
  const Topo topo = topology();
  std::vector<BoundaryEdge> boundary;
  for (const Edge& e : topo.edges) {
    if (e.t1 != kNoIndex) continue;
    const int tag = lowest_tag(tags[e.a] & tags[e.b]);
    if (tag == 0) throw ValidationError("boundary edge endpoints share no boundary tag");
    boundary.push_back({{e.a, e.b}, tag});
  }
  return build_mesh(pts, tris, std::move(boundary));
}

std::vector<double> edge_lengths(const WorkMesh& m, const Topo& topo) {
  const std::size_t ne = topo.edges.size();
  std::vector<double> ex(ne), ey(ne), a11(ne), a12(ne), a22(ne), b11(ne), b12(ne), b22(ne), out(ne);
  for (std::size_t k = 0; k < ne; ++k) {
    const Edge& e = topo.edges[k];
    const Vec2 d = m.pts[e.b] - m.pts[e.a];
    ex[k] = d.x;
    ey[k] = d.y;
    const SymTensor2& ma = m.met[e.a];
    const SymTensor2& mb = m.met[e.b];
    a11[k] = ma.a11; a12[k] = ma.a12; a22[k] = ma.a22;
    b11[k] = mb.a11; b12[k] = mb.a12; b22[k] = mb.a22;
  }
  kernels::metric_edge_lengths(ex, ey, {a11, a12, a22}, {b11, b12, b22}, out);
  return out;
}

std::vector<Index> neighbors(const WorkMesh& m, const Topo& topo, Index v) {
  std::vector<Index> out;
  for (Index t : topo.ball(v))
    for (Index w : m.tris[t])
      if (w != v) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool straight_boundary_at(const WorkMesh& m, const Topo& topo, Index v) {
  const auto [p, q] = topo.boundary_neighbors[v];
  if (p == kNoIndex || q == kNoIndex) return false;
  const Vec2 a = m.pts[p] - m.pts[v], b = m.pts[q] - m.pts[v];
  return std::abs(cross(a, b)) <= 1e-12 * (norm2(a) + norm2(b));
}

// ---------------------------------------------------------------------------
// split

int split_pass(WorkMesh& m, double threshold) {
  const Topo topo = m.topology();
  const auto len = edge_lengths(m, topo);
  std::vector<Index> mid(topo.edges.size(), kNoIndex);
  int count = 0;
  for (std::size_t k = 0; k < topo.edges.size(); ++k) {
    if (!(len[k] > threshold)) continue;
    const Edge& e = topo.edges[k];
    const Vec2 p = 0.5 * (m.pts[e.a] + m.pts[e.b]);
    std::uint32_t mask = 0;
    if (e.t1 == kNoIndex) mask = 1u << lowest_tag(m.tags[e.a] & m.tags[e.b]);
    mid[k] = m.add_vertex(p, mask, m.hint[e.a]);
    ++count;
  }
  if (count == 0) return 0;

  std::vector<Triangle> out;
  out.reserve(m.tris.size() + 3 * static_cast<std::size_t>(count));
  for (std::size_t t = 0; t < m.tris.size(); ++t) {
    const Triangle& tri = m.tris[t];
    std::array<Index, 3> mids{};
    int marked = 0;
    for (int i = 0; i < 3; ++i) {
      mids[i] = mid[topo.tri_edge[t][i]];
      marked += mids[i] != kNoIndex;
    }
    if (marked == 0) {
      out.push_back(tri);
    } else if (marked == 1) {
      int i = 0;
      while (mids[i] == kNoIndex) ++i;
      const Index a = tri[i], b = tri[(i + 1) % 3], c = tri[(i + 2) % 3], mp = mids[i];
      out.push_back({a, b, mp});
      out.push_back({a, mp, c});
    } else if (marked == 2) {
      int k = 0;
      while (mids[k] != kNoIndex) ++k;
      const Index p = tri[k], q = tri[(k + 1) % 3], r = tri[(k + 2) % 3];
      const Index mq = mids[(k + 1) % 3], mr = mids[(k + 2) % 3];
      out.push_back({p, mr, mq});
      if (m.length(mr, r) <= m.length(q, mq)) {
        out.push_back({mr, q, r});
        out.push_back({mr, r, mq});
      } else {
        out.push_back({mr, q, mq});
        out.push_back({q, r, mq});
      }
    } else {
      const Index p = tri[0], q = tri[1], r = tri[2];
      const Index mp = mids[0], mq = mids[1], mr = mids[2];
      out.push_back({p, mr, mq});
      out.push_back({mr, q, mp});
      out.push_back({mq, mp, r});
      out.push_back({mr, mp, mq});
    }
  }
  m.tris = std::move(out);
  return count;
}

// ---------------------------------------------------------------------------
// collapse

struct CollapsePlan {
  bool ok = false;
  double min_quality = 0.0;
};

CollapsePlan plan_collapse(const WorkMesh& m, const Topo& topo, const Edge& e, Index v, Index w,
                           double split_threshold) {
  CollapsePlan plan;
  if (m.is_corner(v)) return plan;
  const bool boundary_edge = e.t1 == kNoIndex;
  if (m.is_boundary(v)) {
    if (!boundary_edge) return plan;
    if ((m.tags[v] & m.tags[w]) != m.tags[v]) return plan;
    if (!straight_boundary_at(m, topo, v)) return plan;
  }

  // Link condition: v and w share exactly the apexes of the edge's triangles.
  const auto nv = neighbors(m, topo, v);
  const auto nw = neighbors(m, topo, w);
  std::vector<Index> common;
  std::set_intersection(nv.begin(), nv.end(), nw.begin(), nw.end(), std::back_inserter(common));
  std::vector<Index> apex{m.tris[e.t0][e.i0]};
  if (!boundary_edge) apex.push_back(m.tris[e.t1][e.i1]);
  std::sort(apex.begin(), apex.end());
  if (common != apex) return plan;

  for (Index x : nv) {
    if (x != w && m.length(w, x) > split_threshold) return plan;
  }

  double old_min = 1.0, new_min = 1.0;
  for (Index t : topo.ball(v)) {
    Triangle tri = m.tris[t];
    old_min = std::min(old_min, m.quality(tri));
    if (std::find(tri.begin(), tri.end(), w) != tri.end()) continue;
    for (Index& x : tri)
      if (x == v) x = w;
    const Vec2 a = m.pts[tri[0]], b = m.pts[tri[1]], c = m.pts[tri[2]];
    const double twice = orient2d(a, b, c);
    const double scale = std::max({norm2(b - a), norm2(c - b), norm2(a - c)});
    if (!(twice > 1e-10 * scale)) return plan;
    new_min = std::min(new_min, m.quality(tri));
  }
  if (new_min < kCollapseQualityRatio * old_min && new_min < kCollapseQualityFloor) return plan;
  plan.ok = true;
  plan.min_quality = new_min;
  return plan;
}

int collapse_pass(WorkMesh& m, double threshold, double split_threshold) {
  const Topo topo = m.topology();
  const auto len = edge_lengths(m, topo);
  std::vector<Index> order;
  for (std::size_t k = 0; k < topo.edges.size(); ++k)
    if (len[k] < threshold) order.push_back(static_cast<Index>(k));
  if (order.empty()) return 0;
  std::sort(order.begin(), order.end(), [&](Index x, Index y) { return std::tie(len[x], x) < std::tie(len[y], y); });

  std::vector<char> locked(m.num_vertices(), 0), dead_tri(m.num_triangles(), 0);
  int count = 0;
  for (Index k : order) {
    const Edge& e = topo.edges[k];
    if (locked[e.a] || locked[e.b]) continue;
    const auto p1 = plan_collapse(m, topo, e, e.a, e.b, split_threshold);
    const auto p2 = plan_collapse(m, topo, e, e.b, e.a, split_threshold);
    if (!p1.ok && !p2.ok) continue;
    const bool first = p1.ok && (!p2.ok || p1.min_quality >= p2.min_quality);
    const Index v = first ? e.a : e.b, w = first ? e.b : e.a;
    for (Index x : neighbors(m, topo, v)) locked[x] = 1;
    locked[v] = locked[w] = 1;
    for (Index t : topo.ball(v)) {
      Triangle& tri = m.tris[t];
      if (std::find(tri.begin(), tri.end(), w) != tri.end()) {
        dead_tri[t] = 1;
        continue;
      }
      for (Index& x : tri)
        if (x == v) x = w;
    }
    ++count;
  }
  if (count) m.compact(dead_tri);
  return count;
}

// ---------------------------------------------------------------------------
// flip

/// Maps x to L^T x with M = L L^T, so metric lengths become Euclidean.
struct MetricFrame {
  double s11, s12, s22;
  explicit MetricFrame(const SymTensor2& m) {
    s11 = std::sqrt(m.a11);
    s12 = m.a12 / s11;
    s22 = std::sqrt(std::max(m.a22 - s12 * s12, 0.0));
  }
  Vec2 operator()(Vec2 x) const { return {s11 * x.x + s12 * x.y, s22 * x.y}; }
};

/// Positive when d lies strictly inside the circle through ccw a, b, c,
/// normalized to be scale-free.
double incircle_relative(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 ad = a - d, bd = b - d, cd = c - d;
  const double la = norm2(ad), lb = norm2(bd), lc = norm2(cd);
  const double det = la * cross(bd, cd) + lb * cross(cd, ad) + lc * cross(ad, bd);
  const double mag = la * std::sqrt(lb * lc) + lb * std::sqrt(la * lc) + lc * std::sqrt(la * lb);
  return mag > 0.0 ? det / mag : 0.0;
}

int flip_pass(WorkMesh& m) {
  const Topo topo = m.topology();
  std::vector<char> touched(m.num_triangles(), 0), gained(m.num_vertices(), 0);
  int count = 0;
  for (const Edge& e : topo.edges) {
    if (e.t1 == kNoIndex || touched[e.t0] || touched[e.t1]) continue;
    const Index a = e.a, b = e.b, c = m.tris[e.t0][e.i0], d = m.tris[e.t1][e.i1];
    if (gained[c] || gained[d]) continue;
    const Vec2 pa = m.pts[a], pb = m.pts[b], pc = m.pts[c], pd = m.pts[d];
    const double scale = std::max(norm2(pc - pd), norm2(pb - pa));
    if (!(orient2d(pa, pd, pc) > 1e-10 * scale) || !(orient2d(pd, pb, pc) > 1e-10 * scale)) continue;

    const MetricFrame frame(0.25 * (m.met[a] + m.met[b] + m.met[c] + m.met[d]));
    if (!(incircle_relative(frame(pa), frame(pb), frame(pc), frame(pd)) > 1e-9)) continue;

    bool exists = false;
    for (Index t : topo.ball(c)) {
      const auto& tri = m.tris[t];
      if (std::find(tri.begin(), tri.end(), d) != tri.end()) exists = true;
    }
    if (exists) continue;

    m.tris[e.t0] = {a, d, c};
    m.tris[e.t1] = {d, b, c};
    touched[e.t0] = touched[e.t1] = 1;
    gained[c] = gained[d] = 1;
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// smooth

int smooth_pass(WorkMesh& m) {
  const Topo topo = m.topology();
  int moves = 0;
  std::vector<Triangle> ball_tris;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    if (m.is_corner(v)) continue;
    const bool boundary = m.is_boundary(v);
    if (boundary && !straight_boundary_at(m, topo, v)) continue;

    const Vec2 p = m.pts[v];
    Vec2 target{};
    double wsum = 0.0;
    for (Index x : neighbors(m, topo, v)) {
      const double l = m.length(v, x);
      target += l * m.pts[x];
      wsum += l;
    }
    if (!(wsum > 0.0)) continue;
    target = (1.0 / wsum) * target;

    Vec2 line_a{}, line_b{};
    if (boundary) {
      line_a = m.pts[topo.boundary_neighbors[v][0]];
      line_b = m.pts[topo.boundary_neighbors[v][1]];
    }

    const auto ball = topo.ball(v);
    double old_sum = 0.0;
    for (Index t : ball) old_sum += m.quality(m.tris[t]);

    for (double relax : {1.0, 0.5, 0.25}) {
      Vec2 q = p + relax * (target - p);
      if (boundary) {
        const Vec2 d = line_b - line_a;
        const double s = std::clamp(dot(q - line_a, d) / norm2(d), 0.05, 0.95);
        q = line_a + s * d;
      }
      if (norm2(q - p) == 0.0) break;
      Index h = m.hint[v];
      SymTensor2 mq;
      try {
        mq = m.metric_at(q, h);
      } catch (const PointOutsideDomain&) {
        continue;
      }
      const Vec2 old_p = p;
      const SymTensor2 old_m = m.met[v];
      m.pts[v] = q;
      m.met[v] = mq;
      bool ok = true;
      double new_sum = 0.0;
      for (Index t : ball) {
        const auto& tri = m.tris[t];
        std::array<Vec2, 3> before{};
        for (int i = 0; i < 3; ++i) before[i] = tri[i] == v ? old_p : m.pts[tri[i]];
        const double old_area = orient2d(before[0], before[1], before[2]);
        const double new_area = orient2d(m.pts[tri[0]], m.pts[tri[1]], m.pts[tri[2]]);
        if (!(new_area >= 0.1 * old_area) || !(new_area > 0.0)) {
          ok = false;
          break;
        }
        new_sum += m.quality(tri);
      }
      if (ok && new_sum >= old_sum) {
        m.hint[v] = h;
        ++moves;
        break;
      }
      m.pts[v] = old_p;
      m.met[v] = old_m;
    }
  }
  return moves;
}

double unit_fraction(const WorkMesh& m, double lo, double hi) {
  const Topo topo = m.topology();
  const auto len = edge_lengths(m, topo);
  if (len.empty()) return 0.0;
  const auto inside = std::count_if(len.begin(), len.end(), [&](double l) { return l >= lo && l <= hi; });
  return static_cast<double>(inside) / static_cast<double>(len.size());
}

}  // namespace

void check_config(const AdaptConfig& c) {
  if (!(c.collapse_threshold < 1.0 && 1.0 < c.split_threshold)) {
    throw ValidationError("thresholds must satisfy collapse < 1 < split");
  }
  if (c.iterations < 1) throw ValidationError("iterations must be >= 1");
  if (c.n_target < 1) throw ValidationError("n_target must be >= 1");
  if (c.max_local_passes < 1) throw ValidationError("max_local_passes must be >= 1");
  if (c.smoothing_passes < 0) throw ValidationError("smoothing_passes must be >= 0");
  if ((c.metric.alpha0 && !(*c.metric.alpha0 > 0.0)) || (c.metric.alpha1 && !(*c.metric.alpha1 > 0.0))) {
    throw NonPositiveAlpha("flooring parameters must be positive");
  }
}

double metric_quality(Vec2 a, Vec2 b, Vec2 c, const SymTensor2& ma, const SymTensor2& mb, const SymTensor2& mc) {
  const SymTensor2 mean = (1.0 / 3.0) * (ma + mb + mc);
  const double area = 0.5 * orient2d(a, b, c) * std::sqrt(std::max(mean.det(), 0.0));
  const double lab = metric_length(ma, mb, b - a);
  const double lbc = metric_length(mb, mc, c - b);
  const double lca = metric_length(mc, ma, a - c);
  const double denom = lab * lab + lbc * lbc + lca * lca;
  return denom > 0.0 ? 4.0 * kSqrt3 * area / denom : 0.0;
}

TriMesh split_long_edges(const TriMesh& mesh, const NodalTensorField& metric, double threshold) {
  WorkMesh m(mesh, metric);
  split_pass(m, threshold);
  return m.to_mesh();
}

TriMesh collapse_short_edges(const TriMesh& mesh, const NodalTensorField& metric, double threshold,
                             double split_threshold) {
  WorkMesh m(mesh, metric);
  collapse_pass(m, threshold, split_threshold);
  return m.to_mesh();
}

TriMesh flip_edges(const TriMesh& mesh, const NodalTensorField& metric, int max_passes) {
  WorkMesh m(mesh, metric);
  for (int pass = 0; pass < max_passes && flip_pass(m) > 0; ++pass) {
  }
  return m.to_mesh();
}

TriMesh smooth_vertices(const TriMesh& mesh, const NodalTensorField& metric, int passes) {
  WorkMesh m(mesh, metric);
  for (int pass = 0; pass < passes; ++pass) smooth_pass(m);
  return m.to_mesh();
}

TriMesh adapt_mesh(const TriMesh& mesh, const NodalTensorField& metric, const AdaptConfig& config,
                   RemeshStats* stats) {
  check_config(config);
  WorkMesh m(mesh, metric);
  RemeshStats local;
  auto checkpoint = [&] {
    if (config.validate_each_step) (void)m.to_mesh();
  };
  for (int sweep = 0; sweep < config.max_local_passes; ++sweep) {
    const double edges_before = 1.5 * static_cast<double>(m.num_triangles());
    const int s = split_pass(m, config.split_threshold);
    checkpoint();
    const int c = collapse_pass(m, config.collapse_threshold, config.split_threshold);
    checkpoint();
    int f = 0;
    for (int pass = 0; pass < 5; ++pass) {
      const int n = flip_pass(m);
      f += n;
      if (n == 0) break;
    }
    checkpoint();
    for (int pass = 0; pass < config.smoothing_passes; ++pass) local.moves += smooth_pass(m);
    checkpoint();

    local.splits += s;
    local.collapses += c;
    local.flips += f;
    local.sweeps = sweep + 1;
    local.changes_per_sweep.push_back(s + c + f);
    if (stats) local.unit_fraction_per_sweep.push_back(unit_fraction(m, config.collapse_threshold, config.split_threshold));
    if (s + c + f < 0.01 * edges_before) break;
  }
  if (stats) *stats = std::move(local);
  return m.to_mesh();
}

NodalTensorField sample_metric(const TriMesh& mesh, const TriMesh& background, const NodalTensorField& metric) {
  NodalTensorField out;
  out.role = metric.role;
  out.values.resize(mesh.num_vertices());
  Index hint = 0;
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const auto loc = locate_point(background, mesh.vertex(v), hint);
    hint = loc.triangle;
    out.values[v] = interpolate_metric(background, metric, loc);
  }
  return out;
}

std::vector<double> metric_edge_lengths(const TriMesh& mesh, const TriMesh& background,
                                        const NodalTensorField& metric) {
  const auto at = sample_metric(mesh, background, metric);
  const auto edges = mesh.edges();
  std::vector<double> out(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [a, b] = edges[k];
    out[k] = metric_length(at[a], at[b], mesh.vertex(b) - mesh.vertex(a));
  }
  return out;
}

}  // namespace anisomesh
