#include "relhyp/hyperbolicity.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace relhyp {

namespace {

constexpr int kExactGate = 400;
constexpr int kBaseGate = 3000;

const char* kBoundaryCaveat =
    "ball-boundary caveat: delta of a finite ball is evidence about the infinite graph, "
    "not a proof; ";

struct Best {
  std::int64_t defect = -1;
  std::vector<int> witness;

  void offer(std::int64_t d, std::initializer_list<int> w) {
    if (d < defect) return;
    std::vector<int> ww(w);
    if (d > defect || ww < witness) {
      defect = d;
      witness = std::move(ww);
    }
  }

  void merge(const Best& o) {
    if (o.defect < 0) return;
    if (o.defect > defect || (o.defect == defect && (witness.empty() || o.witness < witness)))
      *this = o;
  }
};

// Dense all-pairs table for the scan loops.
std::vector<std::int64_t> all_pairs(const LabeledGraph& g) {
  const size_t n = static_cast<size_t>(g.vertex_count());
  std::vector<std::int64_t> d(n * n);
  for (size_t u = 0; u < n; ++u) {
    auto row = g.dist_row(static_cast<int>(u));
    std::copy(row->begin(), row->end(), d.begin() + static_cast<std::ptrdiff_t>(u * n));
  }
  return d;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace

std::string delta_method_name(DeltaMethod m) {
  switch (m) {
    case DeltaMethod::FourPointExact:
      return "four-point-exact";
    case DeltaMethod::FourPointBase:
      return "four-point-basepoint";
    case DeltaMethod::Slim:
      return "slim";
  }
  return "?";
}

std::int64_t four_point_defect(const LabeledGraph& g, int a, int b, int c, int d) {
  std::int64_t s1 = g.distance(a, b) + g.distance(c, d);
  std::int64_t s2 = g.distance(a, c) + g.distance(b, d);
  std::int64_t s3 = g.distance(a, d) + g.distance(b, c);
  std::int64_t hi = std::max({s1, s2, s3});
  std::int64_t lo = std::min({s1, s2, s3});
  return hi - (s1 + s2 + s3 - hi - lo);  // largest minus middle
}

std::int64_t base_defect(const LabeledGraph& g, int w, int x, int y, int z) {
  auto p = [&](int u, int v) { return g.distance(u, w) + g.distance(v, w) - g.distance(u, v); };
  return std::min(p(x, z), p(y, z)) - p(x, y);
}

DeltaReport delta_four_point(const LabeledGraph& g, bool basepoint_mode, int threads) {
  const int n = g.vertex_count();
  if (n == 0) fail(ErrorCode::Invalid, "delta of an empty graph");
  if (!g.connected()) fail(ErrorCode::Invalid, "delta of a disconnected graph");
  if (!basepoint_mode && n > kExactGate)
    fail(ErrorCode::Gate, "exact four-point mode is gated to 400 vertices; got " +
                              std::to_string(n));
  if (basepoint_mode && n > kBaseGate)
    fail(ErrorCode::Gate, "basepoint four-point mode is gated to 3000 vertices; got " +
                              std::to_string(n));

  DeltaReport rep;
  rep.method = basepoint_mode ? DeltaMethod::FourPointBase : DeltaMethod::FourPointExact;
  rep.scale = g.meta().scale;
  rep.n_vertices = n;
  rep.note = kBoundaryCaveat;
  if (basepoint_mode)
    rep.note += "basepoint mode is within a factor of 2 of the exact four-point value; ";
  if (n == 1) return rep;

  auto dm = all_pairs(g);
  auto d = [&](int u, int v) { return dm[static_cast<size_t>(u) * static_cast<size_t>(n) + static_cast<size_t>(v)]; };

  const int nt = thread_count(threads);
  std::vector<Best> bests(static_cast<size_t>(nt));
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      Best& best = bests[static_cast<size_t>(t)];
      if (basepoint_mode) {
        const int w = 0;  // the ball center is vertex 0 by construction
        for (int x = t; x < n; x += nt) {
          for (int y = x + 1; y < n; ++y) {
            std::int64_t pxy = d(x, w) + d(y, w) - d(x, y);
            for (int z = 0; z < n; ++z) {
              std::int64_t pxz = d(x, w) + d(z, w) - d(x, z);
              std::int64_t pyz = d(y, w) + d(z, w) - d(y, z);
              std::int64_t def = std::min(pxz, pyz) - pxy;
              if (def >= best.defect) best.offer(def, {w, x, y, z});
            }
          }
        }
      } else {
        for (int a = t; a < n; a += nt) {
          for (int b = a + 1; b < n; ++b) {
            std::int64_t dab = d(a, b);
            for (int c = b + 1; c < n; ++c) {
              std::int64_t dac = d(a, c), dbc = d(b, c);
              for (int e = c + 1; e < n; ++e) {
                std::int64_t s1 = dab + d(c, e);
                std::int64_t s2 = dac + d(b, e);
                std::int64_t s3 = d(a, e) + dbc;
                std::int64_t hi = s1 > s2 ? (s1 > s3 ? s1 : s3) : (s2 > s3 ? s2 : s3);
                std::int64_t lo = s1 < s2 ? (s1 < s3 ? s1 : s3) : (s2 < s3 ? s2 : s3);
                std::int64_t def = 2 * hi - s1 - s2 - s3 + lo;
                if (def >= best.defect) best.offer(def, {a, b, c, e});
              }
            }
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  Best total;
  for (const Best& b : bests) total.merge(b);
  rep.delta_num = std::max<std::int64_t>(total.defect, 0);
  rep.witness = total.witness;
  return rep;
}

DeltaReport delta_slim(const LabeledGraph& g, std::size_t budget, std::size_t geodesic_cap) {
  const int n = g.vertex_count();
  if (n == 0) fail(ErrorCode::Invalid, "delta of an empty graph");
  if (!g.connected()) fail(ErrorCode::Invalid, "delta of a disconnected graph");
  DeltaReport rep;
  rep.method = DeltaMethod::Slim;
  rep.scale = g.meta().scale;
  rep.n_vertices = n;
  rep.note = kBoundaryCaveat;

  std::size_t used = 0;
  bool exhaustive = true;  // all configurations examined, none truncated
  bool stop = false;       // configuration budget exhausted
  std::int64_t worst = 0;
  std::vector<int> witness;
  for (int x = 0; x < n && !stop; ++x) {
    for (int y = x + 1; y < n && !stop; ++y) {
      auto [geo_xy, trunc_xy] = g.all_geodesics(x, y, geodesic_cap);
      for (int z = y + 1; z < n; ++z) {
        auto [geo_xz, trunc_xz] = g.all_geodesics(x, z, geodesic_cap);
        auto [geo_yz, trunc_yz] = g.all_geodesics(y, z, geodesic_cap);
        if (trunc_xy || trunc_xz || trunc_yz) exhaustive = false;
        std::size_t configs = geo_xy.size() * geo_xz.size() * geo_yz.size();
        if (used + configs > budget) {
          exhaustive = false;
          stop = true;
          break;
        }
        used += configs;
        for (const auto& sxy : geo_xy)
          for (const auto& sxz : geo_xz)
            for (const auto& syz : geo_yz) {
              const std::vector<int>* sides[3] = {&sxy, &sxz, &syz};
              std::int64_t tri = 0;
              for (int s = 0; s < 3; ++s) {
                for (int pvert : *sides[s]) {
                  std::int64_t best = -1;
                  for (int o = 0; o < 3; ++o) {
                    if (o == s) continue;
                    for (int q : *sides[o]) {
                      std::int64_t dq = g.distance(pvert, q);
                      if (best < 0 || dq < best) best = dq;
                    }
                  }
                  tri = std::max(tri, best);
                }
              }
              if (2 * tri > worst || (2 * tri == worst && witness.empty())) {
                worst = 2 * tri;
                witness = {x, y, z};
              }
            }
      }
    }
  }
  rep.exhaustive = exhaustive;
  rep.note += exhaustive ? "slim scan exhaustive; " : "slim scan sampled; ";
  rep.delta_num = worst;
  rep.witness = witness;
  return rep;
}

DeltaSeries delta_series(const std::function<LabeledGraph(int)>& builder,
                         const std::vector<int>& radii, DeltaMethod method, int threads,
                         std::size_t slim_budget) {
  for (size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i] >= radii[i + 1]) fail(ErrorCode::Invalid, "radii must increase");
  DeltaSeries out;
  out.radii = radii;
  for (int r : radii) {
    LabeledGraph g = builder(r);
    switch (method) {
      case DeltaMethod::FourPointExact:
        out.reports.push_back(delta_four_point(g, false, threads));
        break;
      case DeltaMethod::FourPointBase:
        out.reports.push_back(delta_four_point(g, true, threads));
        break;
      case DeltaMethod::Slim:
        out.reports.push_back(delta_slim(g, slim_budget));
        break;
    }
  }
  if (out.reports.size() < 3) {
    out.verdict = "inconclusive";
    return out;
  }
  auto v = [&](size_t back) {
    const DeltaReport& r = out.reports[out.reports.size() - 1 - back];
    return std::pair(r.delta_num, r.scale);
  };
  auto [d2, s2] = v(2);
  auto [d1, s1] = v(1);
  auto [d0, s0] = v(0);
  // Compare true values d / (2 scale) by cross-multiplying.
  auto cmp = [](std::pair<std::int64_t, int> a, std::pair<std::int64_t, int> b) {
    return a.first * b.second - b.first * a.second;  // sign of a - b
  };
  if (cmp({d2, s2}, {d1, s1}) == 0 && cmp({d1, s1}, {d0, s0}) == 0)
    out.verdict = "bounded";
  else if (cmp({d2, s2}, {d1, s1}) <= 0 && cmp({d1, s1}, {d0, s0}) <= 0 &&
           cmp({d2, s2}, {d0, s0}) < 0)
    out.verdict = "growing";
  else
    out.verdict = "inconclusive";
  return out;
}

std::string delta_series_csv(const DeltaSeries& s) {
  std::ostringstream out;
  out << "radius,n_vertices,method,delta_numerator,scale,verdict\n";
  for (size_t i = 0; i < s.reports.size(); ++i) {
    const DeltaReport& r = s.reports[i];
    out << s.radii[i] << ',' << r.n_vertices << ',' << delta_method_name(r.method) << ','
        << r.delta_num << ',' << r.scale << ',' << s.verdict << '\n';
  }
  return out.str();
}

}  // namespace relhyp
