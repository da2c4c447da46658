#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "relhyp/hyperbolicity.hpp"

using namespace relhyp;

namespace {

BallParams params(int r, int rh) {
  BallParams p;
  p.radius = r;
  p.rh = rh;
  p.exactness_check = false;
  return p;
}

LabeledGraph cycle_graph(int n) {
  std::ostringstream js;
  js << R"({"vertices":[)";
  for (int i = 0; i < n; ++i) js << (i ? "," : "") << R"({"id":)" << i << "}";
  js << R"(],"edges":[)";
  for (int i = 0; i < n; ++i)
    js << (i ? "," : "") << R"({"from":)" << i << R"(,"to":)" << (i + 1) % n
       << R"(,"label":"c","length":1})";
  js << R"(],"meta":{"scale":1,"kind":"loaded"}})";
  return LabeledGraph::from_json(js.str());
}

// Direct definitional oracle: the worst basepointed defect over all ordered
// quadruples.
std::int64_t brute_force_four_point(const LabeledGraph& g) {
  std::int64_t worst = 0;
  for (int w = 0; w < g.vertex_count(); ++w)
    for (int x = 0; x < g.vertex_count(); ++x)
      for (int y = 0; y < g.vertex_count(); ++y)
        for (int z = 0; z < g.vertex_count(); ++z)
          worst = std::max(worst, base_defect(g, w, x, y, z));
  return worst;
}

}  // namespace

TEST_CASE("trees are 0-hyperbolic under every method") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  auto ball = relative_ball(f2, {"a", "b"}, {}, params(3, 0));
  CHECK(delta_four_point(ball, false).delta_num == 0);
  CHECK(delta_four_point(ball, true).delta_num == 0);
  auto slim = delta_slim(ball, 200000);
  CHECK(slim.delta_num == 0);
  CHECK(slim.exhaustive);
}

TEST_CASE("Bass-Serre tree balls are 0-hyperbolic under both methods") {
  auto g = Group::create(GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::trivial(),
                                        SubgroupSpec::trivial()));
  auto tree = bass_serre_ball(g, params(2, 1));
  CHECK(delta_four_point(tree, false).delta_num == 0);
  CHECK(delta_four_point(tree, true).delta_num == 0);
  CHECK(delta_slim(tree, 100000).delta_num == 0);
}

TEST_CASE("cycle graph matches the definitional oracle") {
  LabeledGraph c8 = cycle_graph(8);
  DeltaReport rep = delta_four_point(c8, false);
  CHECK(rep.delta_num == brute_force_four_point(c8));
  CHECK(rep.delta_num == 4);  // delta = 2: antipodal quadruple 0,2,4,6

  // The reported witness reproduces the value.
  REQUIRE(rep.witness.size() == 4);
  CHECK(four_point_defect(c8, rep.witness[0], rep.witness[1], rep.witness[2], rep.witness[3]) ==
        rep.delta_num);
}

TEST_CASE("four-point defect is permutation invariant") {
  LabeledGraph c8 = cycle_graph(8);
  auto gen = testing::rng(41);
  std::uniform_int_distribution<int> pick(0, 7);
  for (int i = 0; i < 50; ++i) {
    int a = pick(gen), b = pick(gen), c = pick(gen), d = pick(gen);
    std::int64_t base = four_point_defect(c8, a, b, c, d);
    CHECK(four_point_defect(c8, b, a, d, c) == base);
    CHECK(four_point_defect(c8, c, d, a, b) == base);
    CHECK(four_point_defect(c8, d, c, b, a) == base);
  }
}

TEST_CASE("flat geometry: delta grows with the radius") {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  auto small = relative_ball(z2, {"a", "b"}, {}, params(3, 0));
  auto large = relative_ball(z2, {"a", "b"}, {}, params(6, 0));
  auto d_small = delta_four_point(small, false);
  auto d_large = delta_four_point(large, false, 4);
  CHECK(d_large.delta_num > d_small.delta_num);
}

TEST_CASE("delta is monotone under isometric ball nesting") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  for (const auto& g : {f2, z2}) {
    auto small = relative_ball(g, {"a", "b"}, {}, params(2, 0));
    auto large = relative_ball(g, {"a", "b"}, {}, params(3, 0));
    // First certify the embedding is isometric on the nested vertex set.
    std::vector<int> map;
    for (int v = 0; v < small.vertex_count(); ++v) {
      int id = large.find_vertex(small.vertex(v).key);
      REQUIRE(id >= 0);
      map.push_back(id);
    }
    bool isometric = true;
    for (int u = 0; u < small.vertex_count(); ++u)
      for (int v = 0; v < small.vertex_count(); ++v)
        if (small.distance(u, v) !=
            large.distance(map[static_cast<size_t>(u)], map[static_cast<size_t>(v)]))
          isometric = false;
    REQUIRE(isometric);
    CHECK(delta_four_point(small, false).delta_num <=
          delta_four_point(large, false).delta_num);
  }
}

TEST_CASE("basepoint mode is within a factor two of exact") {
  LabeledGraph c8 = cycle_graph(8);
  auto exact = delta_four_point(c8, false);
  auto base = delta_four_point(c8, true);
  CHECK(base.delta_num <= exact.delta_num);
  CHECK(exact.delta_num <= 2 * base.delta_num);
}

TEST_CASE("slim triangles on a small flat patch") {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  auto ball = relative_ball(z2, {"a", "b"}, {}, params(2, 0));
  auto rep = delta_slim(ball, 500000, 6);
  CHECK(rep.exhaustive);
  // The triangle e, ab, a b^-1 has a midpoint at distance 1 from the other
  // sides; slim delta is at least 1 (scaled numerator 2).
  CHECK(rep.delta_num >= 2);
  // Zero together with four-point zero, finite together: flat patch has both
  // positive.
  CHECK(delta_four_point(ball, false).delta_num > 0);
}

TEST_CASE("accuracy gates refuse instead of sampling") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  auto big = relative_ball(f2, {"a", "b"}, {}, params(5, 0));  // 485 vertices
  CHECK_THROWS_AS(delta_four_point(big, false), Error);
  CHECK_NOTHROW(delta_four_point(big, true));
}

TEST_CASE("delta series verdicts") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  DeltaSeries s = delta_series(
      [&](int r) { return relative_ball(f2, {"a", "b"}, {}, params(r, 0)); }, {2, 3, 4, 5},
      DeltaMethod::FourPointBase);
  CHECK(s.verdict == "bounded");
  for (const DeltaReport& r : s.reports) CHECK(r.delta_num == 0);

  std::string csv = delta_series_csv(s);
  CHECK(csv.find("radius,n_vertices,method,delta_numerator,scale,verdict") == 0);
  CHECK(csv.find("bounded") != std::string::npos);

  CHECK_THROWS_AS(delta_series([&](int r) { return relative_ball(f2, {"a"}, {}, params(r, 0)); },
                               {3, 2}, DeltaMethod::FourPointBase),
                  Error);
}
