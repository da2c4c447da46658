#include <doctest.h>

#include "oracles.hpp"
#include "relhyp/experiments.hpp"
#include "relhyp/qi.hpp"

using namespace relhyp;

namespace {

BallParams params(int r, int rh, bool exact = false) {
  BallParams p;
  p.radius = r;
  p.rh = rh;
  p.exactness_check = exact;
  return p;
}

}  // namespace

TEST_CASE("identity map is a 1-0-0 quasi-isometry") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  auto ball = relative_ball(f2, {"a", "b"}, {}, params(2, 0));
  std::vector<int> id(static_cast<size_t>(ball.vertex_count()));
  for (int v = 0; v < ball.vertex_count(); ++v) id[static_cast<size_t>(v)] = v;
  QIVerdict v = check_qi_map(ball, ball, id, Rational(1, 1), Rational(0, 1), Rational(0, 1));
  CHECK(v.pass());
  CHECK(v.checked_pairs == static_cast<size_t>(ball.vertex_count()) *
                               (static_cast<size_t>(ball.vertex_count()) - 1) / 2);
}

TEST_CASE("constant map fails the lower bound with a witness") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  auto ball = relative_ball(f2, {"a", "b"}, {}, params(2, 0));
  std::vector<int> constant(static_cast<size_t>(ball.vertex_count()), 0);
  QIVerdict v = check_qi_map(ball, ball, constant, Rational(1, 1), Rational(0, 1),
                             Rational(2, 1));
  CHECK_FALSE(v.lower.pass);
  REQUIRE(v.lower.witness.size() == 2);
  // The witness reproduces a genuine violation: d1 > 0 but d2 = 0.
  CHECK(ball.distance(v.lower.witness[0], v.lower.witness[1]) > 0);
  CHECK(v.upper.pass);
}

TEST_CASE("alpha into the coset ball passes with lambda 2, c 1/2, eps 1") {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  std::vector<SubgroupSpec> paras{SubgroupSpec::coordinate_lattice({"a"})};
  auto rel = relative_ball(z2, {"b"}, paras, params(4, 8));
  auto cos = coset_ball(z2, {"b"}, paras, params(4, 8));
  auto sub = z2->parabolic(paras[0]);
  std::vector<int> alpha;
  for (int v = 0; v < rel.vertex_count(); ++v) {
    int id = cos.find_vertex("H0|" + format_word(sub.left_rep(rel.vertex(v).word)));
    REQUIRE(id >= 0);
    alpha.push_back(id);
  }
  QIVerdict v = check_qi_map(rel, cos, alpha, Rational(2, 1), Rational(1, 2), Rational(1, 1));
  CHECK(v.pass());
}

TEST_CASE("eqdef on Z^2 relative to <a>") {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  EqdefReport rep = eqdef_check(z2, {"b"}, {SubgroupSpec::coordinate_lattice({"a"})},
                                params(4, 8, true));
  CHECK(rep.alpha.upper.pass);    // Eq. (1)
  CHECK(rep.alpha.lower.pass);    // Eq. (2)
  CHECK(rep.alpha.density.pass);  // eps = 1
  CHECK(rep.alpha.skipped_pairs == 0);
  CHECK_FALSE(rep.provisional);
  CHECK_FALSE(rep.coned_applicable);  // b alone does not generate Z^2
  CHECK(rep.pass());
}

TEST_CASE("eqdef on the HNN example relative to its base") {
  auto g = Group::create(GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::folded({"a"}),
                                        SubgroupSpec::folded({"a"})));
  EqdefReport rep = eqdef_check(g, {"t"}, {SubgroupSpec::whole()}, params(3, 6, true));
  CHECK(rep.alpha.upper.pass);
  CHECK(rep.alpha.lower.pass);
  CHECK(rep.alpha.density.pass);
  CHECK(rep.alpha.skipped_pairs == 0);
  CHECK_FALSE(rep.provisional);
}

TEST_CASE("eqdef degenerate case: the whole group as the parabolic") {
  auto f2 = Group::create(GroupSpec::free_group(2));
  EqdefReport rep = eqdef_check(f2, {"a", "b"}, {SubgroupSpec::whole()}, params(3, 2));
  // One coset: Eq. (2) forces every relative distance <= 1, which the single
  // parabolic edge per pair provides.
  CHECK(rep.alpha.pass());
  CHECK(rep.coset.vertex_count() == 1);
}

TEST_CASE("eqdef includes the coned-off comparison when X generates") {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  EqdefReport rep = eqdef_check(z2, {"a", "b"}, {SubgroupSpec::coordinate_lattice({"a"})},
                                params(3, 6, true));
  CHECK(rep.coned_applicable);
  CHECK(rep.alpha.pass());
  CHECK(rep.iota.lower.pass);  // the identity embedding is isometric
  CHECK(rep.iota.upper.pass);
  CHECK(rep.iota.density.pass);
}

TEST_CASE("lipschitz orbit bound") {
  auto g = Group::create(GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::folded({"a"}),
                                        SubgroupSpec::folded({"a"})));
  auto cos = coset_ball(g, {"t"}, {SubgroupSpec::whole()}, params(3, 3));
  auto tree = bass_serre_ball(g, params(3, 3));

  SUBCASE("identity on one graph") {
    std::vector<int> id(static_cast<size_t>(cos.vertex_count()));
    for (int v = 0; v < cos.vertex_count(); ++v) id[static_cast<size_t>(v)] = v;
    LipschitzReport rep = lipschitz_orbit_bound(cos, cos, id, true);
    CHECK(rep.pass());
    CHECK(rep.m_forward == Rational(1, 1));
  }

  SUBCASE("coset ball against the Bass-Serre tree") {
    std::vector<int> beta;
    for (int v = 0; v < cos.vertex_count(); ++v) {
      int id = tree.find_vertex(cos.vertex(v).key);
      REQUIRE(id >= 0);
      beta.push_back(id);
    }
    LipschitzReport rep = lipschitz_orbit_bound(cos, tree, beta, true);
    CHECK(rep.pass());
    CHECK(rep.classes_constant);
    CHECK(rep.bijective);
    CHECK(rep.m_forward == Rational(1, 1));
    CHECK(rep.m_backward == Rational(1, 1));
  }

  SUBCASE("collapsing map is not a quasi-isometry") {
    std::vector<int> constant(static_cast<size_t>(cos.vertex_count()), 0);
    LipschitzReport rep = lipschitz_orbit_bound(cos, tree, constant, true);
    CHECK(rep.m_forward == Rational(0, 1));
    CHECK(rep.forward_ok);
    CHECK_FALSE(rep.pass());
  }
}

TEST_CASE("presets run end to end") {
  PresetResult tc = run_preset("tree-compare", 0, 2);
  CHECK(tc.pass);
  CHECK(tc.files.size() == 1);

  PresetResult ck = run_preset("commutator-kernel", 0, 2);
  CHECK(ck.pass);

  CHECK_THROWS_AS(run_preset("nope", 0, 1), Error);
}
