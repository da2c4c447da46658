#include "relhyp/experiments.hpp"

#include <random>
#include <sstream>

#include <json.hpp>

#include "relhyp/hyperbolicity.hpp"
#include "relhyp/qi.hpp"

namespace relhyp {

namespace {

using nlohmann::json;

PresetResult z_chain(unsigned seed, int threads) {
  PresetResult res;
  res.name = "z-chain";
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  auto z3 = Group::create(GroupSpec::free_abelian(3));
  SubgroupSpec a_line = SubgroupSpec::coordinate_lattice({"a"});
  std::vector<int> radii{3, 4, 5, 6};

  auto build = [&](const GroupPtr& g, std::vector<std::string> x) {
    return [&, x](int r) {
      BallParams p;
      p.radius = r;
      p.rh = 1;
      p.exactness_check = false;
      return relative_ball(g, x, {a_line}, p);
    };
  };
  DeltaSeries s2 = delta_series(build(z2, {"b"}), radii, DeltaMethod::FourPointExact, threads);
  DeltaSeries s3 =
      delta_series(build(z3, {"b", "c"}), radii, DeltaMethod::FourPointExact, threads);

  res.files.emplace_back("z2_rel_z_series.csv", delta_series_csv(s2));
  res.files.emplace_back("z3_rel_z_series.csv", delta_series_csv(s3));
  res.pass = s2.verdict == "bounded" && s3.verdict == "growing";
  std::ostringstream sum;
  sum << "Z^2 rel <a>: " << s2.verdict << "; Z^3 rel <a>: " << s3.verdict
      << " (seed " << seed << ")";
  res.summary = sum.str();
  return res;
}

PresetResult tree_compare(unsigned seed, int threads) {
  PresetResult res;
  res.name = "tree-compare";
  json report = json::array();
  bool pass = true;

  struct Example {
    std::string name;
    GroupSpec spec;
    int radius;
    int rh;
  };
  std::vector<Example> examples;
  examples.push_back({"hnn-z-squared",
                      GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::folded({"a"}),
                                     SubgroupSpec::folded({"a"})),
                      4, 4});
  examples.push_back({"hnn-free-trivial",
                      GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::trivial(),
                                     SubgroupSpec::trivial()),
                      2, 2});
  examples.push_back({"hnn-commutator-kernel",
                      GroupSpec::hnn(GroupSpec::free_group(2),
                                     SubgroupSpec::commutator_kernel(),
                                     SubgroupSpec::commutator_kernel()),
                      2, 1});

  for (const Example& ex : examples) {
    auto g = Group::create(ex.spec);
    BallParams p;
    p.radius = ex.radius;
    p.rh = ex.rh;
    p.exactness_check = false;
    LabeledGraph cos = coset_ball(g, {g->spec().stable}, {SubgroupSpec::whole()}, p);
    LabeledGraph tree = bass_serre_ball(g, p);

    json ej;
    ej["example"] = ex.name;
    ej["coset_vertices"] = cos.vertex_count();
    ej["tree_vertices"] = tree.vertex_count();
    bool tree_ok = tree.acyclic() && tree.connected();
    ej["tree_acyclic"] = tree_ok;

    DeltaReport dr = delta_four_point(cos, false, threads);
    ej["coset_delta_num"] = dr.delta_num;
    bool delta_zero = dr.delta_num == 0;

    bool matched = true;
    std::vector<int> beta(static_cast<size_t>(cos.vertex_count()), -1);
    for (int v = 0; v < cos.vertex_count() && matched; ++v) {
      int id = tree.find_vertex(cos.vertex(v).key);
      if (id < 0)
        matched = false;
      else
        beta[static_cast<size_t>(v)] = id;
    }
    bool lip_ok = false;
    if (matched) {
      LipschitzReport lr = lipschitz_orbit_bound(cos, tree, beta, true);
      lip_ok = lr.pass();
      ej["lipschitz"] = json::parse(lr.to_json());
    }
    ej["vertex_match"] = matched;
    bool ok = tree_ok && (delta_zero || (matched && lip_ok));
    ej["pass"] = ok;
    pass = pass && ok;
    report.push_back(std::move(ej));
  }
  res.files.emplace_back("tree_compare.json",
                         json{{"seed", seed}, {"examples", report}}.dump(2));
  res.pass = pass;
  res.summary = pass ? "all coset balls match Bass-Serre tree geometry"
                     : "tree comparison failed; see tree_compare.json";
  return res;
}

PresetResult commutator_kernel(unsigned seed, int threads) {
  (void)threads;
  PresetResult res;
  res.name = "commutator-kernel";
  auto g = Group::create(GroupSpec::hnn(GroupSpec::free_group(2),
                                        SubgroupSpec::commutator_kernel(),
                                        SubgroupSpec::commutator_kernel()));
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> len(0, 10);
  std::uniform_int_distribution<int> dir(0, 5);

  int agree = 0, total = 0, identities = 0;
  int pinch_expected_ok = 0, pinch_cases = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> raw;
    for (int k = 0, n = len(gen); k < n; ++k) raw.push_back(letter_of_dir(dir(gen)));
    Word w = Word::reduce(g->alphabet(), std::move(raw));
    ++total;
    bool id_britton = g->is_identity(w);
    bool id_key = g->element(w).is_identity();
    if (id_britton == id_key) ++agree;
    if (id_britton) ++identities;
  }
  std::uniform_int_distribution<int> bdir(0, 3);
  std::uniform_int_distribution<int> blen(1, 8);
  Word t = single(g->alphabet(), g->stable_symbol(), 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> raw;
    for (int k = 0, n = blen(gen); k < n; ++k) raw.push_back(letter_of_dir(bdir(gen)));
    Word w = Word::reduce(g->alphabet(), std::move(raw));
    if (w.is_empty()) continue;
    Word conj = product({inverse(t), w, t});
    bool zero_vec = true;
    for (long long e : exponent_vector(w))
      if (e != 0) zero_vec = false;
    ++pinch_cases;
    bool pinched = g->pinch_find(conj).has_value();
    if (pinched == zero_vec) ++pinch_expected_ok;
  }

  res.pass = agree == total && pinch_expected_ok == pinch_cases;
  json j{{"seed", seed},
         {"random_words", total},
         {"route_agreement", agree},
         {"identities_seen", identities},
         {"pinch_cases", pinch_cases},
         {"pinch_rule_matches", pinch_expected_ok},
         {"pass", res.pass}};
  res.files.emplace_back("commutator_kernel.json", j.dump(2));
  std::ostringstream sum;
  sum << "route agreement " << agree << "/" << total << ", pinch rule " << pinch_expected_ok
      << "/" << pinch_cases;
  res.summary = sum.str();
  return res;
}

PresetResult free_weak_hyp(unsigned seed, int threads) {
  PresetResult res;
  res.name = "free-weak-hyp";
  auto f2 = Group::create(GroupSpec::free_group(2));
  SubgroupSpec h = SubgroupSpec::folded({"a^2", "b^2", "a b"});
  std::vector<int> radii{3, 4, 5};
  DeltaSeries s = delta_series(
      [&](int r) {
        BallParams p;
        p.radius = r;
        p.rh = 1;
        p.exactness_check = false;
        return relative_ball(f2, {"a", "b"}, {h}, p);
      },
      radii, DeltaMethod::FourPointBase, threads);
  bool small = true;
  for (const DeltaReport& r : s.reports)
    if (r.delta_num > 4) small = false;  // delta <= 2 in scaled units
  res.pass = s.verdict == "bounded" && small;
  res.files.emplace_back("free_rel_subgroup_series.csv", delta_series_csv(s));
  std::ostringstream sum;
  sum << "F2 rel <a^2,b^2,ab>: " << s.verdict << ", max delta_num "
      << (s.reports.empty() ? 0 : s.reports.back().delta_num) << " (seed " << seed << ")";
  res.summary = sum.str();
  return res;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"z-chain", "tree-compare", "commutator-kernel", "free-weak-hyp"};
}

PresetResult run_preset(const std::string& name, unsigned seed, int threads) {
  if (name == "z-chain") return z_chain(seed, threads);
  if (name == "tree-compare") return tree_compare(seed, threads);
  if (name == "commutator-kernel") return commutator_kernel(seed, threads);
  if (name == "free-weak-hyp") return free_weak_hyp(seed, threads);
  fail(ErrorCode::Invalid, "unknown preset: " + name);
}

}  // namespace relhyp
