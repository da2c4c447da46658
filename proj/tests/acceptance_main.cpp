// Acceptance suite: every desk-scale claim the library is expected to
// reproduce, one pass/fail line per criterion, exit 1 when any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "relhyp/experiments.hpp"
#include "relhyp/hyperbolicity.hpp"
#include "relhyp/isoperimetry.hpp"
#include "relhyp/qi.hpp"

using namespace relhyp;

namespace {

BallParams params(int r, int rh, bool exact_check = false) {
  BallParams p;
  p.radius = r;
  p.rh = rh;
  p.exactness_check = exact_check;
  return p;
}

int g_threads = 0;

// 1. The equivalence-of-definitions inequalities hold exactly on both model
// pairs, with certified truncation.
bool criterion_eqdef(std::string& detail) {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  EqdefReport a = eqdef_check(z2, {"b"}, {SubgroupSpec::coordinate_lattice({"a"})},
                              params(4, 8, true));
  auto hnn = Group::create(GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::folded({"a"}),
                                          SubgroupSpec::folded({"a"})));
  EqdefReport b = eqdef_check(hnn, {"t"}, {SubgroupSpec::whole()}, params(3, 6, true));
  std::ostringstream d;
  d << "Z^2: eq1 " << a.alpha.upper.pass << " eq2 " << a.alpha.lower.pass << " density "
    << a.alpha.density.pass << " skipped " << a.alpha.skipped_pairs << " provisional "
    << a.provisional << "; HNN: eq1 " << b.alpha.upper.pass << " eq2 " << b.alpha.lower.pass
    << " density " << b.alpha.density.pass << " skipped " << b.alpha.skipped_pairs
    << " provisional " << b.provisional;
  detail = d.str();
  auto good = [](const EqdefReport& r) {
    return r.alpha.upper.pass && r.alpha.lower.pass && r.alpha.density.pass &&
           r.alpha.skipped_pairs == 0 && !r.provisional;
  };
  return good(a) && good(b);
}

// 2. Coset balls of three HNN examples are tree-like: exact four-point delta
// 0 and a two-sided Lipschitz match with the certified-acyclic tree ball.
bool criterion_tree(std::string& detail) {
  struct Example {
    const char* name;
    GroupSpec spec;
    int r, rh;
  };
  std::vector<Example> examples{
      {"z-squared",
       GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::folded({"a"}),
                      SubgroupSpec::folded({"a"})),
       4, 4},
      {"free-trivial",
       GroupSpec::hnn(GroupSpec::free_group(1), SubgroupSpec::trivial(),
                      SubgroupSpec::trivial()),
       2, 2},
      {"commutator-kernel",
       GroupSpec::hnn(GroupSpec::free_group(2), SubgroupSpec::commutator_kernel(),
                      SubgroupSpec::commutator_kernel()),
       2, 1}};
  std::ostringstream d;
  bool ok = true;
  for (const Example& ex : examples) {
    auto g = Group::create(ex.spec);
    auto cos = coset_ball(g, {g->spec().stable}, {SubgroupSpec::whole()}, params(ex.r, ex.rh));
    auto tree = bass_serre_ball(g, params(ex.r, ex.rh));
    bool acyclic = tree.acyclic() && tree.connected();
    DeltaReport dr = delta_four_point(cos, false, g_threads);
    std::vector<int> beta;
    bool matched = true;
    for (int v = 0; v < cos.vertex_count(); ++v) {
      int id = tree.find_vertex(cos.vertex(v).key);
      if (id < 0) {
        matched = false;
        break;
      }
      beta.push_back(id);
    }
    bool lip = false;
    if (matched) lip = lipschitz_orbit_bound(cos, tree, beta, true).pass();
    bool this_ok = acyclic && (dr.delta_num == 0 || (matched && lip));
    d << ex.name << "(n=" << cos.vertex_count() << " delta_num=" << dr.delta_num
      << " acyclic=" << acyclic << " lipschitz=" << (matched && lip) << ") ";
    ok = ok && this_ok;
  }
  detail = d.str();
  return ok;
}

// 3. The nested counterexample chain separates: Z^2 rel Z bounded, Z^3 rel Z
// growing, exact four-point on balls of at most 400 vertices.
bool criterion_series(std::string& detail) {
  auto z2 = Group::create(GroupSpec::free_abelian(2));
  auto z3 = Group::create(GroupSpec::free_abelian(3));
  SubgroupSpec lat = SubgroupSpec::coordinate_lattice({"a"});
  std::vector<int> radii{3, 4, 5, 6};
  int max_n = 0;
  auto builder = [&](const GroupPtr& g, std::vector<std::string> x) {
    return [&, x](int r) {
      LabeledGraph ball = relative_ball(g, x, {lat}, params(r, 1));
      max_n = std::max(max_n, ball.vertex_count());
      return ball;
    };
  };
  DeltaSeries s2 = delta_series(builder(z2, {"b"}), radii, DeltaMethod::FourPointExact,
                                g_threads);
  DeltaSeries s3 = delta_series(builder(z3, {"b", "c"}), radii, DeltaMethod::FourPointExact,
                                g_threads);
  std::ostringstream d;
  d << "Z^2:";
  for (const auto& r : s2.reports) d << " " << r.delta_num;
  d << " -> " << s2.verdict << "; Z^3:";
  for (const auto& r : s3.reports) d << " " << r.delta_num;
  d << " -> " << s3.verdict << "; max ball " << max_n;
  detail = d.str();
  return s2.verdict == "bounded" && s3.verdict == "growing" && max_n <= 400;
}

// 4. In the commutator-kernel HNN extension the two decision routes agree on
// 200 random words and pinches track the exponent vector exactly.
bool criterion_britton(std::string& detail) {
  auto g = Group::create(GroupSpec::hnn(GroupSpec::free_group(2),
                                        SubgroupSpec::commutator_kernel(),
                                        SubgroupSpec::commutator_kernel()));
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> len(0, 10), dir(0, 5);
  int agree = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Letter> raw;
    for (int k = 0, n = len(gen); k < n; ++k) raw.push_back(letter_of_dir(dir(gen)));
    Word w = Word::reduce(g->alphabet(), std::move(raw));
    if (g->is_identity(w) == g->element(w).is_identity()) ++agree;
  }
  std::uniform_int_distribution<int> blen(1, 8), bdir(0, 3);
  Word t = single(g->alphabet(), g->stable_symbol(), 1);
  int pinch_ok = 0, pinch_total = 0;
  while (pinch_total < 200) {
    std::vector<Letter> raw;
    for (int k = 0, n = blen(gen); k < n; ++k) raw.push_back(letter_of_dir(bdir(gen)));
    Word w = Word::reduce(g->alphabet(), std::move(raw));
    if (w.is_empty()) continue;
    bool zero = true;
    for (long long e : exponent_vector(w))
      if (e != 0) zero = false;
    ++pinch_total;
    if (g->pinch_find(product({inverse(t), w, t})).has_value() == zero) ++pinch_ok;
  }
  std::ostringstream d;
  d << "route agreement " << agree << "/200, pinch rule " << pinch_ok << "/" << pinch_total;
  detail = d.str();
  return agree == 200 && pinch_ok == pinch_total;
}

// 5. The pinch decomposition: exact chain sums, piece diameters within M,
// split bookkeeping, and the k <= L l(c) + n bound, on two HNN examples.
bool criterion_decompose(std::string& detail) {
  std::ostringstream d;
  bool ok = true;

  struct Setup {
    const char* name;
    GroupPtr g;
    std::vector<SubgroupSpec> paras;
    int r, rh, max_power;
  };
  std::vector<Setup> setups;
  setups.push_back({"z-squared",
                    Group::create(GroupSpec::hnn(GroupSpec::free_group(1),
                                                 SubgroupSpec::folded({"a"}),
                                                 SubgroupSpec::folded({"a"}))),
                    {SubgroupSpec::folded({"a"}), SubgroupSpec::folded({"a"})},
                    5, 3, 3});
  setups.push_back({"free-base",
                    Group::create(GroupSpec::hnn(GroupSpec::free_group(2),
                                                 SubgroupSpec::folded({"a"}),
                                                 SubgroupSpec::folded({"b"}))),
                    {SubgroupSpec::folded({"a"}), SubgroupSpec::folded({"b"})},
                    4, 2, 2});

  for (const Setup& s : setups) {
    std::vector<std::string> x;
    for (const auto& n : s.g->alphabet()->names()) x.push_back(n);
    LabeledGraph ball = relative_ball(s.g, x, s.paras, params(s.r, s.rh));
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> power(1, s.max_power), conj_len(0, 2),
        conj_dir(0, 2 * s.g->alphabet()->rank() - 1), doubles(0, 1);
    int n_checked = 0, n_ok = 0;
    std::int64_t max_n = 0;
    auto t_letters = [&](const Word& w) {
      std::int64_t n = 0;
      for (const Letter& l : w.letters())
        if (l.symbol == s.g->stable_symbol()) ++n;
      return n;
    };
    for (int attempts = 0; n_checked < 30 && attempts < 500; ++attempts) {
      auto pinch_relator = [&] {
        int k = power(gen);
        Word tpos = single(s.g->alphabet(), s.g->stable_symbol(), 1);
        Word a_part = word_power(s.g->phi_apply(
                                     word_power(parse_word(s.g->alphabet(), "a"), k), true),
                                 -1);
        return product({inverse(tpos), word_power(parse_word(s.g->alphabet(), "a"), k), tpos,
                        a_part});
      };
      std::vector<Letter> cl;
      for (int c = 0, n = conj_len(gen); c < n; ++c) cl.push_back(letter_of_dir(conj_dir(gen)));
      Word conj = Word::reduce(s.g->alphabet(), cl);
      Word w = product({conj, pinch_relator(), inverse(conj)});
      if (doubles(gen)) w = product(w, pinch_relator());
      if (t_letters(w) > 4 || w.is_empty()) continue;  // the criterion pins n <= 4
      if (!s.g->is_identity(w)) continue;              // guaranteed by construction
      CyclePath c = trace_cycle_word(ball, s.g, w);
      DecompositionReport rep = hnn_decompose(ball, s.g, c, 4, 0, 1);
      ++n_checked;
      max_n = std::max(max_n, rep.n);
      if (rep.chain_ok && rep.diam_ok && rep.bookkeeping_ok && rep.bound_ok && rep.n <= 4)
        ++n_ok;
    }
    d << s.name << " " << n_ok << "/" << n_checked << " (max n " << max_n << ") ";
    ok = ok && n_checked == 30 && n_ok == n_checked;
  }
  detail = d.str();
  return ok;
}

// 6. Folded-graph membership equals the brute-force closure oracle on every
// word of length <= 6, and basis expressions substitute back exactly.
bool criterion_stallings(std::string& detail) {
  auto alpha = default_alphabet(2);
  auto words = testing::all_reduced_words(alpha, 6);
  std::vector<std::vector<std::string>> subgroup_lists{
      {"a"}, {"a^2", "a b"}, {"a^2", "b^2", "a b"}};
  std::ostringstream d;
  bool ok = true;
  std::mt19937_64 gen(6);
  for (const auto& list : subgroup_lists) {
    std::vector<Word> gens;
    for (const auto& s : list) gens.push_back(parse_word(alpha, s));
    auto graph = SubgroupGraph::fold(alpha, gens);
    auto oracle = testing::closure_members(alpha, gens, 6, 4);
    auto oracle_stable = testing::closure_members(alpha, gens, 6, 6);
    bool stable = oracle == oracle_stable;
    int disagreements = 0;
    for (const Word& w : words)
      if (graph.member(w) != (oracle.count(format_word(w)) > 0)) ++disagreements;

    std::uniform_int_distribution<int> count(1, 6), which(0, 2 * static_cast<int>(gens.size()) - 1);
    int substitution_fail = 0;
    for (int i = 0; i < 100; ++i) {
      Word m = Word::empty(alpha);
      for (int k = 0, n = count(gen); k < n; ++k) {
        int p = which(gen);
        Word g = gens[static_cast<size_t>(p / 2)];
        m = product(m, p % 2 ? inverse(g) : g);
      }
      Word expr = graph.express_in_basis(m);
      Word back = Word::empty(alpha);
      for (const Letter& l : expr.letters())
        back = product(back, l.sign > 0 ? graph.basis_word(l.symbol)
                                        : inverse(graph.basis_word(l.symbol)));
      if (!(back == m)) ++substitution_fail;
    }
    d << "<" << list[0] << (list.size() > 1 ? ",..." : "") << ">: oracle stable " << stable
      << ", disagreements " << disagreements << ", substitution failures " << substitution_fail
      << "; ";
    ok = ok && stable && disagreements == 0 && substitution_fail == 0;
  }
  detail = d.str();
  return ok;
}

// 7. A free group is weakly hyperbolic relative to a finitely generated
// subgroup: bounded series with small delta.
bool criterion_free_rel(std::string& detail) {
  auto f2 = Group::create(GroupSpec::free_group(2));
  SubgroupSpec h = SubgroupSpec::folded({"a^2", "b^2", "a b"});
  DeltaSeries s = delta_series(
      [&](int r) { return relative_ball(f2, {"a", "b"}, {h}, params(r, 1)); }, {3, 4, 5},
      DeltaMethod::FourPointBase, g_threads);
  std::int64_t worst = 0;
  for (const auto& r : s.reports) worst = std::max(worst, r.delta_num);
  std::ostringstream d;
  d << "series";
  for (const auto& r : s.reports) d << " " << r.delta_num;
  d << " -> " << s.verdict << ", worst delta " << worst << "/2 (scaled)";
  detail = d.str();
  return s.verdict == "bounded" && worst <= 4;  // delta <= 2 in scaled units
}

// Independent amalgam oracle: alternating-syllable reduction for
// F(a,b) *_{<a>=<c>} F(c,d) with phi(a^k) = c^k.
bool amalgam_oracle_identity(const Word& w) {
  struct Syllable {
    bool h_side;
    std::vector<Letter> letters;  // over local factor letters: 0,1
  };
  std::vector<Syllable> sylls;
  for (const Letter& l : w.letters()) {
    bool h = l.symbol < 2;
    Letter local{l.symbol % 2, l.sign};
    if (sylls.empty() || sylls.back().h_side != h) sylls.push_back({h, {}});
    sylls.back().letters.push_back(local);
  }
  auto reduce_letters = [](std::vector<Letter>& ls) {
    std::vector<Letter> out;
    for (const Letter& l : ls) {
      if (!out.empty() && out.back().symbol == l.symbol && out.back().sign == -l.sign)
        out.pop_back();
      else
        out.push_back(l);
    }
    ls = std::move(out);
  };
  auto in_amalgamated = [](const Syllable& s) {
    for (const Letter& l : s.letters)
      if (l.symbol != 0) return false;  // powers of the first local letter only
    return true;
  };
  for (;;) {
    // Normalize: drop empty syllables, merge same-side neighbors.
    std::vector<Syllable> next;
    for (Syllable& s : sylls) {
      reduce_letters(s.letters);
      if (s.letters.empty()) continue;
      if (!next.empty() && next.back().h_side == s.h_side) {
        next.back().letters.insert(next.back().letters.end(), s.letters.begin(),
                                   s.letters.end());
        reduce_letters(next.back().letters);
        if (next.back().letters.empty()) next.pop_back();
      } else {
        next.push_back(std::move(s));
      }
    }
    sylls = std::move(next);
    if (sylls.size() <= 1) break;
    bool changed = false;
    for (size_t i = 0; i < sylls.size(); ++i) {
      if (!in_amalgamated(sylls[i])) continue;
      sylls[i].h_side = !sylls[i].h_side;  // a^k <-> c^k across the amalgamation
      changed = true;
      break;
    }
    if (!changed) break;
  }
  if (sylls.empty()) return true;
  if (sylls.size() == 1) return sylls[0].letters.empty();
  return false;
}

// 8. Amalgam word problem through the HNN embedding agrees with the
// alternating-syllable oracle on random words.
bool criterion_amalgam(std::string& detail) {
  auto g = Group::create(GroupSpec::amalgam(GroupSpec::free_group(2, {"a", "b"}),
                                            GroupSpec::free_group(2, {"c", "d"}),
                                            SubgroupSpec::folded({"a"}),
                                            SubgroupSpec::folded({"c"})));
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> syllables(1, 6), sylen(1, 3), side(0, 1), letter(0, 1),
      sign(0, 1), mode(0, 3);
  int agree = 0, total = 0, identities = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Letter> raw;
    int m = mode(gen);
    int ns = syllables(gen);
    for (int s = 0; s < ns; ++s) {
      int off = (s + side(gen)) % 2 ? 2 : 0;
      for (int k = 0, n = sylen(gen); k < n; ++k)
        raw.push_back(Letter{off + letter(gen), sign(gen) ? 1 : -1});
    }
    Word w = Word::reduce(g->alphabet(), raw);
    if (m == 1) {
      w = product(w, inverse(w));  // planted identity
    } else if (m == 2) {
      // Conjugated amalgamation relation a c^-1 = 1.
      Word rel = g->parse("a c^-1");
      w = product({w, rel, inverse(w)});
    }
    bool via_embedding = g->is_identity(w);
    bool via_oracle = amalgam_oracle_identity(w);
    if (via_embedding) ++identities;
    if (via_embedding == via_oracle) ++agree;
    ++total;
  }
  std::ostringstream d;
  d << "agreement " << agree << "/" << total << " (identities seen: " << identities << ")";
  detail = d.str();
  return agree == total && identities > 0;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
  double limit_seconds;
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--threads" && i + 1 < argc) g_threads = std::atoi(argv[++i]);
  }
  std::vector<Criterion> criteria{
      {1, "equivalence-of-definitions inequalities (exact, certified balls)", criterion_eqdef,
       60.0},
      {2, "coset balls match Bass-Serre trees (three HNN examples)", criterion_tree, 60.0},
      {3, "nested chain separation: Z^2 rel Z bounded, Z^3 rel Z growing", criterion_series,
       300.0},
      {4, "commutator-kernel word problem: routes agree, pinches track the exponent vector",
       criterion_britton, 60.0},
      {5, "pinch decomposition: chain sums, diameters, bookkeeping, and the piece bound",
       criterion_decompose, 120.0},
      {6, "folded-graph membership equals the closure oracle; basis substitution exact",
       criterion_stallings, 60.0},
      {7, "free group weakly hyperbolic relative to a finitely generated subgroup",
       criterion_free_rel, 120.0},
      {8, "amalgam word problem agrees with the alternating-syllable oracle",
       criterion_amalgam, 60.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.limit_seconds;
    bool pass = ok && in_time;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ["
              << detail << "] (" << secs << "s, limit " << c.limit_seconds << "s)\n";
    if (!pass) ++failures;
  }
  if (failures) std::cout << failures << " criteria failed\n";
  return failures ? 1 : 0;
}
