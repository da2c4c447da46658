#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "relhyp/stallings.hpp"

using namespace relhyp;

namespace {

std::vector<Word> parse_gens(const AlphabetPtr& alpha, std::initializer_list<const char*> ws) {
  std::vector<Word> out;
  for (const char* w : ws) out.push_back(parse_word(alpha, w));
  return out;
}

}  // namespace

TEST_CASE("fold basics") {
  auto f2 = default_alphabet(2);
  auto loop = SubgroupGraph::fold(f2, parse_gens(f2, {"a"}));
  CHECK(loop.vertex_count() == 1);
  CHECK(loop.edge_count() == 1);
  CHECK(loop.rank() == 1);

  auto redundant = SubgroupGraph::fold(f2, parse_gens(f2, {"a", "a^-1"}));
  CHECK(redundant.canonical_signature() == loop.canonical_signature());

  auto empty = SubgroupGraph::fold(f2, {});
  CHECK(empty.vertex_count() == 1);
  CHECK(empty.rank() == 0);
  CHECK(empty.member(Word::empty(f2)));
  CHECK_FALSE(empty.member(parse_word(f2, "a")));
}

TEST_CASE("membership matches closure oracle for <a^2, ab>") {
  auto f2 = default_alphabet(2);
  auto gens = parse_gens(f2, {"a^2", "a b"});
  auto g = SubgroupGraph::fold(f2, gens);
  CHECK(g.rank() == 2);

  auto oracle = testing::closure_members(f2, gens, 6, 6);
  auto oracle_more = testing::closure_members(f2, gens, 6, 8);
  REQUIRE(oracle == oracle_more);  // closure restricted to length 6 has stabilized

  for (const Word& w : testing::all_reduced_words(f2, 6))
    CHECK(g.member(w) == (oracle.count(format_word(w)) > 0));
}

TEST_CASE("member is closed under product and inverse") {
  auto f2 = default_alphabet(2);
  auto gens = parse_gens(f2, {"a^2", "a b"});
  auto g = SubgroupGraph::fold(f2, gens);
  auto gen = testing::rng(11);
  std::uniform_int_distribution<int> count(1, 6), which(0, 3);
  for (int i = 0; i < 100; ++i) {
    Word u = Word::empty(f2), v = Word::empty(f2);
    for (int k = 0, n = count(gen); k < n; ++k) {
      int w1 = which(gen), w2 = which(gen);
      u = product(u, w1 < 2 ? gens[static_cast<size_t>(w1)] : inverse(gens[static_cast<size_t>(w1 - 2)]));
      v = product(v, w2 < 2 ? gens[static_cast<size_t>(w2)] : inverse(gens[static_cast<size_t>(w2 - 2)]));
    }
    CHECK(g.member(u));
    CHECK(g.member(product(u, v)));
    CHECK(g.member(inverse(u)));
  }
}

TEST_CASE("express_in_basis substitution identity") {
  auto f2 = default_alphabet(2);

  auto loop = SubgroupGraph::fold(f2, parse_gens(f2, {"a"}));
  Word cubed = loop.express_in_basis(parse_word(f2, "a^3"));
  CHECK(format_word(cubed) == "x1^3");

  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a^2", "a b"}));
  auto substitute = [&](const Word& expr) {
    Word acc = Word::empty(f2);
    for (const Letter& l : expr.letters())
      acc = product(acc, l.sign > 0 ? g.basis_word(l.symbol) : inverse(g.basis_word(l.symbol)));
    return acc;
  };
  Word asq = parse_word(f2, "a^2");
  CHECK(substitute(g.express_in_basis(asq)) == asq);

  auto gens = parse_gens(f2, {"a^2", "a b"});
  auto gen = testing::rng(12);
  std::uniform_int_distribution<int> count(1, 6), which(0, 3);
  for (int i = 0; i < 100; ++i) {
    Word u = Word::empty(f2);
    for (int k = 0, n = count(gen); k < n; ++k) {
      int w = which(gen);
      u = product(u, w < 2 ? gens[static_cast<size_t>(w)] : inverse(gens[static_cast<size_t>(w - 2)]));
    }
    CHECK(substitute(g.express_in_basis(u)) == u);
  }

  CHECK_THROWS_AS(g.express_in_basis(parse_word(f2, "b")), Error);
}

TEST_CASE("schreier representatives") {
  auto f2 = default_alphabet(2);
  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a^2", "a b"}));

  CHECK(g.schreier_rep(parse_word(f2, "a^2")).is_empty());
  auto gen = testing::rng(13);
  for (int i = 0; i < 100; ++i) {
    Word w = testing::random_word(gen, f2, 8);
    CHECK(g.schreier_rep(g.schreier_rep(w)) == g.schreier_rep(w));
  }

  // rep(u) == rep(v) iff u v^-1 is a member, exhaustively to length 5.
  auto words = testing::all_reduced_words(f2, 5);
  for (const Word& u : words)
    for (const Word& v : words) {
      bool same = g.schreier_rep(u) == g.schreier_rep(v);
      CHECK(same == g.member(product(u, inverse(v))));
    }
}

TEST_CASE("representatives are shortlex minimal in their coset") {
  auto f2 = default_alphabet(2);
  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a^2", "a b"}));
  auto shortlex_le = [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i)
      if (dir_of(a.letters()[i]) != dir_of(b.letters()[i]))
        return dir_of(a.letters()[i]) < dir_of(b.letters()[i]);
    return true;
  };
  for (const Word& u : testing::all_reduced_words(f2, 4)) {
    Word rep = g.schreier_rep(u);
    CHECK(g.schreier_rep(rep) == rep);
    CHECK(shortlex_le(rep, u));  // u itself is a coset member, so rep <= u
  }
}

TEST_CASE("left coset representatives") {
  auto f2 = default_alphabet(2);
  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a^2", "a b"}));
  auto words = testing::all_reduced_words(f2, 4);
  for (const Word& u : words)
    for (const Word& v : words) {
      bool same = g.left_rep(u) == g.left_rep(v);
      CHECK(same == g.member(product(inverse(u), v)));
    }
}

TEST_CASE("folding is confluent under generator order") {
  auto f2 = default_alphabet(2);
  auto gens = parse_gens(f2, {"a^2", "a b", "b a^-1 b"});
  auto gen = testing::rng(14);
  auto reference = SubgroupGraph::fold(f2, gens).canonical_signature();
  for (int i = 0; i < 10; ++i) {
    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(SubgroupGraph::fold(f2, shuffled).canonical_signature() == reference);
  }
}

TEST_CASE("rank bound") {
  auto f2 = default_alphabet(2);
  CHECK(SubgroupGraph::fold(f2, parse_gens(f2, {"a", "a^3"})).rank() == 1);
  CHECK(SubgroupGraph::fold(f2, parse_gens(f2, {"a^2", "b^2", "a b"})).rank() == 3);
}

TEST_CASE("member enumeration") {
  auto f2 = default_alphabet(2);
  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a"}));
  auto members = g.enumerate_members(3, 1000);
  REQUIRE(members.size() == 6);
  CHECK(format_word(members[0]) == "a");
  CHECK(format_word(members[1]) == "a^-1");
  for (const Word& m : members) CHECK(g.member(m));
}

TEST_CASE("basepoint hull survives for representatives") {
  auto f2 = default_alphabet(2);
  // Conjugate subgroup: the basepoint hangs off the core by an a-edge.
  auto g = SubgroupGraph::fold(f2, parse_gens(f2, {"a b a^-1"}));
  CHECK(g.vertex_count() == 2);
  CHECK(g.member(parse_word(f2, "a b^3 a^-1")));
  CHECK_FALSE(g.member(parse_word(f2, "b")));
  // H a b = H a, whose canonical representative is the tree word "a".
  CHECK(format_word(g.schreier_rep(parse_word(f2, "a b"))) == "a");
  CHECK(g.schreier_rep(parse_word(f2, "a b")) == g.schreier_rep(parse_word(f2, "a")));
}
