#include <doctest.h>

#include "oracles.hpp"
#include "relhyp/words.hpp"

using namespace relhyp;

TEST_CASE("free reduction") {
  auto f2 = default_alphabet(2);
  CHECK(parse_word(f2, "a a^-1").is_empty());
  CHECK(format_word(parse_word(f2, "a b b^-1 a")) == "a^2");
  CHECK(format_word(parse_word(f2, "e")) == "e");

  auto gen = testing::rng(1);
  for (int i = 0; i < 200; ++i) {
    Word w = testing::random_word(gen, f2, 12);
    CHECK(product(w, inverse(w)).is_empty());
  }
}

TEST_CASE("reduced invariant holds on outputs") {
  auto f2 = default_alphabet(2);
  auto gen = testing::rng(2);
  auto reduced = [](const Word& w) {
    const auto& ls = w.letters();
    for (size_t i = 0; i + 1 < ls.size(); ++i)
      if (ls[i].symbol == ls[i + 1].symbol && ls[i].sign == -ls[i + 1].sign) return false;
    return true;
  };
  for (int i = 0; i < 200; ++i) {
    Word u = testing::random_word(gen, f2, 10);
    Word v = testing::random_word(gen, f2, 10);
    CHECK(reduced(product(u, v)));
    CHECK(reduced(inverse(u)));
    CHECK(reduced(cyclic_reduce(u).first));
  }
}

TEST_CASE("product identity and associativity") {
  auto f2 = default_alphabet(2);
  CHECK(format_word(product(parse_word(f2, "a b"), parse_word(f2, "b^-1 b^-1"))) == "a b^-1");
  Word e = Word::empty(f2);
  Word w = parse_word(f2, "a b a");
  CHECK(product(w, e) == w);
  auto gen = testing::rng(3);
  for (int i = 0; i < 500; ++i) {
    Word u = testing::random_word(gen, f2, 8);
    Word v = testing::random_word(gen, f2, 8);
    Word x = testing::random_word(gen, f2, 8);
    CHECK(product(product(u, v), x) == product(u, product(v, x)));
  }
}

TEST_CASE("alphabet mismatch is an error") {
  auto f2 = default_alphabet(2);
  auto other = make_alphabet({"x", "y"});
  CHECK_THROWS_AS(product(parse_word(f2, "a"), parse_word(other, "x")), Error);
  CHECK_THROWS_AS(parse_word(f2, "c"), Error);
}

TEST_CASE("inverse") {
  auto f2 = default_alphabet(2);
  CHECK(format_word(inverse(parse_word(f2, "a b"))) == "b^-1 a^-1");
  CHECK(inverse(Word::empty(f2)).is_empty());
  auto gen = testing::rng(4);
  for (int i = 0; i < 200; ++i) {
    Word w = testing::random_word(gen, f2, 10);
    CHECK(inverse(inverse(w)) == w);
  }
}

TEST_CASE("cyclic reduction") {
  auto f2 = default_alphabet(2);
  auto [core, conj] = cyclic_reduce(parse_word(f2, "a b a^-1"));
  CHECK(format_word(core) == "b");
  CHECK(format_word(conj) == "a");

  Word red = parse_word(f2, "a b");
  auto [c2, j2] = cyclic_reduce(red);
  CHECK(c2 == red);
  CHECK(j2.is_empty());

  auto gen = testing::rng(5);
  for (int i = 0; i < 200; ++i) {
    Word w = testing::random_word(gen, f2, 10);
    auto [core_w, conj_w] = cyclic_reduce(w);
    CHECK(product({conj_w, core_w, inverse(conj_w)}) == w);
    const auto& ls = core_w.letters();
    if (ls.size() >= 2) CHECK_FALSE(ls.front() == inv(ls.back()));
  }
}

TEST_CASE("exponent vector") {
  auto f2 = default_alphabet(2);
  auto vec = exponent_vector(parse_word(f2, "a b a^-1 b^-1"));
  CHECK(vec == std::vector<long long>{0, 0});
  CHECK(exponent_vector(parse_word(f2, "a^2 b^-1")) == std::vector<long long>{2, -1});
  auto gen = testing::rng(6);
  for (int i = 0; i < 200; ++i) {
    Word u = testing::random_word(gen, f2, 10);
    Word v = testing::random_word(gen, f2, 10);
    auto vu = exponent_vector(u), vv = exponent_vector(v), vp = exponent_vector(product(u, v));
    for (size_t k = 0; k < vu.size(); ++k) CHECK(vp[k] == vu[k] + vv[k]);
  }
}

TEST_CASE("serialization round trip") {
  auto alpha = make_alphabet({"a", "b", "t"});
  auto gen = testing::rng(7);
  for (int i = 0; i < 200; ++i) {
    Word w = testing::random_word(gen, alpha, 14);
    CHECK(parse_word(alpha, format_word(w)) == w);
  }
  CHECK(format_word(parse_word(alpha, "a^3 t^-2")) == "a^3 t^-2");
  CHECK_THROWS_AS(parse_word(alpha, "a^0"), Error);
  CHECK_THROWS_AS(parse_word(alpha, "a^x"), Error);
}
