#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "relhyp/words.hpp"

namespace relhyp::testing {

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline Word random_word(std::mt19937_64& gen, const AlphabetPtr& alpha, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> dir(0, 2 * alpha->rank() - 1);
  std::vector<Letter> raw;
  int n = len(gen);
  for (int i = 0; i < n; ++i) raw.push_back(letter_of_dir(dir(gen)));
  return Word::reduce(alpha, std::move(raw));
}

/// Brute-force closure of a generating set under product and inverse,
/// restricted to reduced length <= max_len. Exploration runs with slack above
/// max_len so short members reachable only through longer products are found;
/// stabilization of the restricted set is the caller's check.
inline std::set<std::string> closure_members(const AlphabetPtr& alpha,
                                             const std::vector<Word>& gens, int max_len,
                                             int slack) {
  std::set<std::string> seen;
  std::vector<Word> frontier;
  std::vector<Word> step;
  for (const Word& g : gens) {
    step.push_back(g);
    step.push_back(inverse(g));
  }
  Word e = Word::empty(alpha);
  seen.insert(format_word(e));
  frontier.push_back(e);
  int cap = max_len + slack;
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (const Word& s : step) {
        Word p = product(w, s);
        if (static_cast<int>(p.size()) > cap) continue;
        if (seen.insert(format_word(p)).second) next.push_back(p);
      }
    }
    frontier = std::move(next);
  }
  std::set<std::string> out;
  for (const auto& k : seen) {
    Word w = parse_word(alpha, k);
    if (static_cast<int>(w.size()) <= max_len) out.insert(k);
  }
  return out;
}

/// All reduced words of length <= max_len over the alphabet.
inline std::vector<Word> all_reduced_words(const AlphabetPtr& alpha, int max_len) {
  std::vector<Word> out{Word::empty(alpha)};
  std::vector<Letter> path;
  const int dirs = 2 * alpha->rank();
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(path.size()) >= max_len) return;
    for (int d = 0; d < dirs; ++d) {
      if (!path.empty() && dir_of(path.back()) == (d ^ 1)) continue;
      path.push_back(letter_of_dir(d));
      out.push_back(Word::reduce(alpha, path));
      self(self);
      path.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace relhyp::testing
