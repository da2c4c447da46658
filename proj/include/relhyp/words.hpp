#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relhyp/error.hpp"

namespace relhyp {

/// Ordered list of distinct generator symbols. Symbols may be multi-character
/// (stable letters and namespaced generators need this).
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> names);

  int rank() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Index of a symbol, or -1 when absent.
  int index(std::string_view sym) const noexcept;

  bool same(const Alphabet& other) const noexcept { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> names);

/// a, b, c, ... for rank <= 26, otherwise g1, g2, ...
AlphabetPtr default_alphabet(int rank);

/// One signed letter: (symbol index, sign in {+1,-1}).
struct Letter {
  std::int32_t symbol = 0;
  std::int32_t sign = 1;

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.symbol == b.symbol && a.sign == b.sign;
  }
};

/// Directed-letter index with the order a < a^-1 < b < b^-1 < ...
inline int dir_of(const Letter& l) { return 2 * l.symbol + (l.sign < 0 ? 1 : 0); }
inline Letter letter_of_dir(int d) { return Letter{d / 2, (d % 2) ? -1 : 1}; }
inline Letter inv(const Letter& l) { return Letter{l.symbol, -l.sign}; }
inline int inv_dir(int d) { return d ^ 1; }

/// Freely reduced word over an Alphabet. Reduction happens on construction;
/// a Word is a validated value and all operations preserve reducedness.
class Word {
 public:
  Word() = default;  // no alphabet; only valid as a container placeholder

  static Word empty(AlphabetPtr alpha);
  static Word reduce(AlphabetPtr alpha, std::vector<Letter> raw);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool is_empty() const noexcept { return letters_.empty(); }
  const AlphabetPtr& alphabet() const noexcept { return alpha_; }

  bool valid() const noexcept { return alpha_ != nullptr; }

  friend bool operator==(const Word& a, const Word& b);
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  AlphabetPtr alpha_;
  std::vector<Letter> letters_;
};

Word product(const Word& u, const Word& v);
Word product(std::initializer_list<Word> ws);
Word inverse(const Word& w);
Word word_power(const Word& w, long long k);
Word single(const AlphabetPtr& alpha, int symbol, int sign);

/// (core, conjugator) with w = conjugator * core * conjugator^-1 and core
/// cyclically reduced.
std::pair<Word, Word> cyclic_reduce(const Word& w);

/// Signed letter counts, indexed by alphabet position.
std::vector<long long> exponent_vector(const Word& w);

/// Text form `a b^-1 a^2`; `e` denotes the empty word (unless `e` is a symbol).
Word parse_word(const AlphabetPtr& alpha, std::string_view text);
std::string format_word(const Word& w);

/// Reinterpret a word over a different alphabet, shifting symbol indices.
/// Every shifted index must be in range for the target.
Word map_alphabet(const Word& w, const AlphabetPtr& target, int symbol_offset = 0);

void require_same_alphabet(const Word& u, const Word& v);

}  // namespace relhyp
