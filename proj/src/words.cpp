#include "relhyp/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace relhyp {

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
    const auto& n = names_[static_cast<size_t>(i)];
    if (n.empty()) fail(ErrorCode::Invalid, "empty generator name");
    if (n.find_first_of(" \t\n^") != std::string::npos)
      fail(ErrorCode::Invalid, "generator name may not contain whitespace or '^': " + n);
    if (!index_.emplace(n, i).second)
      fail(ErrorCode::Invalid, "duplicate generator name: " + n);
  }
}

int Alphabet::index(std::string_view sym) const noexcept {
  auto it = index_.find(std::string(sym));
  return it == index_.end() ? -1 : it->second;
}

AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

AlphabetPtr default_alphabet(int rank) {
  if (rank < 0) fail(ErrorCode::Invalid, "negative rank");
  std::vector<std::string> names;
  names.reserve(static_cast<size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    if (rank <= 26)
      names.push_back(std::string(1, static_cast<char>('a' + i)));
    else
      names.push_back("g" + std::to_string(i + 1));
  }
  return make_alphabet(std::move(names));
}

Word Word::empty(AlphabetPtr alpha) {
  Word w;
  w.alpha_ = std::move(alpha);
  return w;
}

Word Word::reduce(AlphabetPtr alpha, std::vector<Letter> raw) {
  if (!alpha) fail(ErrorCode::Invalid, "word without alphabet");
  Word w;
  w.alpha_ = std::move(alpha);
  w.letters_.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.symbol < 0 || l.symbol >= w.alpha_->rank())
      fail(ErrorCode::Alphabet, "letter index out of range");
    if (l.sign != 1 && l.sign != -1) fail(ErrorCode::Invalid, "letter sign must be +1 or -1");
    if (!w.letters_.empty() && w.letters_.back().symbol == l.symbol &&
        w.letters_.back().sign == -l.sign) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

bool operator==(const Word& a, const Word& b) {
  if (!a.alpha_ || !b.alpha_) return a.alpha_ == b.alpha_ && a.letters_ == b.letters_;
  if (a.alpha_ != b.alpha_ && !a.alpha_->same(*b.alpha_)) return false;
  return a.letters_ == b.letters_;
}

void require_same_alphabet(const Word& u, const Word& v) {
  if (!u.valid() || !v.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  if (u.alphabet() != v.alphabet() && !u.alphabet()->same(*v.alphabet()))
    fail(ErrorCode::Alphabet, "alphabet mismatch");
}

Word product(const Word& u, const Word& v) {
  require_same_alphabet(u, v);
  std::vector<Letter> raw = u.letters();
  raw.insert(raw.end(), v.letters().begin(), v.letters().end());
  return Word::reduce(u.alphabet(), std::move(raw));
}

Word product(std::initializer_list<Word> ws) {
  if (ws.size() == 0) fail(ErrorCode::Invalid, "empty product");
  auto it = ws.begin();
  Word acc = *it++;
  for (; it != ws.end(); ++it) acc = product(acc, *it);
  return acc;
}

Word inverse(const Word& w) {
  if (!w.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) raw.push_back(inv(*it));
  return Word::reduce(w.alphabet(), std::move(raw));
}

Word word_power(const Word& w, long long k) {
  Word acc = Word::empty(w.alphabet());
  Word base = k < 0 ? inverse(w) : w;
  long long n = k < 0 ? -k : k;
  for (long long i = 0; i < n; ++i) acc = product(acc, base);
  return acc;
}

Word single(const AlphabetPtr& alpha, int symbol, int sign) {
  return Word::reduce(alpha, {Letter{symbol, sign}});
}

std::pair<Word, Word> cyclic_reduce(const Word& w) {
  const auto& ls = w.letters();
  size_t i = 0, j = ls.size();
  while (j > i + 1 && ls[i] == inv(ls[j - 1])) {
    ++i;
    --j;
  }
  std::vector<Letter> core(ls.begin() + static_cast<std::ptrdiff_t>(i),
                           ls.begin() + static_cast<std::ptrdiff_t>(j));
  std::vector<Letter> conj(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(i));
  return {Word::reduce(w.alphabet(), std::move(core)),
          Word::reduce(w.alphabet(), std::move(conj))};
}

std::vector<long long> exponent_vector(const Word& w) {
  if (!w.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  std::vector<long long> vec(static_cast<size_t>(w.alphabet()->rank()), 0);
  for (const Letter& l : w.letters()) vec[static_cast<size_t>(l.symbol)] += l.sign;
  return vec;
}

Word parse_word(const AlphabetPtr& alpha, std::string_view text) {
  if (!alpha) fail(ErrorCode::Invalid, "parse_word without alphabet");
  std::vector<Letter> raw;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  std::vector<std::string_view> tokens;
  skip_ws();
  while (pos < text.size()) {
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tokens.push_back(text.substr(start, pos - start));
    skip_ws();
  }
  if (tokens.size() == 1 && tokens[0] == "e" && alpha->index("e") < 0)
    return Word::empty(alpha);
  for (std::string_view tok : tokens) {
    std::string_view name = tok;
    long long exp = 1;
    size_t caret = tok.find('^');
    if (caret != std::string_view::npos) {
      name = tok.substr(0, caret);
      std::string_view es = tok.substr(caret + 1);
      auto res = std::from_chars(es.data(), es.data() + es.size(), exp);
      if (res.ec != std::errc() || res.ptr != es.data() + es.size() || exp == 0)
        fail(ErrorCode::Parse, "bad exponent in token: " + std::string(tok));
    }
    int sym = alpha->index(name);
    if (sym < 0) fail(ErrorCode::Alphabet, "unknown symbol: " + std::string(name));
    int sign = exp < 0 ? -1 : 1;
    long long n = exp < 0 ? -exp : exp;
    for (long long i = 0; i < n; ++i) raw.push_back(Letter{sym, sign});
  }
  return Word::reduce(alpha, std::move(raw));
}

std::string format_word(const Word& w) {
  if (!w.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  if (w.is_empty()) return "e";
  std::ostringstream out;
  const auto& ls = w.letters();
  size_t i = 0;
  bool first = true;
  while (i < ls.size()) {
    size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    long long exp = static_cast<long long>(j - i) * ls[i].sign;
    if (!first) out << ' ';
    first = false;
    out << w.alphabet()->name(ls[i].symbol);
    if (exp != 1) out << '^' << exp;
    i = j;
  }
  return out.str();
}

Word map_alphabet(const Word& w, const AlphabetPtr& target, int symbol_offset) {
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (const Letter& l : w.letters()) raw.push_back(Letter{l.symbol + symbol_offset, l.sign});
  return Word::reduce(target, std::move(raw));
}

}  // namespace relhyp
