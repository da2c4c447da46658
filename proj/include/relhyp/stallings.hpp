#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "relhyp/words.hpp"

namespace relhyp {

/// Folded, based subgroup graph of a finitely generated subgroup of a free
/// group. Deterministic in both edge directions; non-basepoint spurs are
/// trimmed, the basepoint hull is kept so that every word can be traced for
/// coset representatives.
class SubgroupGraph {
 public:
  static SubgroupGraph fold(AlphabetPtr alpha, const std::vector<Word>& generators);

  const AlphabetPtr& alphabet() const noexcept { return alpha_; }
  const AlphabetPtr& basis_alphabet() const noexcept { return basis_alpha_; }

  std::size_t vertex_count() const noexcept { return next_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  int rank() const noexcept { return static_cast<int>(basis_words_.size()); }

  /// True iff w labels a closed path at the basepoint.
  bool member(const Word& w) const;

  /// Shortlex-minimal tree word to the vertex reached by w, with the
  /// untraceable suffix appended. Constant exactly on right cosets H·w.
  Word schreier_rep(const Word& w) const;

  /// Canonical representative of the left coset w·H.
  Word left_rep(const Word& w) const { return inverse(schreier_rep(inverse(w))); }

  /// Express a member as a word over x1..xr; substituting basis_word(i) for
  /// xi and reducing recovers the input.
  Word express_in_basis(const Word& w) const;

  Word basis_word(int i) const;

  /// Nontrivial members of length <= max_len, sorted by (length, lex).
  std::vector<Word> enumerate_members(int max_len, std::size_t budget) const;

  /// Basepoint-rooted normal form of the labeled graph; equal for isomorphic
  /// based labeled graphs.
  std::string canonical_signature() const;

  /// (vertex reached, letters consumed) when tracing w from the basepoint.
  std::pair<int, std::size_t> trace(const Word& w) const;

 private:
  AlphabetPtr alpha_;
  AlphabetPtr basis_alpha_;
  std::vector<std::vector<int>> next_;    // [vertex][dir] -> vertex or -1
  std::vector<std::vector<int>> basis_;   // [vertex][dir] -> +-(k+1) basis mark, 0 = tree
  std::vector<Word> tree_word_;           // shortlex tree word per vertex
  std::vector<Word> basis_words_;
  std::size_t edge_count_ = 0;
  int base_ = 0;
};

}  // namespace relhyp
