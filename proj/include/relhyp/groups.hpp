#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relhyp/stallings.hpp"
#include "relhyp/words.hpp"

namespace relhyp {

enum class GroupKind { Free, FreeAbelian, Product, Hnn, Amalgam };
enum class SubKind { FoldedFree, CommutatorKernel, CoordinateLattice, Trivial, Whole };

struct SubgroupSpec {
  SubKind kind = SubKind::Trivial;
  std::vector<std::string> generators;   // FoldedFree: word strings
  std::vector<std::string> coordinates;  // CoordinateLattice: symbol names

  static SubgroupSpec folded(std::vector<std::string> gens);
  static SubgroupSpec commutator_kernel();
  static SubgroupSpec coordinate_lattice(std::vector<std::string> coords);
  static SubgroupSpec trivial();
  static SubgroupSpec whole();

  std::string describe() const;
};

struct GroupSpec {
  GroupKind kind = GroupKind::Free;
  int rank = 0;
  std::vector<std::string> alphabet;  // optional explicit names (free / free abelian)
  std::vector<GroupSpec> factors;     // product
  std::shared_ptr<GroupSpec> base;    // hnn
  std::shared_ptr<GroupSpec> left;    // amalgam H
  std::shared_ptr<GroupSpec> right;   // amalgam K
  SubgroupSpec sub_a, sub_b;
  std::vector<std::string> phi;  // image words of A's generators (optional when implied)
  std::string stable = "t";

  static GroupSpec free_group(int rank, std::vector<std::string> names = {});
  static GroupSpec free_abelian(int rank, std::vector<std::string> names = {});
  static GroupSpec product(std::vector<GroupSpec> factors);
  static GroupSpec hnn(GroupSpec base, SubgroupSpec a, SubgroupSpec b,
                       std::vector<std::string> phi = {}, std::string stable = "t");
  static GroupSpec amalgam(GroupSpec h, GroupSpec k, SubgroupSpec a, SubgroupSpec b,
                           std::vector<std::string> phi = {}, std::string stable = "t");
};

/// Canonical-normal-form key for a group element; two Elements of one group
/// are equal iff their keys are equal.
struct Element {
  Word canonical;
  std::string key() const { return format_word(canonical); }
  bool is_identity() const { return canonical.is_empty(); }
  friend bool operator==(const Element& a, const Element& b) {
    return a.canonical == b.canonical;
  }
};

/// Britton pinch: letters [begin, end) form t^-1 V t (A side) or t U t^-1
/// (B side) with the middle in the matching associated subgroup.
struct Pinch {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool a_side = true;
};

/// h0 t^e1 h1 ... t^em carry with reps[i] the canonical left-coset
/// representative preceding t^eps[i]; the final slot is unconstrained.
struct HnnNormalForm {
  std::vector<Word> reps;
  std::vector<int> eps;
  Word carry;
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

/// A distinguished (parabolic) subgroup bound to an ambient group. For HNN
/// and amalgamated ambients, a SubgroupSpec names a subgroup of the base
/// carrier.
class Subgroup {
 public:
  bool member(const Word& g_word) const;
  /// Canonical representative word of the left coset w·H.
  Word left_rep(const Word& g_word) const;
  /// Canonical carrier word of u^-1 v; requires u, v in one left coset.
  Word connecting_element(const Word& u, const Word& v) const;
  /// Nontrivial elements of carrier length <= max_len, as ambient words.
  std::vector<Word> enumerate(int max_len, std::size_t budget) const;

  const SubgroupSpec& spec() const;
  std::string describe() const;

 private:
  friend class Group;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

class Group : public std::enable_shared_from_this<Group> {
 public:
  static GroupPtr create(const GroupSpec& spec);

  GroupKind kind() const noexcept { return kind_; }
  const AlphabetPtr& alphabet() const noexcept { return alpha_; }
  int rank() const noexcept { return rank_; }

  bool is_identity(const Word& w) const;
  Word canonical_word(const Word& w) const;
  Element element(const Word& w) const { return Element{canonical_word(w)}; }
  Word parse(const std::string& text) const { return parse_word(alpha_, text); }

  /// Canonical words of all nontrivial elements of length <= max_len.
  std::vector<Word> enumerate_ball(int max_len, std::size_t budget) const;

  // HNN surface.
  const GroupPtr& base() const;
  int stable_symbol() const;
  Word britton_reduce(const Word& w) const;
  std::optional<Pinch> pinch_find(const Word& w) const;
  /// Extend phi from generators to the whole associated subgroup.
  Word phi_apply(const Word& base_word, bool a_to_b) const;
  HnnNormalForm hnn_normal_form(const Word& w) const;
  bool assoc_member(const Word& base_word, bool a_side) const;

  // Amalgam surface.
  const GroupPtr& embedding() const;
  /// Replace every K-letter k by t k t^-1; identity-preserving injection.
  Word amalgam_embed_word(const Word& w) const;

  /// The group balls and parabolic machinery operate on: self, or the HNN
  /// embedding for amalgams.
  GroupPtr working_group() const;
  /// Right-multiplier realizing one generator letter in the working group.
  Word working_letter(const Letter& l) const;

  Subgroup parabolic(const SubgroupSpec& spec) const;

  const GroupSpec& spec() const noexcept { return spec_; }
  std::string describe() const;

 private:
  Group() = default;
  struct Assoc;

  Word canonical_base_word(const Word& w) const;  // free/abelian/product only

  GroupSpec spec_;
  GroupKind kind_ = GroupKind::Free;
  AlphabetPtr alpha_;
  int rank_ = 0;

  std::vector<GroupPtr> factors_;
  std::vector<int> factor_offsets_;

  GroupPtr base_;
  int stable_sym_ = -1;
  std::shared_ptr<const Assoc> assoc_;

  GroupPtr embedding_;
  int k_offset_ = 0;  // first K symbol in the combined amalgam alphabet
  int h_rank_ = 0, k_rank_ = 0;
};

}  // namespace relhyp
