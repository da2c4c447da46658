#include "relhyp/groups.hpp"

#include <algorithm>
#include <sstream>

namespace relhyp {

namespace {

Word to_alpha(const Word& w, const AlphabetPtr& target) {
  return map_alphabet(w, target, 0);
}

// Canonical word of a free-abelian element with the given exponent vector.
Word abelian_word(const AlphabetPtr& alpha, const std::vector<long long>& vec) {
  std::vector<Letter> raw;
  for (int i = 0; i < static_cast<int>(vec.size()); ++i) {
    long long e = vec[static_cast<size_t>(i)];
    int sign = e < 0 ? -1 : 1;
    for (long long k = 0; k < (e < 0 ? -e : e); ++k) raw.push_back(Letter{i, sign});
  }
  return Word::reduce(alpha, std::move(raw));
}

void enumerate_abelian(const AlphabetPtr& alpha, const std::vector<int>& symbols, int budget_len,
                       std::size_t budget, std::vector<Word>& out) {
  // Vectors supported on `symbols` with total absolute value <= budget_len.
  std::vector<long long> vec(static_cast<size_t>(alpha->rank()), 0);
  auto rec = [&](auto&& self, size_t k, int remaining) -> void {
    if (k == symbols.size()) {
      bool zero = true;
      for (long long e : vec)
        if (e != 0) zero = false;
      if (!zero) {
        out.push_back(abelian_word(alpha, vec));
        if (out.size() > budget) fail(ErrorCode::Budget, "abelian enumeration budget exceeded");
      }
      return;
    }
    for (int e = -remaining; e <= remaining; ++e) {
      vec[static_cast<size_t>(symbols[k])] = e;
      self(self, k + 1, remaining - (e < 0 ? -e : e));
    }
    vec[static_cast<size_t>(symbols[k])] = 0;
  };
  rec(rec, 0, budget_len);
}

void enumerate_free_words(const AlphabetPtr& alpha, int max_len, std::size_t budget,
                          std::vector<Word>& out) {
  std::vector<Letter> path;
  const int dirs = 2 * alpha->rank();
  auto rec = [&](auto&& self) -> void {
    if (!path.empty()) {
      out.push_back(Word::reduce(alpha, path));
      if (out.size() > budget) fail(ErrorCode::Budget, "free ball enumeration budget exceeded");
    }
    if (static_cast<int>(path.size()) >= max_len) return;
    for (int d = 0; d < dirs; ++d) {
      if (!path.empty() && dir_of(path.back()) == (d ^ 1)) continue;
      path.push_back(letter_of_dir(d));
      self(self);
      path.pop_back();
    }
  };
  rec(rec);
}

}  // namespace

// ---------------------------------------------------------------------------
// Specs

SubgroupSpec SubgroupSpec::folded(std::vector<std::string> gens) {
  SubgroupSpec s;
  s.kind = SubKind::FoldedFree;
  s.generators = std::move(gens);
  return s;
}
SubgroupSpec SubgroupSpec::commutator_kernel() {
  SubgroupSpec s;
  s.kind = SubKind::CommutatorKernel;
  return s;
}
SubgroupSpec SubgroupSpec::coordinate_lattice(std::vector<std::string> coords) {
  SubgroupSpec s;
  s.kind = SubKind::CoordinateLattice;
  s.coordinates = std::move(coords);
  return s;
}
SubgroupSpec SubgroupSpec::trivial() { return SubgroupSpec{}; }
SubgroupSpec SubgroupSpec::whole() {
  SubgroupSpec s;
  s.kind = SubKind::Whole;
  return s;
}

std::string SubgroupSpec::describe() const {
  switch (kind) {
    case SubKind::FoldedFree: {
      std::string s = "folded<";
      for (size_t i = 0; i < generators.size(); ++i) {
        if (i) s += ",";
        s += generators[i];
      }
      return s + ">";
    }
    case SubKind::CommutatorKernel:
      return "commutator_kernel";
    case SubKind::CoordinateLattice: {
      std::string s = "lattice<";
      for (size_t i = 0; i < coordinates.size(); ++i) {
        if (i) s += ",";
        s += coordinates[i];
      }
      return s + ">";
    }
    case SubKind::Trivial:
      return "trivial";
    case SubKind::Whole:
      return "whole";
  }
  return "?";
}

GroupSpec GroupSpec::free_group(int rank, std::vector<std::string> names) {
  GroupSpec g;
  g.kind = GroupKind::Free;
  g.rank = rank;
  g.alphabet = std::move(names);
  return g;
}
GroupSpec GroupSpec::free_abelian(int rank, std::vector<std::string> names) {
  GroupSpec g;
  g.kind = GroupKind::FreeAbelian;
  g.rank = rank;
  g.alphabet = std::move(names);
  return g;
}
GroupSpec GroupSpec::product(std::vector<GroupSpec> factors) {
  GroupSpec g;
  g.kind = GroupKind::Product;
  g.factors = std::move(factors);
  return g;
}
GroupSpec GroupSpec::hnn(GroupSpec base, SubgroupSpec a, SubgroupSpec b,
                         std::vector<std::string> phi, std::string stable) {
  GroupSpec g;
  g.kind = GroupKind::Hnn;
  g.base = std::make_shared<GroupSpec>(std::move(base));
  g.sub_a = std::move(a);
  g.sub_b = std::move(b);
  g.phi = std::move(phi);
  g.stable = std::move(stable);
  return g;
}
GroupSpec GroupSpec::amalgam(GroupSpec h, GroupSpec k, SubgroupSpec a, SubgroupSpec b,
                             std::vector<std::string> phi, std::string stable) {
  GroupSpec g;
  g.kind = GroupKind::Amalgam;
  g.left = std::make_shared<GroupSpec>(std::move(h));
  g.right = std::make_shared<GroupSpec>(std::move(k));
  g.sub_a = std::move(a);
  g.sub_b = std::move(b);
  g.phi = std::move(phi);
  g.stable = std::move(stable);
  return g;
}

// ---------------------------------------------------------------------------
// Carrier-level subgroup machinery shared by parabolics and HNN associated
// subgroups. The carrier is always a Free / FreeAbelian / Product group.

struct CarrierSub {
  SubgroupSpec spec;
  GroupPtr carrier;
  std::shared_ptr<const SubgroupGraph> graph;  // FoldedFree
  std::vector<Word> gens;                      // FoldedFree listed generators
  std::vector<int> basis_to_listed;            // FoldedFree in assoc mode
  std::vector<int> basis_sign;
  std::vector<int> coords;  // CoordinateLattice symbol indices

  static CarrierSub build(GroupPtr carrier, const SubgroupSpec& spec, bool assoc_mode);

  bool member(const Word& w) const;
  Word left_rep(const Word& w) const;
  std::vector<Word> enumerate(int max_len, std::size_t budget) const;
};

CarrierSub CarrierSub::build(GroupPtr carrier, const SubgroupSpec& spec, bool assoc_mode) {
  CarrierSub s;
  s.spec = spec;
  s.carrier = std::move(carrier);
  switch (spec.kind) {
    case SubKind::FoldedFree: {
      if (s.carrier->kind() != GroupKind::Free)
        fail(ErrorCode::Unsupported, "folded subgroup requires a free carrier");
      for (const auto& g : spec.generators)
        s.gens.push_back(parse_word(s.carrier->alphabet(), g));
      s.graph = std::make_shared<const SubgroupGraph>(
          SubgroupGraph::fold(s.carrier->alphabet(), s.gens));
      if (assoc_mode) {
        if (s.graph->rank() != static_cast<int>(s.gens.size()))
          fail(ErrorCode::Unsupported,
               "associated subgroup generators must be a free basis (rank mismatch)");
        s.basis_to_listed.assign(static_cast<size_t>(s.graph->rank()), -1);
        s.basis_sign.assign(static_cast<size_t>(s.graph->rank()), 0);
        for (int i = 0; i < static_cast<int>(s.gens.size()); ++i) {
          Word expr = s.graph->express_in_basis(s.gens[static_cast<size_t>(i)]);
          if (expr.size() != 1)
            fail(ErrorCode::Unsupported,
                 "associated subgroup generator is not a single basis letter: " +
                     format_word(s.gens[static_cast<size_t>(i)]));
          Letter l = expr.letters()[0];
          if (s.basis_to_listed[static_cast<size_t>(l.symbol)] != -1)
            fail(ErrorCode::Unsupported, "associated subgroup generators are not independent");
          s.basis_to_listed[static_cast<size_t>(l.symbol)] = i;
          s.basis_sign[static_cast<size_t>(l.symbol)] = l.sign;
        }
      }
      break;
    }
    case SubKind::CommutatorKernel:
      if (s.carrier->kind() != GroupKind::Free)
        fail(ErrorCode::Unsupported, "commutator kernel requires a free carrier");
      break;
    case SubKind::CoordinateLattice: {
      if (s.carrier->kind() != GroupKind::FreeAbelian)
        fail(ErrorCode::Unsupported, "coordinate lattice requires a free abelian carrier");
      for (const auto& name : spec.coordinates) {
        int idx = s.carrier->alphabet()->index(name);
        if (idx < 0) fail(ErrorCode::Alphabet, "unknown lattice coordinate: " + name);
        if (std::find(s.coords.begin(), s.coords.end(), idx) != s.coords.end())
          fail(ErrorCode::Invalid, "duplicate lattice coordinate: " + name);
        s.coords.push_back(idx);
      }
      break;
    }
    case SubKind::Trivial:
      break;
    case SubKind::Whole:
      if (assoc_mode)
        fail(ErrorCode::Unsupported,
             "whole-carrier associated subgroups are not supported; list a free basis instead");
      break;
  }
  return s;
}

bool CarrierSub::member(const Word& w) const {
  switch (spec.kind) {
    case SubKind::FoldedFree:
      return graph->member(w);
    case SubKind::CommutatorKernel: {
      for (long long e : exponent_vector(w))
        if (e != 0) return false;
      return true;
    }
    case SubKind::CoordinateLattice: {
      auto vec = exponent_vector(w);
      for (int i = 0; i < static_cast<int>(vec.size()); ++i)
        if (vec[static_cast<size_t>(i)] != 0 &&
            std::find(coords.begin(), coords.end(), i) == coords.end())
          return false;
      return true;
    }
    case SubKind::Trivial:
      return carrier->is_identity(w);
    case SubKind::Whole:
      return true;
  }
  return false;
}

Word CarrierSub::left_rep(const Word& w) const {
  switch (spec.kind) {
    case SubKind::FoldedFree:
      return graph->left_rep(w);
    case SubKind::CommutatorKernel:
      // Normal subgroup; the coset is determined by the exponent vector.
      return abelian_word(carrier->alphabet(), exponent_vector(w));
    case SubKind::CoordinateLattice: {
      auto vec = exponent_vector(w);
      for (int c : coords) vec[static_cast<size_t>(c)] = 0;
      return abelian_word(carrier->alphabet(), vec);
    }
    case SubKind::Trivial:
      return carrier->canonical_word(w);
    case SubKind::Whole:
      return Word::empty(carrier->alphabet());
  }
  return Word::empty(carrier->alphabet());
}

std::vector<Word> CarrierSub::enumerate(int max_len, std::size_t budget) const {
  switch (spec.kind) {
    case SubKind::FoldedFree:
      return graph->enumerate_members(max_len, budget);
    case SubKind::CommutatorKernel: {
      std::vector<Word> all;
      enumerate_free_words(carrier->alphabet(), max_len, budget, all);
      std::vector<Word> out;
      for (const Word& w : all) {
        bool zero = true;
        for (long long e : exponent_vector(w))
          if (e != 0) zero = false;
        if (zero) out.push_back(w);
      }
      return out;
    }
    case SubKind::CoordinateLattice: {
      std::vector<Word> out;
      enumerate_abelian(carrier->alphabet(), coords, max_len, budget, out);
      return out;
    }
    case SubKind::Trivial:
      return {};
    case SubKind::Whole:
      return carrier->enumerate_ball(max_len, budget);
  }
  return {};
}

// ---------------------------------------------------------------------------
// HNN associated-subgroup pair

struct Group::Assoc {
  CarrierSub a, b;

  bool member(const Word& base_word, bool a_side) const {
    return a_side ? a.member(base_word) : b.member(base_word);
  }

  Word left_rep(const Word& base_word, bool a_side) const {
    return a_side ? a.left_rep(base_word) : b.left_rep(base_word);
  }

  // Extends phi (A -> B when a_to_b) to the full associated subgroup.
  Word map(const Word& base_word, bool a_to_b) const {
    const CarrierSub& src = a_to_b ? a : b;
    const CarrierSub& dst = a_to_b ? b : a;
    switch (src.spec.kind) {
      case SubKind::FoldedFree: {
        Word expr = src.graph->express_in_basis(base_word);
        Word out = Word::empty(src.carrier->alphabet());
        for (const Letter& l : expr.letters()) {
          int listed = src.basis_to_listed[static_cast<size_t>(l.symbol)];
          int delta = src.basis_sign[static_cast<size_t>(l.symbol)];
          out = product(out,
                        word_power(dst.gens[static_cast<size_t>(listed)], l.sign * delta));
        }
        return out;
      }
      case SubKind::CommutatorKernel:
        return base_word;  // phi restricted to the identity
      case SubKind::CoordinateLattice: {
        auto vec = exponent_vector(base_word);
        std::vector<long long> image(vec.size(), 0);
        for (size_t k = 0; k < src.coords.size(); ++k)
          image[static_cast<size_t>(dst.coords[k])] = vec[static_cast<size_t>(src.coords[k])];
        return abelian_word(src.carrier->alphabet(), image);
      }
      case SubKind::Trivial:
        return Word::empty(src.carrier->alphabet());
      case SubKind::Whole:
        break;
    }
    fail(ErrorCode::Unsupported, "unsupported associated subgroup");
  }
};

// ---------------------------------------------------------------------------
// Group construction

GroupPtr Group::create(const GroupSpec& spec) {
  auto g = std::shared_ptr<Group>(new Group());
  g->spec_ = spec;
  g->kind_ = spec.kind;
  switch (spec.kind) {
    case GroupKind::Free:
    case GroupKind::FreeAbelian: {
      if (spec.rank < 0) fail(ErrorCode::Invalid, "negative rank");
      if (!spec.alphabet.empty()) {
        if (static_cast<int>(spec.alphabet.size()) != spec.rank)
          fail(ErrorCode::Invalid, "alphabet size does not match rank");
        g->alpha_ = make_alphabet(spec.alphabet);
      } else {
        g->alpha_ = default_alphabet(spec.rank);
      }
      g->rank_ = spec.rank;
      break;
    }
    case GroupKind::Product: {
      if (spec.factors.empty()) fail(ErrorCode::Invalid, "empty product");
      std::vector<std::string> names;
      for (const auto& f : spec.factors) {
        auto fg = Group::create(f);
        if (fg->kind() == GroupKind::Hnn || fg->kind() == GroupKind::Amalgam)
          fail(ErrorCode::Unsupported, "product factors must be free or free abelian");
        g->factor_offsets_.push_back(static_cast<int>(names.size()));
        for (const auto& n : fg->alphabet()->names()) names.push_back(n);
        g->factors_.push_back(std::move(fg));
      }
      g->alpha_ = make_alphabet(std::move(names));
      g->rank_ = g->alpha_->rank();
      break;
    }
    case GroupKind::Hnn: {
      if (!spec.base) fail(ErrorCode::Invalid, "hnn without base");
      if (spec.base->kind == GroupKind::Hnn || spec.base->kind == GroupKind::Amalgam)
        fail(ErrorCode::Unsupported,
             "hnn base must be free, free abelian, or a product of these");
      g->base_ = Group::create(*spec.base);
      std::vector<std::string> names = g->base_->alphabet()->names();
      if (g->base_->alphabet()->index(spec.stable) >= 0)
        fail(ErrorCode::Invalid, "stable letter collides with a base generator");
      names.push_back(spec.stable);
      g->alpha_ = make_alphabet(std::move(names));
      g->stable_sym_ = g->base_->alphabet()->rank();
      g->rank_ = g->alpha_->rank();

      auto assoc = std::make_shared<Assoc>();
      assoc->a = CarrierSub::build(g->base_, spec.sub_a, true);
      assoc->b = CarrierSub::build(g->base_, spec.sub_b, true);
      if (assoc->a.spec.kind != assoc->b.spec.kind)
        fail(ErrorCode::Unsupported, "associated subgroups must be of one kind");
      size_t na = assoc->a.spec.kind == SubKind::CoordinateLattice ? assoc->a.coords.size()
                                                                   : assoc->a.gens.size();
      size_t nb = assoc->b.spec.kind == SubKind::CoordinateLattice ? assoc->b.coords.size()
                                                                   : assoc->b.gens.size();
      if (na != nb)
        fail(ErrorCode::Invalid, "associated subgroups have different generator counts");
      if (!spec.phi.empty()) {
        switch (assoc->a.spec.kind) {
          case SubKind::FoldedFree: {
            if (spec.phi.size() != assoc->b.gens.size())
              fail(ErrorCode::Invalid, "phi length does not match generator count");
            for (size_t i = 0; i < spec.phi.size(); ++i) {
              Word img = parse_word(g->base_->alphabet(), spec.phi[i]);
              if (!g->base_->is_identity(product(img, inverse(assoc->b.gens[i]))))
                fail(ErrorCode::Invalid,
                     "phi image differs from the listed B generator at index " +
                         std::to_string(i));
            }
            break;
          }
          case SubKind::CoordinateLattice: {
            if (spec.phi.size() != assoc->b.coords.size())
              fail(ErrorCode::Invalid, "phi length does not match coordinate count");
            for (size_t i = 0; i < spec.phi.size(); ++i) {
              Word img = parse_word(g->base_->alphabet(), spec.phi[i]);
              Word want = single(g->base_->alphabet(), assoc->b.coords[i], 1);
              if (!g->base_->is_identity(product(img, inverse(want))))
                fail(ErrorCode::Invalid, "phi must rename coordinates in listed order");
            }
            break;
          }
          default:
            fail(ErrorCode::Invalid, "phi must be empty for this associated subgroup kind");
        }
      }
      g->assoc_ = std::move(assoc);
      break;
    }
    case GroupKind::Amalgam: {
      if (!spec.left || !spec.right) fail(ErrorCode::Invalid, "amalgam needs two factors");
      if (spec.left->kind != GroupKind::Free || spec.right->kind != GroupKind::Free)
        fail(ErrorCode::Unsupported, "amalgam factors must be free groups");
      auto h = Group::create(*spec.left);
      auto k = Group::create(*spec.right);
      std::vector<std::string> names = h->alphabet()->names();
      for (const auto& n : k->alphabet()->names()) names.push_back(n);
      g->alpha_ = make_alphabet(names);  // throws on a name collision
      g->rank_ = g->alpha_->rank();
      g->h_rank_ = h->alphabet()->rank();
      g->k_rank_ = k->alphabet()->rank();
      g->k_offset_ = g->h_rank_;
      if (spec.sub_a.kind != SubKind::FoldedFree && spec.sub_a.kind != SubKind::Trivial)
        fail(ErrorCode::Unsupported, "amalgamated subgroups must be folded-free or trivial");
      if (spec.sub_b.kind != spec.sub_a.kind)
        fail(ErrorCode::Unsupported, "amalgamated subgroups must be of one kind");
      GroupSpec emb = GroupSpec::hnn(GroupSpec::free_group(g->rank_, names), spec.sub_a,
                                     spec.sub_b, spec.phi, spec.stable);
      g->embedding_ = Group::create(emb);
      break;
    }
  }
  return g;
}

const GroupPtr& Group::base() const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "base() on a non-HNN group");
  return base_;
}

int Group::stable_symbol() const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "stable_symbol() on a non-HNN group");
  return stable_sym_;
}

const GroupPtr& Group::embedding() const {
  if (kind_ != GroupKind::Amalgam) fail(ErrorCode::Invalid, "embedding() on a non-amalgam");
  return embedding_;
}

GroupPtr Group::working_group() const {
  if (kind_ == GroupKind::Amalgam) return embedding_;
  return shared_from_this();
}

Word Group::working_letter(const Letter& l) const {
  if (kind_ != GroupKind::Amalgam) return single(alpha_, l.symbol, l.sign);
  return amalgam_embed_word(single(alpha_, l.symbol, l.sign));
}

Word Group::amalgam_embed_word(const Word& w) const {
  if (kind_ != GroupKind::Amalgam) fail(ErrorCode::Invalid, "embed on a non-amalgam");
  if (w.alphabet() != alpha_ && !w.alphabet()->same(*alpha_))
    fail(ErrorCode::Alphabet, "word over a different alphabet");
  const AlphabetPtr& full = embedding_->alphabet();
  int t = embedding_->stable_symbol();
  std::vector<Letter> raw;
  for (const Letter& l : w.letters()) {
    if (l.symbol >= k_offset_) {
      raw.push_back(Letter{t, 1});
      raw.push_back(l);
      raw.push_back(Letter{t, -1});
    } else {
      raw.push_back(l);
    }
  }
  return Word::reduce(full, std::move(raw));
}

// ---------------------------------------------------------------------------
// Decision procedures

Word Group::canonical_base_word(const Word& w) const {
  switch (kind_) {
    case GroupKind::Free:
      return w;
    case GroupKind::FreeAbelian:
      return abelian_word(alpha_, exponent_vector(w));
    case GroupKind::Product: {
      std::vector<std::vector<Letter>> parts(factors_.size());
      for (const Letter& l : w.letters()) {
        size_t f = factors_.size() - 1;
        while (l.symbol < factor_offsets_[f]) --f;
        parts[f].push_back(Letter{l.symbol - factor_offsets_[f], l.sign});
      }
      std::vector<Letter> raw;
      for (size_t f = 0; f < factors_.size(); ++f) {
        Word cf = factors_[f]->canonical_word(
            Word::reduce(factors_[f]->alphabet(), std::move(parts[f])));
        for (const Letter& l : cf.letters())
          raw.push_back(Letter{l.symbol + factor_offsets_[f], l.sign});
      }
      return Word::reduce(alpha_, std::move(raw));
    }
    default:
      fail(ErrorCode::Invalid, "canonical_base_word on a non-carrier group");
  }
}

bool Group::is_identity(const Word& w) const {
  if (!w.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  if (w.alphabet() != alpha_ && !w.alphabet()->same(*alpha_))
    fail(ErrorCode::Alphabet, "word over a different alphabet");
  switch (kind_) {
    case GroupKind::Free:
      return w.is_empty();
    case GroupKind::FreeAbelian: {
      for (long long e : exponent_vector(w))
        if (e != 0) return false;
      return true;
    }
    case GroupKind::Product:
      return canonical_base_word(w).is_empty();
    case GroupKind::Hnn: {
      Word r = britton_reduce(w);
      for (const Letter& l : r.letters())
        if (l.symbol == stable_sym_) return false;
      return base_->is_identity(to_alpha(r, base_->alphabet()));
    }
    case GroupKind::Amalgam:
      return embedding_->is_identity(amalgam_embed_word(w));
  }
  return false;
}

std::optional<Pinch> Group::pinch_find(const Word& w) const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "pinch_find on a non-HNN group");
  const auto& ls = w.letters();
  std::vector<size_t> tpos;
  for (size_t i = 0; i < ls.size(); ++i)
    if (ls[i].symbol == stable_sym_) tpos.push_back(i);
  for (size_t k = 0; k + 1 < tpos.size(); ++k) {
    size_t p = tpos[k], q = tpos[k + 1];
    std::vector<Letter> mid(ls.begin() + static_cast<std::ptrdiff_t>(p) + 1,
                            ls.begin() + static_cast<std::ptrdiff_t>(q));
    Word v = Word::reduce(base_->alphabet(), std::move(mid));
    if (ls[p].sign < 0 && ls[q].sign > 0 && assoc_->member(v, true))
      return Pinch{p, q + 1, true};
    if (ls[p].sign > 0 && ls[q].sign < 0 && assoc_->member(v, false))
      return Pinch{p, q + 1, false};
  }
  return std::nullopt;
}

Word Group::britton_reduce(const Word& w) const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "britton_reduce on a non-HNN group");
  Word cur = w;
  for (;;) {
    auto p = pinch_find(cur);
    if (!p) return cur;
    const auto& ls = cur.letters();
    std::vector<Letter> mid(ls.begin() + static_cast<std::ptrdiff_t>(p->begin) + 1,
                            ls.begin() + static_cast<std::ptrdiff_t>(p->end) - 1);
    Word v = Word::reduce(base_->alphabet(), std::move(mid));
    Word image = assoc_->map(v, p->a_side);
    std::vector<Letter> raw(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(p->begin));
    for (const Letter& l : image.letters()) raw.push_back(l);
    raw.insert(raw.end(), ls.begin() + static_cast<std::ptrdiff_t>(p->end), ls.end());
    cur = Word::reduce(alpha_, std::move(raw));
  }
}

Word Group::phi_apply(const Word& w, bool a_to_b) const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "phi_apply on a non-HNN group");
  for (const Letter& l : w.letters())
    if (l.symbol == stable_sym_)
      fail(ErrorCode::Invalid, "phi_apply expects a base-group word");
  Word b = to_alpha(w, base_->alphabet());
  if (!assoc_->member(b, a_to_b))
    fail(ErrorCode::Membership, "phi_apply input is not in the associated subgroup");
  return to_alpha(assoc_->map(b, a_to_b), alpha_);
}

bool Group::assoc_member(const Word& base_word, bool a_side) const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "assoc_member on a non-HNN group");
  return assoc_->member(to_alpha(base_word, base_->alphabet()), a_side);
}

HnnNormalForm Group::hnn_normal_form(const Word& w) const {
  if (kind_ != GroupKind::Hnn) fail(ErrorCode::Invalid, "hnn_normal_form on a non-HNN group");
  HnnNormalForm nf;
  Word carry = Word::empty(base_->alphabet());
  auto process = [&](int e) {
    // Incoming stable letter t^e after the accumulated base chunk `carry`.
    bool a_side = e > 0;  // t^-1 (carry) t pinches over A, t (carry) t^-1 over B
    if (!nf.eps.empty() && nf.eps.back() == -e && assoc_->member(carry, a_side)) {
      Word g = assoc_->map(carry, a_side);
      carry = product(nf.reps.back(), g);
      nf.reps.pop_back();
      nf.eps.pop_back();
    } else {
      Word r = assoc_->left_rep(carry, a_side);
      Word g = assoc_->map(product(inverse(r), carry), a_side);
      nf.reps.push_back(r);
      nf.eps.push_back(e);
      carry = g;
    }
  };
  for (const Letter& l : w.letters()) {
    if (l.symbol == stable_sym_) {
      process(l.sign);
    } else {
      carry = product(carry, single(base_->alphabet(), l.symbol, l.sign));
    }
  }
  nf.carry = carry;
  return nf;
}

Word Group::canonical_word(const Word& w) const {
  if (!w.valid()) fail(ErrorCode::Invalid, "uninitialized word");
  switch (kind_) {
    case GroupKind::Free:
    case GroupKind::FreeAbelian:
    case GroupKind::Product: {
      if (w.alphabet() != alpha_ && !w.alphabet()->same(*alpha_))
        fail(ErrorCode::Alphabet, "word over a different alphabet");
      return canonical_base_word(w);
    }
    case GroupKind::Hnn: {
      HnnNormalForm nf = hnn_normal_form(w);
      std::vector<Letter> raw;
      for (size_t i = 0; i < nf.eps.size(); ++i) {
        Word rep = base_->canonical_word(nf.reps[i]);
        for (const Letter& l : rep.letters()) raw.push_back(l);
        raw.push_back(Letter{stable_sym_, nf.eps[i]});
      }
      Word tail = base_->canonical_word(nf.carry);
      for (const Letter& l : tail.letters()) raw.push_back(l);
      return Word::reduce(alpha_, std::move(raw));
    }
    case GroupKind::Amalgam:
      return embedding_->canonical_word(amalgam_embed_word(w));
  }
  fail(ErrorCode::Invalid, "unreachable");
}

std::vector<Word> Group::enumerate_ball(int max_len, std::size_t budget) const {
  std::vector<Word> out;
  switch (kind_) {
    case GroupKind::Free:
      enumerate_free_words(alpha_, max_len, budget, out);
      return out;
    case GroupKind::FreeAbelian: {
      std::vector<int> all;
      for (int i = 0; i < rank_; ++i) all.push_back(i);
      enumerate_abelian(alpha_, all, max_len, budget, out);
      return out;
    }
    case GroupKind::Product: {
      // Tuples of factor elements with total canonical length <= max_len.
      std::vector<std::vector<Word>> balls;
      for (const auto& f : factors_) {
        auto b = f->enumerate_ball(max_len, budget);
        b.insert(b.begin(), Word::empty(f->alphabet()));
        balls.push_back(std::move(b));
      }
      std::vector<Letter> acc;
      auto rec = [&](auto&& self, size_t f, int remaining) -> void {
        if (f == factors_.size()) {
          if (!acc.empty()) {
            out.push_back(Word::reduce(alpha_, acc));
            if (out.size() > budget)
              fail(ErrorCode::Budget, "product enumeration budget exceeded");
          }
          return;
        }
        for (const Word& cw : balls[f]) {
          if (static_cast<int>(cw.size()) > remaining) continue;
          size_t mark = acc.size();
          for (const Letter& l : cw.letters())
            acc.push_back(Letter{l.symbol + factor_offsets_[f], l.sign});
          self(self, f + 1, remaining - static_cast<int>(cw.size()));
          acc.resize(mark);
        }
      };
      rec(rec, 0, max_len);
      return out;
    }
    default:
      fail(ErrorCode::Unsupported, "element enumeration is only defined for carrier groups");
  }
}

std::string Group::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case GroupKind::Free:
      out << "F(";
      break;
    case GroupKind::FreeAbelian:
      out << "Z^" << rank_ << "(";
      break;
    case GroupKind::Product: {
      out << "product(";
      for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) out << " x ";
        out << factors_[i]->describe();
      }
      out << ")";
      return out.str();
    }
    case GroupKind::Hnn:
      out << "hnn<" << base_->describe() << "; A=" << spec_.sub_a.describe()
          << ", B=" << spec_.sub_b.describe() << ", t=" << spec_.stable << ">";
      return out.str();
    case GroupKind::Amalgam:
      out << "amalgam<A=" << spec_.sub_a.describe() << ", B=" << spec_.sub_b.describe() << ">";
      return out.str();
  }
  for (int i = 0; i < alpha_->rank(); ++i) {
    if (i) out << ",";
    out << alpha_->name(i);
  }
  out << ")";
  return out.str();
}

// ---------------------------------------------------------------------------
// Parabolic subgroups

struct Subgroup::Impl {
  GroupPtr ambient;  // working group: carrier or HNN over the carrier
  GroupPtr carrier;
  CarrierSub sub;
  SubgroupSpec spec;
  // Amalgam K-factor subgroups sit inside the HNN embedding as t K t^-1;
  // conj carries that twist, and is empty everywhere else.
  Word conj;

  bool hnn() const { return ambient->kind() == GroupKind::Hnn; }
  bool twisted() const { return conj.valid() && !conj.is_empty(); }

  Word to_carrier(const Word& w) const {
    for (const Letter& l : w.letters())
      if (l.symbol >= carrier->alphabet()->rank())
        fail(ErrorCode::Membership, "word does not lie in the base carrier");
    return map_alphabet(w, carrier->alphabet(), 0);
  }

  bool plain_member(const Word& w) const;
  Word plain_left_rep(const Word& w) const;
  Word plain_connecting(const Word& u, const Word& v) const;
};

Subgroup Group::parabolic(const SubgroupSpec& spec) const {
  GroupPtr working = working_group();
  auto impl = std::make_shared<Subgroup::Impl>();
  impl->ambient = working;
  impl->carrier = working->kind() == GroupKind::Hnn ? working->base() : working;
  impl->spec = spec;
  if (kind_ == GroupKind::Amalgam) {
    // The decidable amalgam parabolics are subgroups of one factor.
    switch (spec.kind) {
      case SubKind::Trivial:
        break;
      case SubKind::FoldedFree: {
        bool h_side = true, k_side = true;
        for (const auto& text : spec.generators) {
          Word gw = parse_word(impl->carrier->alphabet(), text);
          for (const Letter& l : gw.letters()) {
            if (l.symbol >= k_offset_) h_side = false;
            if (l.symbol < k_offset_) k_side = false;
          }
        }
        if (!h_side && !k_side)
          fail(ErrorCode::Unsupported,
               "amalgam parabolic generators must lie in a single factor");
        if (k_side && !spec.generators.empty())
          impl->conj = single(working->alphabet(), working->stable_symbol(), 1);
        break;
      }
      default:
        fail(ErrorCode::Unsupported,
             "amalgam parabolics must be folded-free factor subgroups or trivial");
    }
  }
  impl->sub = CarrierSub::build(impl->carrier, spec, false);
  Subgroup s;
  s.impl_ = std::move(impl);
  return s;
}

const SubgroupSpec& Subgroup::spec() const { return impl_->spec; }

std::string Subgroup::describe() const { return impl_->spec.describe(); }

bool Subgroup::Impl::plain_member(const Word& w) const {
  if (hnn()) {
    Word r = ambient->britton_reduce(w);
    for (const Letter& l : r.letters())
      if (l.symbol == ambient->stable_symbol()) return false;
    return sub.member(to_carrier(r));
  }
  return sub.member(to_carrier(w));
}

Word Subgroup::Impl::plain_left_rep(const Word& w) const {
  if (hnn()) {
    HnnNormalForm nf = ambient->hnn_normal_form(w);
    std::vector<Letter> raw;
    for (size_t i = 0; i < nf.eps.size(); ++i) {
      Word rep = carrier->canonical_word(nf.reps[i]);
      for (const Letter& l : rep.letters()) raw.push_back(l);
      raw.push_back(Letter{ambient->stable_symbol(), nf.eps[i]});
    }
    Word tail = sub.left_rep(nf.carry);
    for (const Letter& l : tail.letters()) raw.push_back(l);
    return Word::reduce(ambient->alphabet(), std::move(raw));
  }
  return to_alpha(sub.left_rep(to_carrier(w)), ambient->alphabet());
}

Word Subgroup::Impl::plain_connecting(const Word& u, const Word& v) const {
  Word w = product(inverse(u), v);
  Word base;
  if (hnn()) {
    Word r = ambient->britton_reduce(w);
    for (const Letter& l : r.letters())
      if (l.symbol == ambient->stable_symbol())
        fail(ErrorCode::Membership, "vertices are not in one parabolic coset");
    base = to_carrier(r);
  } else {
    base = to_carrier(w);
  }
  if (!sub.member(base))
    fail(ErrorCode::Membership, "vertices are not in one parabolic coset");
  return to_alpha(carrier->canonical_word(base), ambient->alphabet());
}

bool Subgroup::member(const Word& w) const {
  const Impl& im = *impl_;
  if (!im.twisted()) return im.plain_member(w);
  return im.plain_member(product({inverse(im.conj), w, im.conj}));
}

Word Subgroup::left_rep(const Word& w) const {
  const Impl& im = *impl_;
  if (!im.twisted()) return im.plain_left_rep(w);
  // Left cosets of c S c^-1 correspond to left cosets of S under x -> x c.
  return product(im.plain_left_rep(product(w, im.conj)), inverse(im.conj));
}

Word Subgroup::connecting_element(const Word& u, const Word& v) const {
  const Impl& im = *impl_;
  if (!im.twisted()) return im.plain_connecting(u, v);
  Word s = im.plain_connecting(product(u, im.conj), product(v, im.conj));
  return product({im.conj, s, inverse(im.conj)});
}

std::vector<Word> Subgroup::enumerate(int max_len, std::size_t budget) const {
  const Impl& im = *impl_;
  std::vector<Word> carrier_words = im.sub.enumerate(max_len, budget);
  std::vector<Word> out;
  out.reserve(carrier_words.size());
  for (const Word& w : carrier_words) {
    Word lifted = to_alpha(w, im.ambient->alphabet());
    out.push_back(im.twisted() ? product({im.conj, lifted, inverse(im.conj)}) : lifted);
  }
  return out;
}

}  // namespace relhyp
