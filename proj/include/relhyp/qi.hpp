#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relhyp/complexes.hpp"

namespace relhyp {

/// Exact rational; all metric comparisons cross-multiply, no floating point.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  friend int compare(const Rational& a, const Rational& b) {
    std::int64_t lhs = a.num * b.den, rhs = b.num * a.den;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
  }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
  std::string str() const;
};

struct QICondition {
  bool pass = true;
  std::int64_t worst_defect = 0;  // positive = violation, in cross-multiplied units
  std::vector<int> witness;       // vertex ids in the source graphs
  std::vector<std::string> witness_text;
};

struct QIVerdict {
  Rational lambda{1, 1}, additive{0, 1}, epsilon{0, 1};
  QICondition lower, upper, density;
  std::size_t checked_pairs = 0;
  std::size_t skipped_pairs = 0;  // pairs whose image fell outside the target ball
  std::string note;

  bool pass() const { return lower.pass && upper.pass && density.pass; }
  std::string to_json() const;
};

/// Exhaustive check of (1/lambda) d1 - c <= d2(ax, ay) <= lambda d1 + c over
/// all vertex pairs plus epsilon-density of the image; exact arithmetic.
QIVerdict check_qi_map(const LabeledGraph& g1, const LabeledGraph& g2,
                       const std::vector<int>& alpha, Rational lambda, Rational additive,
                       Rational epsilon);

struct EqdefReport {
  QIVerdict alpha;  // relative ball -> coset ball, lambda = 2, c = 1/2, eps = 1
  bool provisional = false;
  bool coned_applicable = false;
  QIVerdict iota;  // identity embedding into the coned-off ball, when applicable
  LabeledGraph relative, coset, coned;
  std::string note;
  bool pass() const { return alpha.pass() && (!coned_applicable || iota.pass()); }
  std::string to_json() const;
};

/// Builds the relative and coset balls, maps g to g H_1, and verifies the
/// two comparison inequalities plus density 1 (restricted to the coset-ball
/// interior, where truncated witnesses can exist). The constants are fixed at
/// lambda = 2, c = 1/2: substituting the two inequalities into the
/// quasi-isometry definition forces them, and the report notes the choice.
EqdefReport eqdef_check(const GroupPtr& group, const std::vector<std::string>& x_names,
                        const std::vector<SubgroupSpec>& parabolics, const BallParams& p);

struct LipschitzReport {
  Rational m_forward{0, 1};
  Rational m_backward{0, 1};
  bool forward_ok = false;
  bool backward_ok = false;
  bool backward_checked = false;
  bool bijective = false;
  bool classes_constant = true;
  std::vector<std::pair<std::string, Rational>> class_displacements;
  std::string note;

  bool pass() const { return forward_ok && (!backward_checked || (bijective && backward_ok)); }
  std::string to_json() const;
};

/// M = max over one edge per label class of the image displacement; then
/// d2(beta u, beta v) <= M d1(u, v) is asserted for every pair. With
/// check_backward the roles are swapped through the inverse association.
LipschitzReport lipschitz_orbit_bound(const LabeledGraph& g1, const LabeledGraph& g2,
                                      const std::vector<int>& beta, bool check_backward);

}  // namespace relhyp
