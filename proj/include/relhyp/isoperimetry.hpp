#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "relhyp/complexes.hpp"

namespace relhyp {

/// Integer 1-chain over oriented edges; traversing an edge against its stored
/// orientation contributes -1. Zero coefficients are never stored.
struct Chain {
  std::map<int, long long> coeffs;

  void add(int edge_id, long long c) {
    auto it = coeffs.find(edge_id);
    long long v = (it == coeffs.end() ? 0 : it->second) + c;
    if (v == 0) {
      if (it != coeffs.end()) coeffs.erase(it);
    } else if (it == coeffs.end()) {
      coeffs.emplace(edge_id, v);
    } else {
      it->second = v;
    }
  }

  bool zero() const { return coeffs.empty(); }
  friend bool operator==(const Chain& a, const Chain& b) { return a.coeffs == b.coeffs; }
  Chain& operator+=(const Chain& o) {
    for (auto [e, c] : o.coeffs) add(e, c);
    return *this;
  }
};

/// Closed edge path: (edge id, traversed forward?) steps from a start vertex.
struct CyclePath {
  int start = 0;
  std::vector<std::pair<int, bool>> steps;

  std::vector<int> vertices(const LabeledGraph& g) const;  // size steps()+1, closed
  std::int64_t length(const LabeledGraph& g) const;        // scaled
};

Chain chain_of_cycle(const LabeledGraph& g, const CyclePath& c);
bool chain_boundary_zero(const LabeledGraph& g, const Chain& chain);

/// Walk an identity word from vertex 0 along generator edges.
CyclePath trace_cycle_word(const LabeledGraph& g, const GroupPtr& group, const Word& w);

/// Random closed walks: a seeded walk followed by a geodesic return.
std::vector<CyclePath> sample_cycles(const LabeledGraph& g, int count, int max_len,
                                     unsigned seed);

struct CyclePiece {
  CyclePath cycle;
  std::int64_t length = 0;
  std::int64_t diameter = 0;
  bool unsplittable = false;
};

struct FillReport {
  std::vector<CyclePiece> pieces;
  std::int64_t k = 0;
  std::int64_t input_length = 0;
  std::int64_t m_bound = 0;
  bool chain_ok = false;
  bool diam_ok = false;
  bool unsplittable = false;
};

/// Chord-splitting filler: splits while the cycle length exceeds M, using the
/// geodesic chord minimizing the larger resulting cycle length (ties by
/// smallest vertex id). Null-chain pieces are dropped.
FillReport fill_cycle(const LabeledGraph& g, const CyclePath& c, std::int64_t m_bound);

struct DecompositionReport {
  std::vector<CyclePiece> pieces;
  std::int64_t k = 0;
  std::int64_t n = 0;  // stable-letter steps in the input label
  std::int64_t input_length = 0;
  std::int64_t m_bound = 0;
  std::pair<std::int64_t, std::int64_t> base_filler_l{1, 1};  // measured L, as a fraction
  bool chain_ok = false;
  bool diam_ok = false;
  bool bound_ok = false;        // k <= L l(c) + n
  bool bookkeeping_ok = false;  // n1 + n2 + 2 = n at every split
  bool unsplittable = false;
  std::string to_json() const;
};

/// Pinch decomposition of an identity-labeled cycle in a relative ball of an
/// HNN group over parabolics [A, B] (indices a_index, b_index): each pinch
/// splits the cycle into a shortened cycle, a quadrilateral through the two
/// parabolic chord edges, and a base-group cycle handed to fill_cycle.
DecompositionReport hnn_decompose(const LabeledGraph& g, const GroupPtr& group,
                                  const CyclePath& c, std::int64_t m_bound, int a_index = 0,
                                  int b_index = 1);

struct IpRow {
  std::int64_t k = 0;
  std::int64_t l = 0;
  bool pass = false;
  bool unsplittable = false;
};

struct IpReport {
  std::vector<IpRow> rows;
  std::int64_t m_bound = 0;
  std::pair<std::int64_t, std::int64_t> l_const{1, 1};
  double pass_ratio = 0;
  std::pair<std::int64_t, std::int64_t> worst_ratio{0, 1};  // max k / l
  bool all_pass = false;
  std::string to_json() const;
};

/// Runs fill_cycle on each sample and checks k <= L l(c).
IpReport verify_ip(const LabeledGraph& g, std::int64_t m_bound,
                   std::pair<std::int64_t, std::int64_t> l_const,
                   const std::vector<CyclePath>& cycles);

}  // namespace relhyp
