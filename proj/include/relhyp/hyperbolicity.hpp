#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relhyp/complexes.hpp"

namespace relhyp {

enum class DeltaMethod { FourPointExact, FourPointBase, Slim };

std::string delta_method_name(DeltaMethod m);

/// delta = delta_num / (2 * scale) in true units; Gromov products over
/// integer-length graphs are half-integers, so this is exact.
struct DeltaReport {
  DeltaMethod method = DeltaMethod::FourPointExact;
  std::int64_t delta_num = 0;
  int scale = 1;
  std::vector<int> witness;
  bool exhaustive = true;
  int n_vertices = 0;
  std::string note;
};

/// Four-point defect 2*delta of a quadruple: largest minus middle of the
/// three pairwise distance sums.
std::int64_t four_point_defect(const LabeledGraph& g, int a, int b, int c, int d);

/// Basepoint defect 2*delta of a triple with Gromov products at w.
std::int64_t base_defect(const LabeledGraph& g, int w, int x, int y, int z);

/// Exact mode scans all quadruples (n <= 400); basepoint mode fixes the ball
/// center, is within a factor 2 of exact, and is gated at n <= 3000. Beyond a
/// gate the call refuses instead of sampling.
DeltaReport delta_four_point(const LabeledGraph& g, bool basepoint_mode, int threads = 0);

/// Slim-triangle delta over enumerated geodesic triangles; exhaustive when
/// all (triangle, geodesic-choice) configurations fit in the budget.
DeltaReport delta_slim(const LabeledGraph& g, std::size_t budget, std::size_t geodesic_cap = 4);

struct DeltaSeries {
  std::vector<int> radii;
  std::vector<DeltaReport> reports;
  std::string verdict;  // bounded | growing | inconclusive
};

/// Verdict rule: the last three values decide; all equal reads bounded, a
/// net increase with no decrease reads growing, anything else inconclusive.
DeltaSeries delta_series(const std::function<LabeledGraph(int)>& builder,
                         const std::vector<int>& radii, DeltaMethod method, int threads = 0,
                         std::size_t slim_budget = 200000);

std::string delta_series_csv(const DeltaSeries& s);

}  // namespace relhyp
