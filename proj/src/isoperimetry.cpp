#include "relhyp/isoperimetry.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace relhyp {

namespace {

int step_target(const LabeledGraph& g, const std::pair<int, bool>& step) {
  const GraphEdge& e = g.edge(step.first);
  return step.second ? e.v : e.u;
}

int step_source(const LabeledGraph& g, const std::pair<int, bool>& step) {
  const GraphEdge& e = g.edge(step.first);
  return step.second ? e.u : e.v;
}

std::int64_t piece_diameter(const LabeledGraph& g, const CyclePath& c) {
  std::vector<int> vs = c.vertices(g);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  std::int64_t diam = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    auto row = g.dist_row(vs[i]);
    for (size_t j = i + 1; j < vs.size(); ++j)
      diam = std::max(diam, (*row)[static_cast<size_t>(vs[j])]);
  }
  return diam;
}

CyclePiece make_piece(const LabeledGraph& g, CyclePath c, bool unsplittable = false) {
  CyclePiece p;
  p.length = c.length(g);
  p.diameter = piece_diameter(g, c);
  p.unsplittable = unsplittable;
  p.cycle = std::move(c);
  return p;
}

// Convert a geodesic vertex path into edge steps, choosing for each hop the
// smallest-id edge realizing the length decrement.
std::vector<std::pair<int, bool>> edge_steps(const LabeledGraph& g, const std::vector<int>& path) {
  std::vector<std::pair<int, bool>> steps;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int x = path[i], y = path[i + 1];
    int best = -1;
    for (auto [w, eid] : g.neighbors(x)) {
      if (w != y) continue;
      if (best < 0 || g.edge(eid).length < g.edge(best).length ||
          (g.edge(eid).length == g.edge(best).length && eid < best))
        best = eid;
    }
    if (best < 0) fail(ErrorCode::Construction, "geodesic path has a missing edge");
    steps.emplace_back(best, g.edge(best).u == x);
  }
  return steps;
}

}  // namespace

std::vector<int> CyclePath::vertices(const LabeledGraph& g) const {
  std::vector<int> vs{start};
  int cur = start;
  for (const auto& s : steps) {
    if (step_source(g, s) != cur) fail(ErrorCode::Invalid, "cycle path is not contiguous");
    cur = step_target(g, s);
    vs.push_back(cur);
  }
  if (cur != start) fail(ErrorCode::Invalid, "cycle path is not closed");
  return vs;
}

std::int64_t CyclePath::length(const LabeledGraph& g) const {
  std::int64_t total = 0;
  for (const auto& s : steps) total += g.edge(s.first).length;
  return total;
}

Chain chain_of_cycle(const LabeledGraph& g, const CyclePath& c) {
  c.vertices(g);  // validates contiguity and closure
  Chain ch;
  for (const auto& s : c.steps) ch.add(s.first, s.second ? 1 : -1);
  return ch;
}

bool chain_boundary_zero(const LabeledGraph& g, const Chain& chain) {
  std::map<int, long long> boundary;
  for (auto [eid, c] : chain.coeffs) {
    const GraphEdge& e = g.edge(eid);
    boundary[e.v] += c;
    boundary[e.u] -= c;
  }
  for (auto [v, c] : boundary)
    if (c != 0) return false;
  return true;
}

CyclePath trace_cycle_word(const LabeledGraph& g, const GroupPtr& group, const Word& w) {
  CyclePath c;
  c.start = 0;
  int cur = 0;
  for (const Letter& l : w.letters()) {
    int found = -1;
    bool fwd = true;
    for (auto [nb, eid] : g.neighbors(cur)) {
      const GraphEdge& e = g.edge(eid);
      if (e.label.kind != EdgeLabel::Kind::Generator) continue;
      if (l.sign > 0 && e.label.gen == l && e.u == cur) {
        found = eid;
        fwd = true;
        break;
      }
      if (l.sign < 0 && e.label.gen == inv(l) && e.v == cur) {
        found = eid;
        fwd = false;
        break;
      }
    }
    if (found < 0)
      fail(ErrorCode::Truncation,
           "word leaves the built ball at letter " +
               format_word(single(group->alphabet(), l.symbol, l.sign)) +
               "; rebuild with a larger radius");
    c.steps.emplace_back(found, fwd);
    cur = fwd ? g.edge(found).v : g.edge(found).u;
  }
  if (cur != 0) fail(ErrorCode::Invalid, "word does not label a cycle at the basepoint");
  return c;
}

std::vector<CyclePath> sample_cycles(const LabeledGraph& g, int count, int max_len,
                                     unsigned seed) {
  std::mt19937_64 gen(seed);
  std::vector<CyclePath> out;
  for (int i = 0; i < count; ++i) {
    CyclePath c;
    std::uniform_int_distribution<int> start_dist(0, g.vertex_count() - 1);
    c.start = start_dist(gen);
    int cur = c.start;
    int walk = std::uniform_int_distribution<int>(1, std::max(1, max_len / 2))(gen);
    for (int s = 0; s < walk; ++s) {
      const auto& nb = g.neighbors(cur);
      if (nb.empty()) break;
      auto [w, eid] = nb[std::uniform_int_distribution<size_t>(0, nb.size() - 1)(gen)];
      bool fwd = g.edge(eid).u == cur;
      c.steps.emplace_back(eid, fwd);
      cur = fwd ? g.edge(eid).v : g.edge(eid).u;
    }
    for (const auto& s : edge_steps(g, g.geodesic(cur, c.start))) c.steps.push_back(s);
    out.push_back(std::move(c));
  }
  return out;
}

FillReport fill_cycle(const LabeledGraph& g, const CyclePath& input, std::int64_t m_bound) {
  if (m_bound < 4 * g.meta().scale)
    fail(ErrorCode::Invalid, "fill_cycle needs M >= 4 * scale");
  FillReport rep;
  rep.m_bound = m_bound;
  rep.input_length = input.length(g);
  Chain target = chain_of_cycle(g, input);

  std::deque<CyclePath> queue{input};
  while (!queue.empty()) {
    CyclePath c = queue.front();
    queue.pop_front();
    if (chain_of_cycle(g, c).zero()) continue;  // null cycles carry no content
    std::int64_t total = c.length(g);
    if (total <= m_bound) {
      rep.pieces.push_back(make_piece(g, std::move(c)));
      continue;
    }
    std::vector<int> vs = c.vertices(g);
    const size_t nsteps = c.steps.size();
    std::vector<std::int64_t> pref(nsteps + 1, 0);
    for (size_t s = 0; s < nsteps; ++s) pref[s + 1] = pref[s] + g.edge(c.steps[s].first).length;

    struct Cand {
      std::int64_t newmax;
      int vid_lo, vid_hi;
      size_t i, j;
    };
    std::optional<Cand> best;
    for (size_t i = 0; i < nsteps; ++i) {
      for (size_t j = i + 1; j <= nsteps; ++j) {
        if (vs[i] == vs[j]) continue;
        std::int64_t arc1 = pref[j] - pref[i];
        std::int64_t arc2 = total - arc1;
        if (2 * std::min(arc1, arc2) < m_bound) continue;  // chord ends M/2 apart on the cycle
        std::int64_t chord = g.distance(vs[i], vs[j]);
        std::int64_t nm = std::max(arc1, arc2) + chord;
        Cand cand{nm, std::min(vs[i], vs[j]), std::max(vs[i], vs[j]), i, j};
        if (!best || std::tuple(cand.newmax, cand.vid_lo, cand.vid_hi, cand.i, cand.j) <
                         std::tuple(best->newmax, best->vid_lo, best->vid_hi, best->i, best->j))
          best = cand;
      }
    }
    if (!best || best->newmax >= total) {
      rep.unsplittable = true;
      rep.pieces.push_back(make_piece(g, std::move(c), true));
      continue;
    }
    auto chord_steps = edge_steps(g, g.geodesic(vs[best->i], vs[best->j]));
    CyclePath c1;  // arc i..j then the chord reversed
    c1.start = vs[best->i];
    c1.steps.assign(c.steps.begin() + static_cast<std::ptrdiff_t>(best->i),
                    c.steps.begin() + static_cast<std::ptrdiff_t>(best->j));
    for (auto it = chord_steps.rbegin(); it != chord_steps.rend(); ++it)
      c1.steps.emplace_back(it->first, !it->second);
    CyclePath c2;  // chord then arc j..end..i
    c2.start = vs[best->i];
    c2.steps = chord_steps;
    c2.steps.insert(c2.steps.end(), c.steps.begin() + static_cast<std::ptrdiff_t>(best->j),
                    c.steps.end());
    c2.steps.insert(c2.steps.end(), c.steps.begin(),
                    c.steps.begin() + static_cast<std::ptrdiff_t>(best->i));
    queue.push_back(std::move(c1));
    queue.push_back(std::move(c2));
  }

  rep.k = static_cast<std::int64_t>(rep.pieces.size());
  Chain sum;
  rep.diam_ok = true;
  for (const CyclePiece& p : rep.pieces) {
    sum += chain_of_cycle(g, p.cycle);
    if (p.diameter > m_bound) rep.diam_ok = false;
  }
  rep.chain_ok = sum == target;
  return rep;
}

namespace {

// Effective letter of a generator step, accounting for traversal direction.
Letter step_letter(const LabeledGraph& g, const std::pair<int, bool>& s) {
  const Letter& l = g.edge(s.first).label.gen;
  return s.second ? l : inv(l);
}

Word step_word(const LabeledGraph& g, const GroupPtr& working,
               const std::pair<int, bool>& s) {
  const GraphEdge& e = g.edge(s.first);
  switch (e.label.kind) {
    case EdgeLabel::Kind::Generator: {
      Letter l = step_letter(g, s);
      return single(working->alphabet(), l.symbol, l.sign);
    }
    case EdgeLabel::Kind::Parabolic:
      return s.second ? e.label.h : inverse(e.label.h);
    default:
      fail(ErrorCode::Invalid, "cycle uses an edge kind outside the relative ball model");
  }
}

int find_parabolic_edge(const LabeledGraph& g, int u, int v, int pindex) {
  for (auto [w, eid] : g.neighbors(u)) {
    if (w != v) continue;
    const GraphEdge& e = g.edge(eid);
    if (e.label.kind == EdgeLabel::Kind::Parabolic && e.label.i == pindex) return eid;
  }
  return -1;
}

struct DecomposeState {
  const LabeledGraph& g;
  GroupPtr group;
  std::int64_t m_bound;
  int a_index, b_index;
  DecompositionReport rep;
  std::pair<std::int64_t, std::int64_t> max_fill{0, 1};

  void emit(CyclePath c, bool unsplittable = false) {
    if (chain_of_cycle(g, c).zero()) return;
    rep.pieces.push_back(make_piece(g, std::move(c), unsplittable));
  }

  std::int64_t t_count(const CyclePath& c) const {
    std::int64_t n = 0;
    for (const auto& s : c.steps) {
      const GraphEdge& e = g.edge(s.first);
      if (e.label.kind == EdgeLabel::Kind::Generator &&
          e.label.gen.symbol == group->stable_symbol())
        ++n;
    }
    return n;
  }

  void run(const CyclePath& c) {
    std::int64_t n = t_count(c);
    if (n == 0) {
      FillReport fill = fill_cycle(g, c, m_bound);
      if (fill.unsplittable) rep.unsplittable = true;
      for (CyclePiece& p : fill.pieces) rep.pieces.push_back(std::move(p));
      std::int64_t l = c.length(g);
      if (l > 0 && fill.k * max_fill.second > max_fill.first * l) max_fill = {fill.k, l};
      return;
    }

    // Innermost pinch: consecutive stable-letter steps with the base chunk
    // between them in the matching associated subgroup.
    std::vector<size_t> tpos;
    for (size_t s = 0; s < c.steps.size(); ++s) {
      const GraphEdge& e = g.edge(c.steps[s].first);
      if (e.label.kind == EdgeLabel::Kind::Generator &&
          e.label.gen.symbol == group->stable_symbol())
        tpos.push_back(s);
    }
    auto chunk_word = [&](size_t p, size_t q) {
      Word w = Word::empty(group->alphabet());
      for (size_t s = p + 1; s < q; ++s) w = product(w, step_word(g, group, c.steps[s]));
      return w;
    };
    std::optional<std::tuple<size_t, size_t, bool>> pinch;  // (p, q, a_side)
    for (size_t k = 0; k + 1 < tpos.size() && !pinch; ++k) {
      size_t p = tpos[k], q = tpos[k + 1];
      int sp = step_letter(g, c.steps[p]).sign;
      int sq = step_letter(g, c.steps[q]).sign;
      if (sp == sq) continue;
      Word v = chunk_word(p, q);
      if (sp < 0 && group->assoc_member(v, true)) pinch = {p, q, true};
      if (sp > 0 && !pinch && group->assoc_member(v, false)) pinch = {p, q, false};
    }
    // The label reads as an identity word, so Britton's lemma guarantees a
    // pinch among consecutive stable-letter pairs.
    if (!pinch)
      fail(ErrorCode::Construction,
           "no pinch found although stable letters remain; is the label an identity word?");

    auto [p, q, a_side] = *pinch;
    std::vector<int> vs = c.vertices(g);
    int p0 = vs[p], p1 = vs[p + 1], p2 = vs[q], p3 = vs[q + 1];
    int near_index = a_side ? a_index : b_index;  // side of the chunk V
    int far_index = a_side ? b_index : a_index;   // side of t^-1 V t

    // f joins the chunk endpoints, e joins the pinch endpoints.
    std::vector<std::pair<int, bool>> f_step, e_step;
    if (p1 != p2) {
      int f = find_parabolic_edge(g, p1, p2, near_index);
      if (f < 0)
        fail(ErrorCode::Truncation,
             "pinch witness edge is missing from the truncated ball; raise R_H or budgets");
      f_step.emplace_back(f, g.edge(f).u == p1);
    }
    if (p0 != p3) {
      int e = find_parabolic_edge(g, p0, p3, far_index);
      if (e < 0)
        fail(ErrorCode::Truncation,
             "pinch witness edge is missing from the truncated ball; raise R_H or budgets");
      e_step.emplace_back(e, g.edge(e).u == p0);
    }

    // Middle quadrilateral e^-1 y1 f y2.
    CyclePath mid;
    mid.start = p3;
    for (auto it = e_step.rbegin(); it != e_step.rend(); ++it)
      mid.steps.emplace_back(it->first, !it->second);
    mid.steps.push_back(c.steps[p]);
    for (const auto& s : f_step) mid.steps.push_back(s);
    mid.steps.push_back(c.steps[q]);
    emit(std::move(mid));

    // Third piece f^-1 v.
    CyclePath third;
    third.start = p2;
    for (auto it = f_step.rbegin(); it != f_step.rend(); ++it)
      third.steps.emplace_back(it->first, !it->second);
    third.steps.insert(third.steps.end(), c.steps.begin() + static_cast<std::ptrdiff_t>(p) + 1,
                       c.steps.begin() + static_cast<std::ptrdiff_t>(q));
    // First piece q1 e q2.
    CyclePath first;
    first.start = c.start;
    first.steps.assign(c.steps.begin(), c.steps.begin() + static_cast<std::ptrdiff_t>(p));
    for (const auto& s : e_step) first.steps.push_back(s);
    first.steps.insert(first.steps.end(), c.steps.begin() + static_cast<std::ptrdiff_t>(q) + 1,
                       c.steps.end());

    std::int64_t n1 = t_count(first), n2 = t_count(third);
    if (n1 + n2 + 2 != n) rep.bookkeeping_ok = false;
    run(first);
    run(third);
  }
};

}  // namespace

DecompositionReport hnn_decompose(const LabeledGraph& g, const GroupPtr& group,
                                  const CyclePath& c, std::int64_t m_bound, int a_index,
                                  int b_index) {
  if (group->kind() != GroupKind::Hnn)
    fail(ErrorCode::Invalid, "hnn_decompose needs an HNN group");
  DecomposeState st{g, group, m_bound, a_index, b_index, {}, {0, 1}};
  st.rep.m_bound = m_bound;
  st.rep.input_length = c.length(g);
  st.rep.bookkeeping_ok = true;
  st.rep.n = st.t_count(c);

  // The label must represent the identity.
  Word label = Word::empty(group->alphabet());
  for (const auto& s : c.steps) label = product(label, step_word(g, group, s));
  if (!group->is_identity(label))
    fail(ErrorCode::Invalid, "cycle label does not represent the identity");

  st.run(c);
  st.rep.k = static_cast<std::int64_t>(st.rep.pieces.size());
  if (st.max_fill.first == 0)
    st.rep.base_filler_l = {1, 1};  // no base content; any positive L works
  else
    st.rep.base_filler_l = st.max_fill;

  Chain sum;
  st.rep.diam_ok = true;
  for (const CyclePiece& p : st.rep.pieces) {
    sum += chain_of_cycle(g, p.cycle);
    if (p.diameter > m_bound) st.rep.diam_ok = false;
  }
  st.rep.chain_ok = sum == chain_of_cycle(g, c);
  // k <= L l(c) + n with the measured base-filler L.
  auto [ln, ld] = st.rep.base_filler_l;
  st.rep.bound_ok = st.rep.k * ld <= ln * st.rep.input_length + st.rep.n * ld;
  return st.rep;
}

IpReport verify_ip(const LabeledGraph& g, std::int64_t m_bound,
                   std::pair<std::int64_t, std::int64_t> l_const,
                   const std::vector<CyclePath>& cycles) {
  IpReport rep;
  rep.m_bound = m_bound;
  rep.l_const = l_const;
  int passed = 0;
  for (const CyclePath& c : cycles) {
    FillReport fill = fill_cycle(g, c, m_bound);
    IpRow row;
    row.k = fill.k;
    row.l = fill.input_length;
    row.unsplittable = fill.unsplittable;
    row.pass = !fill.unsplittable && fill.chain_ok &&
               fill.k * l_const.second <= l_const.first * std::max<std::int64_t>(row.l, 1);
    if (row.pass) ++passed;
    if (row.l > 0 && row.k * rep.worst_ratio.second > rep.worst_ratio.first * row.l)
      rep.worst_ratio = {row.k, row.l};
    rep.rows.push_back(row);
  }
  rep.pass_ratio = cycles.empty() ? 1.0 : static_cast<double>(passed) / cycles.size();
  rep.all_pass = passed == static_cast<int>(cycles.size());
  return rep;
}

std::string DecompositionReport::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["n"] = n;
  j["l"] = input_length;
  j["M"] = m_bound;
  j["L"] = {{"num", base_filler_l.first}, {"den", base_filler_l.second}};
  j["chain_ok"] = chain_ok;
  j["diam_ok"] = diam_ok;
  j["bound_ok"] = bound_ok;
  j["bookkeeping_ok"] = bookkeeping_ok;
  j["unsplittable"] = unsplittable;
  nlohmann::json ps = nlohmann::json::array();
  for (const CyclePiece& p : pieces) {
    nlohmann::json pj;
    pj["length"] = p.length;
    pj["diameter"] = p.diameter;
    nlohmann::json es = nlohmann::json::array();
    for (const auto& s : p.cycle.steps) es.push_back({{"edge", s.first}, {"fwd", s.second}});
    pj["edges"] = std::move(es);
    ps.push_back(std::move(pj));
  }
  j["pieces"] = std::move(ps);
  return j.dump(2);
}

std::string IpReport::to_json() const {
  nlohmann::json j;
  j["M"] = m_bound;
  j["L"] = {{"num", l_const.first}, {"den", l_const.second}};
  j["pass_ratio"] = pass_ratio;
  j["all_pass"] = all_pass;
  j["worst_ratio"] = {{"k", worst_ratio.first}, {"l", worst_ratio.second}};
  nlohmann::json rj = nlohmann::json::array();
  for (const IpRow& r : rows)
    rj.push_back({{"k", r.k}, {"l", r.l}, {"pass", r.pass}, {"unsplittable", r.unsplittable}});
  j["cycles"] = std::move(rj);
  return j.dump(2);
}

}  // namespace relhyp
