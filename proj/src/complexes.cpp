#include "relhyp/complexes.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace relhyp {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max() / 4;

std::string gen_text(const AlphabetPtr& alpha, const Letter& l) {
  return "gen:" + format_word(single(alpha, l.symbol, l.sign));
}

std::string par_text(int i, const Word& h) {
  return "par:" + std::to_string(i) + ":" + format_word(h);
}

std::string coset_text(int i, int j, const AlphabetPtr& alpha, const std::optional<Letter>& x) {
  std::string s = "coset:" + std::to_string(i) + "," + std::to_string(j) + ":";
  return s + (x ? format_word(single(alpha, x->symbol, x->sign)) : std::string("1"));
}

std::string edge_key(int u, int v, const std::string& text) {
  return std::to_string(u) + "|" + std::to_string(v) + "|" + text;
}

}  // namespace

// ---------------------------------------------------------------------------
// LabeledGraph

int LabeledGraph::add_vertex(GraphVertex v) {
  auto [it, fresh] = key_to_id_.emplace(v.key, vertex_count());
  if (!fresh) fail(ErrorCode::Construction, "duplicate vertex key: " + v.key);
  verts_.push_back(std::move(v));
  adj_built_ = false;
  return it->second;
}

int LabeledGraph::find_vertex(const std::string& key) const {
  auto it = key_to_id_.find(key);
  return it == key_to_id_.end() ? -1 : it->second;
}

bool LabeledGraph::add_edge(GraphEdge e) {
  if (e.u < 0 || e.u >= vertex_count() || e.v < 0 || e.v >= vertex_count())
    fail(ErrorCode::Invalid, "edge endpoint out of range");
  if (e.length < 1) fail(ErrorCode::Invalid, "edge length must be >= 1");
  auto [it, fresh] = edge_keys_.emplace(edge_key(e.u, e.v, e.label.text), edge_count());
  (void)it;
  if (!fresh) return false;
  edges_.push_back(std::move(e));
  adj_built_ = false;
  return true;
}

const std::vector<std::pair<int, int>>& LabeledGraph::neighbors(int v) const {
  if (!adj_built_) {
    adj_.assign(static_cast<size_t>(vertex_count()), {});
    for (int id = 0; id < edge_count(); ++id) {
      const GraphEdge& e = edges_[static_cast<size_t>(id)];
      adj_[static_cast<size_t>(e.u)].emplace_back(e.v, id);
      if (e.v != e.u) adj_[static_cast<size_t>(e.v)].emplace_back(e.u, id);
    }
    adj_built_ = true;
  }
  return adj_.at(static_cast<size_t>(v));
}

std::shared_ptr<const std::vector<std::int64_t>> LabeledGraph::dist_row(int src) const {
  if (src < 0 || src >= vertex_count()) fail(ErrorCode::Invalid, "vertex out of range");
  {
    std::lock_guard<std::mutex> hold(*lock_);
    if (rows_.size() != static_cast<size_t>(vertex_count()))
      rows_.assign(static_cast<size_t>(vertex_count()), nullptr);
    if (rows_[static_cast<size_t>(src)]) return rows_[static_cast<size_t>(src)];
  }
  neighbors(0);  // build adjacency outside the row lock
  auto dist = std::make_shared<std::vector<std::int64_t>>(
      static_cast<size_t>(vertex_count()), kUnreached);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  (*dist)[static_cast<size_t>(src)] = 0;
  pq.emplace(0, src);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != (*dist)[static_cast<size_t>(v)]) continue;
    for (auto [w, eid] : adj_[static_cast<size_t>(v)]) {
      std::int64_t nd = d + edges_[static_cast<size_t>(eid)].length;
      if (nd < (*dist)[static_cast<size_t>(w)]) {
        (*dist)[static_cast<size_t>(w)] = nd;
        pq.emplace(nd, w);
      }
    }
  }
  std::lock_guard<std::mutex> hold(*lock_);
  rows_[static_cast<size_t>(src)] = dist;
  return dist;
}

std::int64_t LabeledGraph::distance(int u, int v) const {
  std::int64_t d = (*dist_row(u))[static_cast<size_t>(v)];
  if (d >= kUnreached) fail(ErrorCode::Invalid, "disconnected vertex pair");
  return d;
}

bool LabeledGraph::connected() const {
  if (vertex_count() == 0) return true;
  auto row = dist_row(0);
  return std::all_of(row->begin(), row->end(), [](std::int64_t d) { return d < kUnreached; });
}

bool LabeledGraph::acyclic() const {
  std::vector<int> parent(static_cast<size_t>(vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };
  for (const GraphEdge& e : edges_) {
    int a = find(e.u), b = find(e.v);
    if (a == b) return false;
    parent[static_cast<size_t>(a)] = b;
  }
  return true;
}

std::vector<int> LabeledGraph::geodesic(int u, int v) const {
  auto row = dist_row(u);
  if ((*row)[static_cast<size_t>(v)] >= kUnreached)
    fail(ErrorCode::Invalid, "disconnected vertex pair");
  std::vector<int> path{v};
  int cur = v;
  while (cur != u) {
    int best = -1;
    for (auto [w, eid] : neighbors(cur)) {
      if ((*row)[static_cast<size_t>(w)] + edges_[static_cast<size_t>(eid)].length ==
          (*row)[static_cast<size_t>(cur)]) {
        if (best < 0 || w < best) best = w;
      }
    }
    if (best < 0) fail(ErrorCode::Construction, "geodesic reconstruction failed");
    path.push_back(best);
    cur = best;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::pair<std::vector<std::vector<int>>, bool> LabeledGraph::all_geodesics(
    int u, int v, std::size_t cap) const {
  auto row = dist_row(u);
  if ((*row)[static_cast<size_t>(v)] >= kUnreached)
    fail(ErrorCode::Invalid, "disconnected vertex pair");
  std::vector<std::vector<int>> out;
  bool truncated = false;
  std::vector<int> path{v};
  // Walk the shortest-path DAG backwards from v; neighbors in ascending order
  // keep the enumeration deterministic. One extra path beyond the cap is
  // attempted so an enumeration that exactly fills the cap is not flagged.
  std::function<void(int)> rec = [&](int cur) {
    if (truncated) return;
    if (cur == u) {
      if (out.size() == cap) {
        truncated = true;
        return;
      }
      out.emplace_back(path.rbegin(), path.rend());
      return;
    }
    std::vector<int> preds;
    for (auto [w, eid] : neighbors(cur))
      if ((*row)[static_cast<size_t>(w)] + edges_[static_cast<size_t>(eid)].length ==
          (*row)[static_cast<size_t>(cur)])
        preds.push_back(w);
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    for (int w : preds) {
      path.push_back(w);
      rec(w);
      path.pop_back();
      if (truncated) return;
    }
  };
  rec(v);
  return {std::move(out), truncated};
}

std::string LabeledGraph::to_json() const {
  nlohmann::json j;
  auto kind_name = [](GraphVertex::Kind k) {
    switch (k) {
      case GraphVertex::Kind::Element:
        return "element";
      case GraphVertex::Kind::Coset:
        return "coset";
      case GraphVertex::Kind::Cone:
        return "cone";
    }
    return "element";
  };
  nlohmann::json vs = nlohmann::json::array();
  for (int i = 0; i < vertex_count(); ++i) {
    const GraphVertex& v = verts_[static_cast<size_t>(i)];
    vs.push_back({{"id", i},
                  {"payload", {{"kind", kind_name(v.kind)}, {"text", v.text}, {"i", v.pindex}}}});
  }
  nlohmann::json es = nlohmann::json::array();
  for (const GraphEdge& e : edges_)
    es.push_back({{"from", e.u}, {"to", e.v}, {"label", e.label.text}, {"length", e.length}});
  j["vertices"] = std::move(vs);
  j["edges"] = std::move(es);
  j["meta"] = {{"r", meta_.radius},   {"R_H", meta_.rh},     {"scale", meta_.scale},
               {"exact", meta_.exact}, {"kind", meta_.kind}, {"note", meta_.note}};
  return j.dump(2);
}

LabeledGraph LabeledGraph::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::Parse, "malformed graph JSON");
  LabeledGraph g;
  g.meta_.kind = "loaded";
  if (j.contains("meta")) {
    const auto& m = j.at("meta");
    g.meta_.radius = m.value("r", 0);
    g.meta_.rh = m.value("R_H", 0);
    g.meta_.scale = m.value("scale", 1);
    g.meta_.exact = m.value("exact", false);
    g.meta_.kind = m.value("kind", std::string("loaded"));
    g.meta_.note = m.value("note", std::string());
  }
  if (!j.contains("vertices") || !j.contains("edges"))
    fail(ErrorCode::Parse, "graph JSON needs vertices and edges");
  int next_id = 0;
  for (const auto& vj : j.at("vertices")) {
    int id = vj.value("id", next_id);
    if (id != next_id) fail(ErrorCode::Parse, "vertex ids must be dense and ascending");
    GraphVertex v;
    v.text = vj.contains("payload") ? vj.at("payload").value("text", std::string()) : "";
    v.pindex = vj.contains("payload") ? vj.at("payload").value("i", -1) : -1;
    std::string kind =
        vj.contains("payload") ? vj.at("payload").value("kind", std::string("element")) : "element";
    v.kind = kind == "coset"  ? GraphVertex::Kind::Coset
             : kind == "cone" ? GraphVertex::Kind::Cone
                              : GraphVertex::Kind::Element;
    v.key = std::to_string(id) + "|" + v.text;
    g.add_vertex(std::move(v));
    ++next_id;
  }
  for (const auto& ej : j.at("edges")) {
    GraphEdge e;
    e.u = ej.at("from").get<int>();
    e.v = ej.at("to").get<int>();
    e.length = ej.value("length", 1);
    e.label.text = ej.value("label", std::string());
    g.add_edge(std::move(e));
  }
  return g;
}

std::string LabeledGraph::to_dot() const {
  std::ostringstream out;
  out << "graph ball {\n";
  for (int i = 0; i < vertex_count(); ++i) {
    const GraphVertex& v = verts_[static_cast<size_t>(i)];
    out << "  v" << i << " [label=\"" << v.text << "\"";
    if (v.kind == GraphVertex::Kind::Cone) out << " shape=diamond";
    if (v.kind == GraphVertex::Kind::Coset) out << " shape=box";
    out << "];\n";
  }
  for (const GraphEdge& e : edges_) {
    out << "  v" << e.u << " -- v" << e.v << " [label=\"" << e.label.text << "\"";
    if (e.length != meta_.scale) out << " len=" << e.length;
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Ball builders

std::size_t effective_vertex_budget(const BallParams& p) {
  if (p.vertex_budget > 0) return p.vertex_budget;
  if (const char* env = std::getenv("RELHYP_BUDGET")) {
    long long v = std::atoll(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

namespace {

struct GenStep {
  Letter letter;   // over the user-facing group alphabet
  Word mult;       // working-group multiplier
  std::string text;
};

std::vector<GenStep> generator_steps(const GroupPtr& group,
                                     const std::vector<std::string>& x_names) {
  std::vector<GenStep> steps;
  for (const std::string& name : x_names) {
    int sym = group->alphabet()->index(name);
    if (sym < 0) fail(ErrorCode::Alphabet, "relative generator not in the alphabet: " + name);
    for (int sign : {1, -1}) {
      Letter l{sym, sign};
      steps.push_back({l, group->working_letter(l), gen_text(group->alphabet(), l)});
    }
  }
  return steps;
}

struct ParabolicSet {
  std::vector<Subgroup> subs;
  std::vector<std::vector<Word>> jumps;
};

ParabolicSet parabolic_set(const GroupPtr& group, const std::vector<SubgroupSpec>& specs, int rh,
                           std::size_t budget) {
  ParabolicSet ps;
  for (const SubgroupSpec& s : specs) {
    ps.subs.push_back(group->parabolic(s));
    ps.jumps.push_back(ps.subs.back().enumerate(rh, budget));
  }
  return ps;
}

// Parabolic closure: one edge for every same-coset vertex pair. These are
// genuine relative-Cayley edges; rh only truncates BFS discovery.
void add_parabolic_closure(LabeledGraph& g, const ParabolicSet& ps, std::size_t edge_budget) {
  for (size_t i = 0; i < ps.subs.size(); ++i) {
    std::unordered_map<std::string, std::vector<int>> classes;
    for (int v = 0; v < g.vertex_count(); ++v)
      classes[format_word(ps.subs[i].left_rep(g.vertex(v).word))].push_back(v);
    std::vector<const std::vector<int>*> ordered;
    for (const auto& [key, ids] : classes)
      if (ids.size() > 1) ordered.push_back(&ids);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->front() < b->front(); });
    for (const auto* ids : ordered) {
      for (size_t p = 0; p < ids->size(); ++p) {
        for (size_t q = p + 1; q < ids->size(); ++q) {
          if (static_cast<std::size_t>(g.edge_count()) >= edge_budget)
            fail(ErrorCode::Budget, "parabolic closure exceeded the edge budget");
          int a = (*ids)[p], b = (*ids)[q];
          Word h = ps.subs[i].connecting_element(g.vertex(a).word, g.vertex(b).word);
          GraphEdge e;
          e.u = a;
          e.v = b;
          e.length = g.meta().scale;
          e.label.kind = EdgeLabel::Kind::Parabolic;
          e.label.i = static_cast<int>(i);
          e.label.h = h;
          e.label.text = par_text(static_cast<int>(i), h);
          g.add_edge(std::move(e));
        }
      }
    }
  }
}

// Compare distances against a rebuild with rh + 2; identical tables on this
// ball's vertex set certify the truncation.
template <typename Rebuild>
void certify_exactness(LabeledGraph& g, const BallParams& p, Rebuild rebuild) {
  g.meta().exact = false;
  g.meta().exactness_checked = false;
  if (!p.exactness_check) {
    g.meta().note += "exactness unchecked (disabled); ";
    return;
  }
  if (g.vertex_count() > static_cast<int>(p.exactness_gate)) {
    g.meta().note += "exactness unchecked (size gate); ";
    return;
  }
  LabeledGraph big;
  try {
    BallParams q = p;
    q.rh = p.rh + 2;
    q.exactness_check = false;
    big = rebuild(q);
  } catch (const Error&) {
    g.meta().note += "exactness unchecked (rebuild exceeded budgets); ";
    return;
  }
  g.meta().exactness_checked = true;
  std::vector<int> map(static_cast<size_t>(g.vertex_count()), -1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    map[static_cast<size_t>(v)] = big.find_vertex(g.vertex(v).key);
    if (map[static_cast<size_t>(v)] < 0) return;  // vertex set changed: not exact
  }
  for (int u = 0; u < g.vertex_count(); ++u) {
    auto small_row = g.dist_row(u);
    auto big_row = big.dist_row(map[static_cast<size_t>(u)]);
    for (int v = 0; v < g.vertex_count(); ++v)
      if ((*small_row)[static_cast<size_t>(v)] !=
          (*big_row)[static_cast<size_t>(map[static_cast<size_t>(v)])])
        return;
  }
  g.meta().exact = true;
}

GraphVertex element_vertex(const Word& canonical) {
  GraphVertex v;
  v.key = format_word(canonical);
  v.text = v.key;
  v.kind = GraphVertex::Kind::Element;
  v.word = canonical;
  return v;
}

GraphVertex coset_vertex(int i, const Word& rep) {
  GraphVertex v;
  v.key = "H" + std::to_string(i) + "|" + format_word(rep);
  v.text = format_word(rep) + "·H" + std::to_string(i + 1);
  v.kind = GraphVertex::Kind::Coset;
  v.pindex = i;
  v.word = rep;
  return v;
}

}  // namespace

LabeledGraph relative_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                           const std::vector<SubgroupSpec>& parabolics, const BallParams& p) {
  if (p.radius < 0 || p.rh < 0) fail(ErrorCode::Invalid, "negative radius");
  GroupPtr w = group->working_group();
  std::size_t budget = effective_vertex_budget(p);
  auto steps = generator_steps(group, x_names);
  ParabolicSet ps = parabolic_set(group, parabolics, p.rh, budget);

  LabeledGraph g;
  g.meta().kind = "relative";
  g.meta().radius = p.radius;
  g.meta().rh = p.rh;
  g.meta().scale = 1;

  std::vector<int> depth{0};
  g.add_vertex(element_vertex(Word::empty(w->alphabet())));
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Word vw = g.vertex(v).word;
    bool interior = depth[static_cast<size_t>(v)] < p.radius;
    for (const GenStep& s : steps) {
      Word nw = w->canonical_word(product(vw, s.mult));
      std::string key = format_word(nw);
      int id = g.find_vertex(key);
      if (id < 0) {
        if (!interior) continue;
        if (static_cast<std::size_t>(g.vertex_count()) >= budget)
          fail(ErrorCode::Budget, "relative ball exceeded the vertex budget");
        id = g.add_vertex(element_vertex(nw));
        depth.push_back(depth[static_cast<size_t>(v)] + 1);
      }
      GraphEdge e;
      e.length = 1;
      e.label.kind = EdgeLabel::Kind::Generator;
      if (s.letter.sign > 0) {
        e.u = v;
        e.v = id;
        e.label.gen = s.letter;
      } else {
        e.u = id;
        e.v = v;
        e.label.gen = inv(s.letter);
      }
      e.label.text = gen_text(group->alphabet(), e.label.gen);
      g.add_edge(std::move(e));
    }
    if (interior) {
      for (size_t i = 0; i < ps.jumps.size(); ++i) {
        for (const Word& h : ps.jumps[i]) {
          Word nw = w->canonical_word(product(vw, h));
          std::string key = format_word(nw);
          if (g.find_vertex(key) >= 0) continue;
          if (static_cast<std::size_t>(g.vertex_count()) >= budget)
            fail(ErrorCode::Budget, "relative ball exceeded the vertex budget");
          g.add_vertex(element_vertex(nw));
          depth.push_back(depth[static_cast<size_t>(v)] + 1);
        }
      }
    }
  }
  add_parabolic_closure(g, ps, p.edge_budget);
  certify_exactness(g, p, [&](const BallParams& q) {
    return relative_ball(group, x_names, parabolics, q);
  });
  return g;
}

LabeledGraph coset_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                        const std::vector<SubgroupSpec>& parabolics, const BallParams& p) {
  if (parabolics.empty()) fail(ErrorCode::Invalid, "coset ball needs at least one parabolic");
  GroupPtr w = group->working_group();
  std::size_t budget = effective_vertex_budget(p);
  auto steps = generator_steps(group, x_names);
  ParabolicSet ps = parabolic_set(group, parabolics, p.rh, budget);
  const int m = static_cast<int>(ps.subs.size());

  LabeledGraph g;
  g.meta().kind = "coset";
  g.meta().radius = p.radius;
  g.meta().rh = p.rh;
  g.meta().scale = 1;

  std::vector<int> depth{0};
  g.add_vertex(coset_vertex(0, ps.subs[0].left_rep(Word::empty(w->alphabet()))));

  for (int v = 0; v < g.vertex_count(); ++v) {
    const GraphVertex vert = g.vertex(v);
    bool interior = depth[static_cast<size_t>(v)] < p.radius;
    std::vector<Word> members{vert.word};
    for (const Word& h : ps.jumps[static_cast<size_t>(vert.pindex)])
      members.push_back(product(vert.word, h));
    for (const Word& a : members) {
      for (int xi = -1; xi < static_cast<int>(steps.size()); ++xi) {
        std::optional<Letter> x;
        Word b = a;
        if (xi >= 0) {
          x = steps[static_cast<size_t>(xi)].letter;
          b = product(a, steps[static_cast<size_t>(xi)].mult);
        }
        for (int j = 0; j < m; ++j) {
          Word rep = ps.subs[static_cast<size_t>(j)].left_rep(b);
          GraphVertex cand = coset_vertex(j, rep);
          if (cand.key == vert.key) continue;  // no self-loops
          int id = g.find_vertex(cand.key);
          if (id < 0) {
            if (!interior) continue;
            if (static_cast<std::size_t>(g.vertex_count()) >= budget)
              fail(ErrorCode::Budget, "coset ball exceeded the vertex budget");
            id = g.add_vertex(cand);
            depth.push_back(depth[static_cast<size_t>(v)] + 1);
          }
          // Canonical orientation between (i, j, x) and (j, i, x^-1).
          int fwd_dir = x ? dir_of(*x) : std::numeric_limits<int>::max();
          int rev_dir = x ? dir_of(inv(*x)) : std::numeric_limits<int>::max();
          bool flip = std::tuple(j, vert.pindex, rev_dir) < std::tuple(vert.pindex, j, fwd_dir);
          GraphEdge e;
          e.length = 1;
          e.label.kind = EdgeLabel::Kind::CosetTriple;
          if (!flip) {
            e.u = v;
            e.v = id;
            e.label.i = vert.pindex;
            e.label.j = j;
            e.label.x = x;
            e.witness = std::pair(a, b);
          } else {
            e.u = id;
            e.v = v;
            e.label.i = j;
            e.label.j = vert.pindex;
            e.label.x = x ? std::optional(inv(*x)) : std::nullopt;
            e.witness = std::pair(b, a);
          }
          e.label.text = coset_text(e.label.i, e.label.j, group->alphabet(), e.label.x);
          g.add_edge(std::move(e));
          if (static_cast<std::size_t>(g.edge_count()) >= p.edge_budget)
            fail(ErrorCode::Budget, "coset ball exceeded the edge budget");
        }
      }
    }
  }
  certify_exactness(g, p, [&](const BallParams& q) {
    return coset_ball(group, x_names, parabolics, q);
  });
  return g;
}

LabeledGraph coned_off_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                            const std::vector<SubgroupSpec>& parabolics, const BallParams& p) {
  GroupPtr w = group->working_group();
  std::size_t budget = effective_vertex_budget(p);
  auto steps = generator_steps(group, x_names);

  // X must generate the group in the ordinary sense. Sound sufficient check:
  // every symbol a parabolic needs already lies in X.
  GroupPtr carrier = w->kind() == GroupKind::Hnn ? w->base() : w;
  auto require_in_x = [&](const std::string& name) {
    if (std::find(x_names.begin(), x_names.end(), name) == x_names.end())
      fail(ErrorCode::Unsupported,
           "coned-off ball requires ordinary generation by X; missing symbol: " + name);
  };
  for (const SubgroupSpec& s : parabolics) {
    switch (s.kind) {
      case SubKind::FoldedFree:
        for (const std::string& gw : s.generators) {
          Word parsed = parse_word(carrier->alphabet(), gw);
          for (const Letter& l : parsed.letters())
            require_in_x(carrier->alphabet()->name(l.symbol));
        }
        break;
      case SubKind::CoordinateLattice:
        for (const std::string& c : s.coordinates) require_in_x(c);
        break;
      case SubKind::CommutatorKernel:
      case SubKind::Whole:
        for (const std::string& n : carrier->alphabet()->names()) require_in_x(n);
        break;
      case SubKind::Trivial:
        break;
    }
  }
  ParabolicSet ps = parabolic_set(group, parabolics, p.rh, budget);

  LabeledGraph g;
  g.meta().kind = "coned";
  g.meta().radius = p.radius;
  g.meta().rh = p.rh;
  g.meta().scale = 2;
  const std::int64_t limit = 2LL * p.radius;

  auto cone_vertex = [&](int i, const Word& rep) {
    GraphVertex v;
    v.key = "cone" + std::to_string(i) + "|" + format_word(rep);
    v.text = "v(" + format_word(rep) + "·H" + std::to_string(i + 1) + ")";
    v.kind = GraphVertex::Kind::Cone;
    v.pindex = i;
    v.word = rep;
    return v;
  };

  // Pass 1: Dijkstra discovery of the vertex set within scaled radius 2r.
  std::vector<std::int64_t> dist;
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  g.add_vertex(element_vertex(Word::empty(w->alphabet())));
  dist.push_back(0);
  pq.emplace(0, 0);
  auto offer = [&](const GraphVertex& cand, std::int64_t nd) {
    if (nd > limit) return;
    int id = g.find_vertex(cand.key);
    if (id < 0) {
      if (static_cast<std::size_t>(g.vertex_count()) >= budget)
        fail(ErrorCode::Budget, "coned-off ball exceeded the vertex budget");
      id = g.add_vertex(cand);
      dist.push_back(nd);
      pq.emplace(nd, id);
    } else if (nd < dist[static_cast<size_t>(id)]) {
      dist[static_cast<size_t>(id)] = nd;
      pq.emplace(nd, id);
    }
  };
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[static_cast<size_t>(v)]) continue;
    const GraphVertex vert = g.vertex(v);
    if (vert.kind == GraphVertex::Kind::Element) {
      for (const GenStep& s : steps)
        offer(element_vertex(w->canonical_word(product(vert.word, s.mult))), d + 2);
      for (size_t i = 0; i < ps.subs.size(); ++i)
        offer(cone_vertex(static_cast<int>(i), ps.subs[i].left_rep(vert.word)), d + 1);
    } else {
      offer(element_vertex(w->canonical_word(vert.word)), d + 1);
      for (const Word& h : ps.jumps[static_cast<size_t>(vert.pindex)])
        offer(element_vertex(w->canonical_word(product(vert.word, h))), d + 1);
    }
  }

  // Pass 2: edges between discovered vertices.
  for (int v = 0; v < g.vertex_count(); ++v) {
    const GraphVertex vert = g.vertex(v);
    if (vert.kind == GraphVertex::Kind::Element) {
      for (const GenStep& s : steps) {
        int id = g.find_vertex(format_word(w->canonical_word(product(vert.word, s.mult))));
        if (id < 0) continue;
        GraphEdge e;
        e.length = 2;
        e.label.kind = EdgeLabel::Kind::Generator;
        if (s.letter.sign > 0) {
          e.u = v;
          e.v = id;
          e.label.gen = s.letter;
        } else {
          e.u = id;
          e.v = v;
          e.label.gen = inv(s.letter);
        }
        e.label.text = gen_text(group->alphabet(), e.label.gen);
        g.add_edge(std::move(e));
      }
      for (size_t i = 0; i < ps.subs.size(); ++i) {
        int id = g.find_vertex(cone_vertex(static_cast<int>(i), ps.subs[i].left_rep(vert.word)).key);
        if (id < 0) continue;
        GraphEdge e;
        e.u = v;
        e.v = id;
        e.length = 1;
        e.label.kind = EdgeLabel::Kind::Cone;
        e.label.i = static_cast<int>(i);
        e.label.text = "cone:" + std::to_string(i);
        g.add_edge(std::move(e));
      }
    } else {
      std::vector<Word> members{vert.word};
      for (const Word& h : ps.jumps[static_cast<size_t>(vert.pindex)])
        members.push_back(product(vert.word, h));
      for (const Word& mword : members) {
        int id = g.find_vertex(format_word(w->canonical_word(mword)));
        if (id < 0) continue;
        GraphEdge e;
        e.u = id;
        e.v = v;
        e.length = 1;
        e.label.kind = EdgeLabel::Kind::Cone;
        e.label.i = vert.pindex;
        e.label.text = "cone:" + std::to_string(vert.pindex);
        g.add_edge(std::move(e));
      }
    }
  }
  certify_exactness(g, p, [&](const BallParams& q) {
    return coned_off_ball(group, x_names, parabolics, q);
  });
  return g;
}

LabeledGraph bass_serre_ball(const GroupPtr& group, const BallParams& p) {
  std::size_t budget = effective_vertex_budget(p);
  LabeledGraph g;
  g.meta().kind = "tree";
  g.meta().radius = p.radius;
  g.meta().rh = p.rh;
  g.meta().scale = 1;

  if (group->kind() == GroupKind::Hnn) {
    auto whole = group->parabolic(SubgroupSpec::whole());
    auto sub_a = group->base()->parabolic(group->spec().sub_a);
    auto sub_b = group->base()->parabolic(group->spec().sub_b);
    std::vector<Word> base_elems{Word::empty(group->base()->alphabet())};
    for (Word& h : group->base()->enumerate_ball(p.rh, budget)) base_elems.push_back(std::move(h));
    auto transversal = [&](const Subgroup& s) {
      std::vector<Word> reps;
      std::unordered_map<std::string, bool> seen;
      for (const Word& h : base_elems)
        if (seen.emplace(format_word(s.left_rep(h)), true).second)
          reps.push_back(map_alphabet(h, group->alphabet()));
      return reps;
    };
    std::vector<Word> trans_a = transversal(sub_a), trans_b = transversal(sub_b);
    Word t_pos = single(group->alphabet(), group->stable_symbol(), 1);
    Word t_neg = single(group->alphabet(), group->stable_symbol(), -1);

    std::vector<int> depth{0};
    g.add_vertex(coset_vertex(0, whole.left_rep(Word::empty(group->alphabet()))));
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (depth[static_cast<size_t>(v)] >= p.radius) continue;
      const Word rep = g.vertex(v).word;
      auto expand = [&](const std::vector<Word>& trans, const Word& t) {
        for (const Word& h : trans) {
          Word member = product({rep, h, t});
          GraphVertex cand = coset_vertex(0, whole.left_rep(member));
          int id = g.find_vertex(cand.key);
          if (id < 0) {
            if (static_cast<std::size_t>(g.vertex_count()) >= budget)
              fail(ErrorCode::Budget, "tree ball exceeded the vertex budget");
            id = g.add_vertex(cand);
            depth.push_back(depth[static_cast<size_t>(v)] + 1);
          }
          GraphEdge e;
          e.length = 1;
          e.label.kind = EdgeLabel::Kind::CosetTriple;
          e.label.i = 0;
          e.label.j = 0;
          Letter tl{group->stable_symbol(), 1};
          e.label.x = tl;
          bool forward = t.letters()[0].sign > 0;
          e.u = forward ? v : id;
          e.v = forward ? id : v;
          e.label.text = coset_text(0, 0, group->alphabet(), e.label.x);
          g.add_edge(std::move(e));
        }
      };
      expand(trans_a, t_pos);
      expand(trans_b, t_neg);
    }
  } else if (group->kind() == GroupKind::Amalgam) {
    GroupPtr gamma = group->embedding();
    GroupPtr base = gamma->base();
    const auto h_names = std::vector<std::string>(
        base->alphabet()->names().begin(),
        base->alphabet()->names().begin() + group->spec().left->rank);
    const auto k_names = std::vector<std::string>(
        base->alphabet()->names().begin() + group->spec().left->rank,
        base->alphabet()->names().end());
    // The amalgam's own parabolic machinery keys factor cosets, so tree
    // vertices and coset-graph vertices share canonical labels.
    auto sub_h = group->parabolic(SubgroupSpec::folded(h_names));
    auto sub_k = group->parabolic(SubgroupSpec::folded(k_names));
    auto sub_a = base->parabolic(group->spec().sub_a);
    auto sub_b = base->parabolic(group->spec().sub_b);
    Word t_pos = single(gamma->alphabet(), gamma->stable_symbol(), 1);

    auto factor_elems = [&](const std::vector<std::string>& names, int offset) {
      auto fg = Group::create(GroupSpec::free_group(static_cast<int>(names.size()), names));
      std::vector<Word> out{Word::empty(base->alphabet())};
      for (const Word& h : fg->enumerate_ball(p.rh, budget))
        out.push_back(map_alphabet(h, base->alphabet(), offset));
      return out;
    };
    auto transversal = [&](const Subgroup& s, const std::vector<Word>& elems) {
      std::vector<Word> reps;
      std::unordered_map<std::string, bool> seen;
      for (const Word& h : elems)
        if (seen.emplace(format_word(s.left_rep(h)), true).second)
          reps.push_back(map_alphabet(h, gamma->alphabet()));
      return reps;
    };
    std::vector<Word> trans_a = transversal(sub_a, factor_elems(h_names, 0));
    std::vector<Word> trans_b =
        transversal(sub_b, factor_elems(k_names, static_cast<int>(h_names.size())));
    // K embeds into the HNN extension as t K t^-1.
    for (Word& k : trans_b) k = product({t_pos, k, inverse(t_pos)});

    auto h_key = [&](const Word& member) { return sub_h.left_rep(member); };
    auto k_key = [&](const Word& member) { return sub_k.left_rep(member); };

    struct Node {
      Word member;
      bool h_side;
    };
    std::vector<Node> nodes;
    std::vector<int> depth;
    Word eps = Word::empty(gamma->alphabet());
    g.add_vertex(coset_vertex(0, h_key(eps)));
    nodes.push_back({eps, true});
    depth.push_back(0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (depth[static_cast<size_t>(v)] >= p.radius) continue;
      Node node = nodes[static_cast<size_t>(v)];
      const auto& trans = node.h_side ? trans_a : trans_b;
      for (const Word& h : trans) {
        Word member = product(node.member, h);
        GraphVertex cand =
            node.h_side ? coset_vertex(1, k_key(member)) : coset_vertex(0, h_key(member));
        int id = g.find_vertex(cand.key);
        if (id < 0) {
          if (static_cast<std::size_t>(g.vertex_count()) >= budget)
            fail(ErrorCode::Budget, "tree ball exceeded the vertex budget");
          id = g.add_vertex(cand);
          nodes.push_back({member, !node.h_side});
          depth.push_back(depth[static_cast<size_t>(v)] + 1);
        }
        GraphEdge e;
        e.length = 1;
        e.label.kind = EdgeLabel::Kind::CosetTriple;
        e.label.i = 0;
        e.label.j = 1;
        e.label.x = std::nullopt;
        e.u = node.h_side ? v : id;
        e.v = node.h_side ? id : v;
        e.label.text = coset_text(0, 1, group->alphabet(), std::nullopt);
        g.add_edge(std::move(e));
      }
    }
  } else {
    fail(ErrorCode::Unsupported, "Bass-Serre balls need an HNN or amalgam group");
  }

  if (!g.acyclic() || !g.connected())
    fail(ErrorCode::Construction, "Bass-Serre ball is not a tree");
  return g;
}

Element edge_orbit_witness(const LabeledGraph& g, const GroupPtr& group,
                           const std::vector<SubgroupSpec>& parabolics, int e_id, int f_id) {
  if (g.meta().kind != "coset")
    fail(ErrorCode::Invalid, "edge orbit witnesses live in coset graphs");
  const GraphEdge& e = g.edge(e_id);
  const GraphEdge& f = g.edge(f_id);
  if (e.label.text != f.label.text)
    fail(ErrorCode::Invalid, "edge labels differ: " + e.label.text + " vs " + f.label.text);
  if (!e.witness || !f.witness) fail(ErrorCode::Invalid, "edges carry no witness pairs");
  ParabolicSet ps = parabolic_set(group, parabolics, 0, 16);
  Word w = product(f.witness->first, inverse(e.witness->first));
  auto check = [&](int pidx, int from, int to) {
    Word moved = ps.subs[static_cast<size_t>(pidx)].left_rep(product(w, g.vertex(from).word));
    if (!(moved == g.vertex(to).word))
      fail(ErrorCode::Construction, "witness verification failed: the computed element does "
                                    "not map the coset pair");
  };
  check(e.label.i, e.u, f.u);
  check(e.label.j, e.v, f.v);
  return group->working_group()->element(w);
}

}  // namespace relhyp
