#include "relhyp.h"

#include <cstdlib>
#include <cstring>

#include <json.hpp>

#include "relhyp/experiments.hpp"
#include "relhyp/groups_io.hpp"
#include "relhyp/hyperbolicity.hpp"
#include "relhyp/isoperimetry.hpp"
#include "relhyp/qi.hpp"

using nlohmann::json;
using namespace relhyp;

struct rh_group {
  GroupPtr g;
};

struct rh_graph {
  LabeledGraph g;
  GroupPtr group;  // set when the graph was built from a group
  std::vector<SubgroupSpec> parabolics;
};

namespace {

thread_local std::string t_last_error;

rh_status code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Parse:
      return RH_ERR_PARSE;
    case ErrorCode::Alphabet:
      return RH_ERR_ALPHABET;
    case ErrorCode::Membership:
      return RH_ERR_MEMBERSHIP;
    case ErrorCode::Unsupported:
      return RH_ERR_UNSUPPORTED;
    case ErrorCode::Budget:
      return RH_ERR_BUDGET;
    case ErrorCode::Truncation:
      return RH_ERR_TRUNCATION;
    case ErrorCode::Gate:
      return RH_ERR_GATE;
    case ErrorCode::Invalid:
      return RH_ERR_INVALID;
    case ErrorCode::Construction:
      return RH_ERR_INTERNAL;
  }
  return RH_ERR_INTERNAL;
}

template <typename F>
rh_status wrap(F&& f) {
  try {
    f();
    return RH_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RH_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::Parse, std::string("malformed JSON in ") + what);
  return j;
}

std::vector<std::string> names_from(const json& j) {
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::vector<SubgroupSpec> parabolics_from(const json& j) {
  std::vector<SubgroupSpec> out;
  for (const auto& e : j) out.push_back(parse_subgroup_spec(e.dump()));
  return out;
}

BallParams ball_params(const json& opts) {
  BallParams p;
  p.radius = opts.value("radius", 2);
  p.rh = opts.value("rh", 2);
  p.vertex_budget = opts.value("budget", static_cast<std::size_t>(0));
  p.exactness_check = opts.value("exact_check", true);
  return p;
}

Rational rational_from(const json& j, Rational fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>(), 1);
  if (j.is_array() && j.size() == 2)
    return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  fail(ErrorCode::Parse, "rational values are integers or [num, den] pairs");
}

json delta_report_json(const DeltaReport& r) {
  return json{{"method", delta_method_name(r.method)}, {"delta_numerator", r.delta_num},
              {"scale", r.scale},                      {"witness", r.witness},
              {"exhaustive", r.exhaustive},            {"n_vertices", r.n_vertices},
              {"note", r.note}};
}

const rh_graph* require_graph(const rh_graph* g) {
  if (!g) fail(ErrorCode::Invalid, "null graph handle");
  return g;
}

const rh_group* require_group(const rh_group* g) {
  if (!g) fail(ErrorCode::Invalid, "null group handle");
  return g;
}

}  // namespace

extern "C" const char* rh_version(void) { return "relhyp 1.0"; }

extern "C" const char* rh_last_error(void) { return t_last_error.c_str(); }

extern "C" void rh_string_free(char* s) { std::free(s); }

extern "C" rh_status rh_group_new(const char* spec_json, rh_group** out) {
  return wrap([&] {
    if (!spec_json || !out) fail(ErrorCode::Invalid, "null argument");
    auto spec = parse_group_spec(spec_json);
    *out = new rh_group{Group::create(spec)};
  });
}

extern "C" void rh_group_free(rh_group* g) { delete g; }

extern "C" rh_status rh_group_describe(const rh_group* g, char** out) {
  return wrap([&] { *out = dup_string(require_group(g)->g->describe()); });
}

extern "C" rh_status rh_group_alphabet(const rh_group* g, char** out_json) {
  return wrap([&] {
    json j = require_group(g)->g->alphabet()->names();
    *out_json = dup_string(j.dump());
  });
}

extern "C" rh_status rh_reduce(const rh_group* g, const char* word, char** out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    *out = dup_string(format_word(grp->parse(word)));
  });
}

extern "C" rh_status rh_is_identity(const rh_group* g, const char* word, int* out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    *out = grp->is_identity(grp->parse(word)) ? 1 : 0;
  });
}

extern "C" rh_status rh_canonical_key(const rh_group* g, const char* word, char** out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    *out = dup_string(grp->element(grp->parse(word)).key());
  });
}

extern "C" rh_status rh_britton_reduce(const rh_group* g, const char* word, char** out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    *out = dup_string(format_word(grp->britton_reduce(grp->parse(word))));
  });
}

extern "C" rh_status rh_pinch_find(const rh_group* g, const char* word, char** out_json) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    auto pin = grp->pinch_find(grp->parse(word));
    json j;
    if (pin) {
      j = {{"found", true},
           {"begin", pin->begin},
           {"end", pin->end},
           {"side", pin->a_side ? "A" : "B"}};
    } else {
      j = {{"found", false}};
    }
    *out_json = dup_string(j.dump());
  });
}

extern "C" rh_status rh_subgroup_member(const rh_group* g, const char* subgroup_json,
                                        const char* word, int* out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    Subgroup sub = grp->parabolic(parse_subgroup_spec(subgroup_json));
    *out = sub.member(grp->parse(word)) ? 1 : 0;
  });
}

extern "C" rh_status rh_subgroup_express(const rh_group* g, const char* subgroup_json,
                                         const char* word, char** out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    SubgroupSpec spec = parse_subgroup_spec(subgroup_json);
    if (spec.kind != SubKind::FoldedFree)
      fail(ErrorCode::Unsupported, "basis expression needs a folded subgroup");
    GroupPtr working = grp->working_group();
    GroupPtr carrier = working->kind() == GroupKind::Hnn ? working->base() : working;
    std::vector<Word> gens;
    for (const auto& s : spec.generators) gens.push_back(parse_word(carrier->alphabet(), s));
    auto graph = SubgroupGraph::fold(carrier->alphabet(), gens);
    *out = dup_string(format_word(graph.express_in_basis(parse_word(carrier->alphabet(), word))));
  });
}

extern "C" rh_status rh_ball_build(const rh_group* g, const char* options_json, rh_graph** out) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    json opts = parse_options(options_json, "ball options");
    std::string kind = opts.value("kind", std::string("relative"));
    BallParams p = ball_params(opts);
    std::vector<std::string> x = names_from(opts.value("x", json::array()));
    std::vector<SubgroupSpec> paras = parabolics_from(opts.value("parabolics", json::array()));
    auto handle = std::make_unique<rh_graph>();
    handle->group = grp;
    handle->parabolics = paras;
    if (kind == "relative")
      handle->g = relative_ball(grp, x, paras, p);
    else if (kind == "coset")
      handle->g = coset_ball(grp, x, paras, p);
    else if (kind == "coned")
      handle->g = coned_off_ball(grp, x, paras, p);
    else if (kind == "tree")
      handle->g = bass_serre_ball(grp, p);
    else
      fail(ErrorCode::Invalid, "unknown ball kind: " + kind);
    *out = handle.release();
  });
}

extern "C" void rh_graph_free(rh_graph* g) { delete g; }

extern "C" rh_status rh_graph_from_json(const char* text, rh_graph** out) {
  return wrap([&] {
    if (!text || !out) fail(ErrorCode::Invalid, "null argument");
    auto handle = std::make_unique<rh_graph>();
    handle->g = LabeledGraph::from_json(text);
    *out = handle.release();
  });
}

extern "C" rh_status rh_graph_to_json(const rh_graph* g, char** out) {
  return wrap([&] { *out = dup_string(require_graph(g)->g.to_json()); });
}

extern "C" rh_status rh_graph_to_dot(const rh_graph* g, char** out) {
  return wrap([&] { *out = dup_string(require_graph(g)->g.to_dot()); });
}

extern "C" rh_status rh_graph_info(const rh_graph* g, char** out_json) {
  return wrap([&] {
    const LabeledGraph& lg = require_graph(g)->g;
    json j{{"vertices", lg.vertex_count()},
           {"edges", lg.edge_count()},
           {"kind", lg.meta().kind},
           {"r", lg.meta().radius},
           {"R_H", lg.meta().rh},
           {"scale", lg.meta().scale},
           {"exact", lg.meta().exact},
           {"exactness_checked", lg.meta().exactness_checked},
           {"connected", lg.connected()},
           {"acyclic", lg.acyclic()},
           {"note", lg.meta().note}};
    *out_json = dup_string(j.dump());
  });
}

extern "C" rh_status rh_edge_orbit_witness(const rh_graph* g, int edge_a, int edge_b,
                                           char** out_word) {
  return wrap([&] {
    const rh_graph* h = require_graph(g);
    if (!h->group) fail(ErrorCode::Invalid, "graph was not built from a group");
    Element w = edge_orbit_witness(h->g, h->group, h->parabolics, edge_a, edge_b);
    *out_word = dup_string(format_word(w.canonical));
  });
}

extern "C" rh_status rh_delta(const rh_graph* g, const char* options_json, char** report_json) {
  return wrap([&] {
    const LabeledGraph& lg = require_graph(g)->g;
    json opts = parse_options(options_json, "delta options");
    std::string mode = opts.value("mode", std::string("exact"));
    int threads = opts.value("threads", 0);
    DeltaReport rep;
    if (mode == "exact")
      rep = delta_four_point(lg, false, threads);
    else if (mode == "basepoint")
      rep = delta_four_point(lg, true, threads);
    else if (mode == "slim")
      rep = delta_slim(lg, opts.value("budget", static_cast<std::size_t>(200000)));
    else
      fail(ErrorCode::Invalid, "unknown delta mode: " + mode);
    *report_json = dup_string(delta_report_json(rep).dump(2));
  });
}

extern "C" rh_status rh_delta_series(const rh_group* g, const char* options_json,
                                     char** report_json, char** csv) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    json opts = parse_options(options_json, "series options");
    std::vector<int> radii;
    for (const auto& r : opts.value("radii", json::array())) radii.push_back(r.get<int>());
    if (radii.empty()) fail(ErrorCode::Invalid, "series needs radii");
    std::string mode = opts.value("mode", std::string("exact"));
    DeltaMethod method = mode == "exact"      ? DeltaMethod::FourPointExact
                         : mode == "basepoint" ? DeltaMethod::FourPointBase
                         : mode == "slim"      ? DeltaMethod::Slim
                                               : DeltaMethod::FourPointExact;
    if (mode != "exact" && mode != "basepoint" && mode != "slim")
      fail(ErrorCode::Invalid, "unknown delta mode: " + mode);
    int threads = opts.value("threads", 0);
    std::string kind = opts.value("kind", std::string("relative"));
    std::vector<std::string> x = names_from(opts.value("x", json::array()));
    std::vector<SubgroupSpec> paras = parabolics_from(opts.value("parabolics", json::array()));
    BallParams base = ball_params(opts);
    DeltaSeries series = delta_series(
        [&](int r) {
          BallParams p = base;
          p.radius = r;
          if (kind == "relative") return relative_ball(grp, x, paras, p);
          if (kind == "coset") return coset_ball(grp, x, paras, p);
          if (kind == "coned") return coned_off_ball(grp, x, paras, p);
          if (kind == "tree") return bass_serre_ball(grp, p);
          fail(ErrorCode::Invalid, "unknown ball kind: " + kind);
        },
        radii, method, threads);
    json rows = json::array();
    for (size_t i = 0; i < series.reports.size(); ++i) {
      json row = delta_report_json(series.reports[i]);
      row["radius"] = series.radii[i];
      rows.push_back(std::move(row));
    }
    json j{{"rows", rows}, {"verdict", series.verdict}};
    *report_json = dup_string(j.dump(2));
    if (csv) *csv = dup_string(delta_series_csv(series));
  });
}

extern "C" rh_status rh_qi_eqdef(const rh_group* g, const char* options_json,
                                 char** report_json, int* pass) {
  return wrap([&] {
    const auto& grp = require_group(g)->g;
    json opts = parse_options(options_json, "eqdef options");
    std::vector<std::string> x = names_from(opts.value("x", json::array()));
    std::vector<SubgroupSpec> paras = parabolics_from(opts.value("parabolics", json::array()));
    EqdefReport rep = eqdef_check(grp, x, paras, ball_params(opts));
    *report_json = dup_string(rep.to_json());
    if (pass) *pass = rep.pass() ? 1 : 0;
  });
}

extern "C" rh_status rh_qi_check_map(const rh_graph* g1, const rh_graph* g2,
                                     const char* map_json, const char* params_json,
                                     char** report_json, int* pass) {
  return wrap([&] {
    const LabeledGraph& a = require_graph(g1)->g;
    const LabeledGraph& b = require_graph(g2)->g;
    json mj = parse_options(map_json, "vertex map");
    std::vector<int> alpha(static_cast<size_t>(a.vertex_count()), -1);
    for (const auto& pair : mj) {
      int u = pair.at(0).get<int>(), v = pair.at(1).get<int>();
      if (u < 0 || u >= a.vertex_count()) fail(ErrorCode::Invalid, "map source out of range");
      alpha[static_cast<size_t>(u)] = v;
    }
    for (int v : alpha)
      if (v < 0) fail(ErrorCode::Invalid, "map must cover every source vertex");
    json pj = parse_options(params_json, "qi params");
    QIVerdict verdict = check_qi_map(a, b, alpha, rational_from(pj.value("lambda", json()), Rational(1, 1)),
                                     rational_from(pj.value("c", json()), Rational(0, 1)),
                                     rational_from(pj.value("epsilon", json()), Rational(0, 1)));
    *report_json = dup_string(verdict.to_json());
    if (pass) *pass = verdict.pass() ? 1 : 0;
  });
}

extern "C" rh_status rh_qi_lipschitz(const rh_graph* g1, const rh_graph* g2,
                                     const char* map_json, char** report_json, int* pass) {
  return wrap([&] {
    const LabeledGraph& a = require_graph(g1)->g;
    const LabeledGraph& b = require_graph(g2)->g;
    std::vector<int> beta;
    json mj = parse_options(map_json, "vertex map");
    if (mj.is_null() || (mj.is_array() && mj.empty())) {
      // Default association: match vertices by key.
      for (int v = 0; v < a.vertex_count(); ++v) {
        int id = b.find_vertex(a.vertex(v).key);
        if (id < 0)
          fail(ErrorCode::Invalid, "no key match for vertex " + std::to_string(v) +
                                       "; supply an explicit map");
        beta.push_back(id);
      }
    } else {
      beta.assign(static_cast<size_t>(a.vertex_count()), -1);
      for (const auto& pair : mj)
        beta[static_cast<size_t>(pair.at(0).get<int>())] = pair.at(1).get<int>();
      for (int v : beta)
        if (v < 0) fail(ErrorCode::Invalid, "map must cover every source vertex");
    }
    LipschitzReport rep = lipschitz_orbit_bound(a, b, beta, true);
    *report_json = dup_string(rep.to_json());
    if (pass) *pass = rep.pass() ? 1 : 0;
  });
}

extern "C" rh_status rh_fill_cycle(const rh_graph* g, const char* cycle_word, long long m_bound,
                                   char** report_json) {
  return wrap([&] {
    const rh_graph* h = require_graph(g);
    if (!h->group) fail(ErrorCode::Invalid, "graph was not built from a group");
    GroupPtr working = h->group->working_group();
    CyclePath c = trace_cycle_word(h->g, working, parse_word(working->alphabet(), cycle_word));
    FillReport rep = fill_cycle(h->g, c, m_bound);
    json j{{"k", rep.k},
           {"l", rep.input_length},
           {"M", rep.m_bound},
           {"chain_ok", rep.chain_ok},
           {"diam_ok", rep.diam_ok},
           {"unsplittable", rep.unsplittable}};
    json ps = json::array();
    for (const CyclePiece& p : rep.pieces)
      ps.push_back({{"length", p.length}, {"diameter", p.diameter}});
    j["pieces"] = std::move(ps);
    *report_json = dup_string(j.dump(2));
  });
}

extern "C" rh_status rh_hnn_decompose(const rh_graph* g, const char* cycle_word,
                                      long long m_bound, char** report_json) {
  return wrap([&] {
    const rh_graph* h = require_graph(g);
    if (!h->group) fail(ErrorCode::Invalid, "graph was not built from a group");
    GroupPtr working = h->group->working_group();
    if (working->kind() != GroupKind::Hnn)
      fail(ErrorCode::Invalid, "decompose needs an HNN group");
    CyclePath c = trace_cycle_word(h->g, working, parse_word(working->alphabet(), cycle_word));
    DecompositionReport rep = hnn_decompose(h->g, working, c, m_bound);
    *report_json = dup_string(rep.to_json());
  });
}

extern "C" rh_status rh_verify_ip(const rh_graph* g, const char* options_json,
                                  char** report_json) {
  return wrap([&] {
    const rh_graph* h = require_graph(g);
    json opts = parse_options(options_json, "verify_ip options");
    long long m = opts.value("M", 4LL * h->g.meta().scale);
    Rational l = rational_from(opts.value("L", json()), Rational(1, 1));
    int samples = opts.value("samples", 20);
    int max_len = opts.value("max_len", 12);
    unsigned seed = opts.value("seed", 0u);
    auto cycles = sample_cycles(h->g, samples, max_len, seed);
    IpReport rep = verify_ip(h->g, m, {l.num, l.den}, cycles);
    json j = json::parse(rep.to_json());
    j["seed"] = seed;
    *report_json = dup_string(j.dump(2));
  });
}

extern "C" rh_status rh_experiment(const char* name, unsigned seed, int threads,
                                   char** files_json, int* pass) {
  return wrap([&] {
    if (!name) fail(ErrorCode::Invalid, "null preset name");
    PresetResult res = run_preset(name, seed, threads);
    json files = json::object();
    for (const auto& [path, content] : res.files) files[path] = content;
    json j{{"name", res.name}, {"files", files}, {"summary", res.summary}, {"pass", res.pass}};
    *files_json = dup_string(j.dump(2));
    if (pass) *pass = res.pass ? 1 : 0;
  });
}

extern "C" rh_status rh_experiment_names(char** out_json) {
  return wrap([&] {
    json j = preset_names();
    *out_json = dup_string(j.dump());
  });
}
