// Command-line front end over the relhyp C API. Subcommands construct groups
// from JSON specs, build graph balls, run delta / quasi-isometry /
// decomposition checks, and write DOT / JSON / CSV artifacts.
//
// Exit codes: 0 success or passing verdict, 2 failing verdict, 1 usage or
// construction error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relhyp.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

void check(rh_status st) {
  if (st != RH_OK) die(1, rh_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  rh_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) die(1, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Group specs may be given inline as JSON or as a path to a JSON file.
std::string load_spec(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return arg;
  return slurp(arg);
}

struct GroupHandle {
  rh_group* g = nullptr;
  explicit GroupHandle(const std::string& spec) { check(rh_group_new(spec.c_str(), &g)); }
  ~GroupHandle() { rh_group_free(g); }
};

struct GraphHandle {
  rh_graph* g = nullptr;
  GraphHandle() = default;
  explicit GraphHandle(rh_graph* raw) : g(raw) {}
  GraphHandle(const GraphHandle&) = delete;
  ~GraphHandle() { rh_graph_free(g); }
};

void write_file(const fs::path& out_dir, const std::string& name, const std::string& content) {
  fs::create_directories(out_dir);
  fs::path target = out_dir / name;
  std::ofstream out(target);
  if (!out) die(1, "cannot write: " + target.string());
  out << content;
  std::cout << "wrote " << target.string() << "\n";
}

json ball_options(const std::string& kind, const std::vector<std::string>& x,
                  const std::string& parabolics, int radius, int rh, long long budget,
                  bool exact_check) {
  json opts;
  opts["kind"] = kind;
  opts["x"] = x;
  opts["parabolics"] =
      parabolics.empty() ? json::array() : json::parse(parabolics, nullptr, false);
  if (opts["parabolics"].is_discarded()) die(1, "malformed parabolics JSON");
  opts["radius"] = radius;
  opts["rh"] = rh;
  if (budget > 0) opts["budget"] = budget;
  opts["exact_check"] = exact_check;
  return opts;
}

struct BallArgs {
  std::string group_spec;
  std::vector<std::string> x;
  std::string parabolics;
  int radius = 2;
  int rh = 2;
  long long budget = 0;
  bool no_exact_check = false;
  std::string out_dir = "out";
  std::string name;
};

void add_ball_options(CLI::App* cmd, BallArgs& args, bool need_parabolics) {
  cmd->add_option("--group", args.group_spec, "group spec (inline JSON or a file path)")
      ->required();
  cmd->add_option("--x", args.x, "relative generating symbols");
  auto* p = cmd->add_option("--parabolics", args.parabolics,
                            "JSON array of parabolic subgroup specs");
  if (need_parabolics) p->required();
  cmd->add_option("--r", args.radius, "ball radius");
  cmd->add_option("--rh", args.rh, "parabolic truncation R_H");
  cmd->add_option("--budget", args.budget, "vertex budget (default 200000 or RELHYP_BUDGET)");
  cmd->add_flag("--no-exact-check", args.no_exact_check,
                "skip the R_H + 2 exactness certification");
  cmd->add_option("--out", args.out_dir, "output directory");
}

GraphHandle build_ball(const BallArgs& args, const std::string& kind) {
  GroupHandle group(load_spec(args.group_spec));
  json opts = ball_options(kind, args.x, args.parabolics, args.radius, args.rh, args.budget,
                           !args.no_exact_check);
  rh_graph* raw = nullptr;
  check(rh_ball_build(group.g, opts.dump().c_str(), &raw));
  return GraphHandle(raw);
}

int run_ball_command(const BallArgs& args, const std::string& kind) {
  GraphHandle ball = build_ball(args, kind);
  char* info = nullptr;
  check(rh_graph_info(ball.g, &info));
  std::string info_str = take(info);
  std::string base = args.name.empty() ? kind : args.name;
  char* j = nullptr;
  check(rh_graph_to_json(ball.g, &j));
  write_file(args.out_dir, base + ".json", take(j));
  char* d = nullptr;
  check(rh_graph_to_dot(ball.g, &d));
  write_file(args.out_dir, base + ".dot", take(d));
  std::cout << info_str << "\n";
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"relhyp: weak relative hyperbolicity toolkit"};
  app.require_subcommand(1);
  unsigned seed = 0;
  int threads = 0;
  app.add_option("--seed", seed, "seed for sampled procedures (recorded in artifacts)");
  app.add_option("--threads", threads, "worker threads for pair/quadruple scans (0 = auto)");

  // ball / coset / coned / tree -------------------------------------------
  BallArgs ball_args, coset_args, coned_args, tree_args;
  auto* ball_cmd = app.add_subcommand("ball", "relative Cayley ball");
  add_ball_options(ball_cmd, ball_args, false);
  ball_cmd->add_option("--name", ball_args.name, "artifact base name");
  auto* coset_cmd = app.add_subcommand("coset", "left coset graph ball");
  add_ball_options(coset_cmd, coset_args, true);
  coset_cmd->add_option("--name", coset_args.name, "artifact base name");
  auto* coned_cmd = app.add_subcommand("coned", "coned-off Cayley ball");
  add_ball_options(coned_cmd, coned_args, true);
  coned_cmd->add_option("--name", coned_args.name, "artifact base name");
  auto* tree_cmd = app.add_subcommand("tree", "Bass-Serre tree ball");
  add_ball_options(tree_cmd, tree_args, false);
  tree_cmd->add_option("--name", tree_args.name, "artifact base name");

  // delta -------------------------------------------------------------------
  BallArgs delta_args;
  std::string delta_kind = "relative", delta_mode = "exact", delta_graph_file;
  auto* delta_cmd = app.add_subcommand("delta", "hyperbolicity constant of a ball");
  add_ball_options(delta_cmd, delta_args, false);
  delta_cmd->get_option("--group")->required(false);
  delta_cmd->add_option("--kind", delta_kind, "ball kind: relative|coset|coned|tree");
  delta_cmd->add_option("--mode", delta_mode, "exact|basepoint|slim");
  delta_cmd->add_option("--graph", delta_graph_file, "load a graph JSON instead of building");

  // delta-series --------------------------------------------------------------
  BallArgs series_args;
  std::string series_kind = "relative", series_mode = "exact";
  std::vector<int> series_radii;
  auto* series_cmd = app.add_subcommand("delta-series", "delta growth over increasing radii");
  add_ball_options(series_cmd, series_args, false);
  series_cmd->add_option("--kind", series_kind, "ball kind");
  series_cmd->add_option("--mode", series_mode, "exact|basepoint|slim");
  series_cmd->add_option("--radii", series_radii, "increasing radii")->required();

  // qi-eqdef ------------------------------------------------------------------
  BallArgs eqdef_args;
  auto* eqdef_cmd =
      app.add_subcommand("qi-eqdef", "equivalence-of-definitions inequalities");
  add_ball_options(eqdef_cmd, eqdef_args, true);

  // qi-map ----------------------------------------------------------------------
  std::string qi_g1, qi_g2, qi_map_file, qi_lambda = "1", qi_c = "0", qi_eps = "0";
  bool qi_lipschitz = false;
  auto* qi_cmd = app.add_subcommand("qi-map", "check an explicit vertex map");
  qi_cmd->add_option("--g1", qi_g1, "source graph JSON file")->required();
  qi_cmd->add_option("--g2", qi_g2, "target graph JSON file")->required();
  qi_cmd->add_option("--map", qi_map_file, "JSON [[u,v],...]; empty = match by key");
  qi_cmd->add_option("--lambda", qi_lambda, "multiplicative constant (int or num/den)");
  qi_cmd->add_option("--c", qi_c, "additive constant");
  qi_cmd->add_option("--epsilon", qi_eps, "density constant");
  qi_cmd->add_flag("--lipschitz", qi_lipschitz, "run the orbit-bound Lipschitz check instead");
  std::string qi_out = "out";
  qi_cmd->add_option("--out", qi_out, "output directory");

  // britton / member / reduce ---------------------------------------------------
  std::string word_group, word_text, member_subgroup;
  auto* britton_cmd = app.add_subcommand("britton", "Britton-reduce a word");
  britton_cmd->add_option("--group", word_group, "group spec")->required();
  britton_cmd->add_option("--word", word_text, "word")->required();
  auto* member_cmd = app.add_subcommand("member", "subgroup membership");
  member_cmd->add_option("--group", word_group, "group spec")->required();
  member_cmd->add_option("--subgroup", member_subgroup, "subgroup spec JSON")->required();
  member_cmd->add_option("--word", word_text, "word")->required();
  auto* reduce_cmd = app.add_subcommand("reduce", "free reduction over the group alphabet");
  reduce_cmd->add_option("--group", word_group, "group spec")->required();
  reduce_cmd->add_option("--word", word_text, "word")->required();

  // decompose ---------------------------------------------------------------------
  BallArgs dec_args;
  std::string dec_word;
  long long dec_m = 0;
  bool dec_fill_only = false;
  auto* dec_cmd = app.add_subcommand("decompose", "cycle decomposition in a relative ball");
  add_ball_options(dec_cmd, dec_args, false);
  dec_cmd->add_option("--word", dec_word, "identity word labeling the cycle")->required();
  dec_cmd->add_option("--M", dec_m, "piece bound M in scaled units (default 4 scale)");
  dec_cmd->add_flag("--fill-only", dec_fill_only, "use the generic filler, no pinch splitting");

  // experiment ----------------------------------------------------------------------
  std::string preset_name, exp_out = "out";
  auto* exp_cmd = app.add_subcommand("experiment", "run a built-in experiment preset");
  exp_cmd->add_option("preset", preset_name, "z-chain | tree-compare | commutator-kernel | free-weak-hyp")
      ->required();
  exp_cmd->add_option("--out", exp_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (ball_cmd->parsed()) return run_ball_command(ball_args, "relative");
  if (coset_cmd->parsed()) return run_ball_command(coset_args, "coset");
  if (coned_cmd->parsed()) return run_ball_command(coned_args, "coned");
  if (tree_cmd->parsed()) return run_ball_command(tree_args, "tree");

  if (delta_cmd->parsed()) {
    GraphHandle graph;
    if (!delta_graph_file.empty()) {
      rh_graph* raw = nullptr;
      check(rh_graph_from_json(slurp(delta_graph_file).c_str(), &raw));
      graph.g = raw;
    } else {
      if (delta_args.group_spec.empty()) die(1, "delta needs --group or --graph");
      GraphHandle built = build_ball(delta_args, delta_kind);
      graph.g = built.g;
      built.g = nullptr;
    }
    json opts{{"mode", delta_mode}, {"threads", threads}};
    char* rep = nullptr;
    check(rh_delta(graph.g, opts.dump().c_str(), &rep));
    std::string report = take(rep);
    write_file(delta_args.out_dir, "delta.json", report);
    std::cout << report << "\n";
    return 0;
  }

  if (series_cmd->parsed()) {
    GroupHandle group(load_spec(series_args.group_spec));
    json opts = ball_options(series_kind, series_args.x, series_args.parabolics,
                             series_args.radius, series_args.rh, series_args.budget,
                             !series_args.no_exact_check);
    opts["radii"] = series_radii;
    opts["mode"] = series_mode;
    opts["threads"] = threads;
    char* rep = nullptr;
    char* csv = nullptr;
    check(rh_delta_series(group.g, opts.dump().c_str(), &rep, &csv));
    std::string report = take(rep);
    write_file(series_args.out_dir, "delta_series.json", report);
    write_file(series_args.out_dir, "delta_series.csv", take(csv));
    std::string verdict = json::parse(report).value("verdict", std::string());
    std::cout << "verdict: " << verdict << "\n";
    return verdict == "inconclusive" ? 2 : 0;
  }

  if (eqdef_cmd->parsed()) {
    GroupHandle group(load_spec(eqdef_args.group_spec));
    json opts = ball_options("relative", eqdef_args.x, eqdef_args.parabolics,
                             eqdef_args.radius, eqdef_args.rh, eqdef_args.budget,
                             !eqdef_args.no_exact_check);
    char* rep = nullptr;
    int pass = 0;
    check(rh_qi_eqdef(group.g, opts.dump().c_str(), &rep, &pass));
    std::string report = take(rep);
    write_file(eqdef_args.out_dir, "qi_eqdef.json", report);
    std::cout << (pass ? "pass" : "fail") << "\n";
    return pass ? 0 : 2;
  }

  if (qi_cmd->parsed()) {
    rh_graph *raw1 = nullptr, *raw2 = nullptr;
    check(rh_graph_from_json(slurp(qi_g1).c_str(), &raw1));
    GraphHandle g1(raw1);
    check(rh_graph_from_json(slurp(qi_g2).c_str(), &raw2));
    GraphHandle g2(raw2);
    std::string map_json = qi_map_file.empty() ? "[]" : slurp(qi_map_file);
    char* rep = nullptr;
    int pass = 0;
    if (qi_lipschitz) {
      check(rh_qi_lipschitz(g1.g, g2.g, map_json.c_str(), &rep, &pass));
    } else {
      auto rational = [](const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return json::array({std::stoll(s), 1});
        return json::array(
            {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))});
      };
      json params{{"lambda", rational(qi_lambda)}, {"c", rational(qi_c)},
                  {"epsilon", rational(qi_eps)}};
      check(rh_qi_check_map(g1.g, g2.g, map_json.c_str(), params.dump().c_str(), &rep, &pass));
    }
    std::string report = take(rep);
    write_file(qi_out, qi_lipschitz ? "qi_lipschitz.json" : "qi_map.json", report);
    std::cout << (pass ? "pass" : "fail") << "\n";
    return pass ? 0 : 2;
  }

  if (britton_cmd->parsed()) {
    GroupHandle group(load_spec(word_group));
    char* out = nullptr;
    check(rh_britton_reduce(group.g, word_text.c_str(), &out));
    std::cout << take(out) << "\n";
    return 0;
  }

  if (member_cmd->parsed()) {
    GroupHandle group(load_spec(word_group));
    int out = 0;
    check(rh_subgroup_member(group.g, member_subgroup.c_str(), word_text.c_str(), &out));
    std::cout << (out ? "true" : "false") << "\n";
    return 0;
  }

  if (reduce_cmd->parsed()) {
    GroupHandle group(load_spec(word_group));
    char* out = nullptr;
    check(rh_reduce(group.g, word_text.c_str(), &out));
    std::cout << take(out) << "\n";
    return 0;
  }

  if (dec_cmd->parsed()) {
    GraphHandle ball = build_ball(dec_args, "relative");
    char* rep = nullptr;
    long long m = dec_m;
    if (m == 0) {
      char* info = nullptr;
      check(rh_graph_info(ball.g, &info));
      m = 4 * json::parse(take(info)).value("scale", 1);
    }
    if (dec_fill_only)
      check(rh_fill_cycle(ball.g, dec_word.c_str(), m, &rep));
    else
      check(rh_hnn_decompose(ball.g, dec_word.c_str(), m, &rep));
    std::string report = take(rep);
    write_file(dec_args.out_dir, "decomposition.json", report);
    json j = json::parse(report);
    bool ok = j.value("chain_ok", true) && j.value("diam_ok", true) &&
              j.value("bound_ok", true) && !j.value("unsplittable", false);
    std::cout << report << "\n";
    return ok ? 0 : 2;
  }

  if (exp_cmd->parsed()) {
    char* files = nullptr;
    int pass = 0;
    check(rh_experiment(preset_name.c_str(), seed, threads, &files, &pass));
    json j = json::parse(take(files));
    for (auto it = j.at("files").begin(); it != j.at("files").end(); ++it)
      write_file(exp_out, it.key(), it.value().get<std::string>());
    json meta{{"name", j.at("name")}, {"seed", seed}, {"summary", j.at("summary")},
              {"pass", pass != 0}};
    write_file(exp_out, preset_name + "_meta.json", meta.dump(2));
    std::cout << j.at("summary").get<std::string>() << "\n";
    return pass ? 0 : 2;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
