#include <doctest.h>

#include <json.hpp>
#include <string>

#include "relhyp.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  rh_string_free(s);
  return out;
}

struct Group {
  rh_group* g = nullptr;
  explicit Group(const std::string& spec) { REQUIRE(rh_group_new(spec.c_str(), &g) == RH_OK); }
  ~Group() { rh_group_free(g); }
};

struct Graph {
  rh_graph* g = nullptr;
  Graph() = default;
  ~Graph() { rh_graph_free(g); }
};

const char* kHnn =
    R"({"type":"hnn","base":{"type":"free","rank":1},)"
    R"("A":{"type":"folded","generators":["a"]},)"
    R"("B":{"type":"folded","generators":["a"]},"stable":"t"})";

}  // namespace

TEST_CASE("c api: groups and words") {
  Group g(kHnn);
  char* out = nullptr;
  REQUIRE(rh_group_alphabet(g.g, &out) == RH_OK);
  CHECK(take(out) == R"(["a","t"])");

  int id = -1;
  REQUIRE(rh_is_identity(g.g, "t^-1 a t a^-1", &id) == RH_OK);
  CHECK(id == 1);
  REQUIRE(rh_is_identity(g.g, "t", &id) == RH_OK);
  CHECK(id == 0);

  REQUIRE(rh_britton_reduce(g.g, "t^-1 a t", &out) == RH_OK);
  CHECK(take(out) == "a");
  REQUIRE(rh_canonical_key(g.g, "t^-1 a t", &out) == RH_OK);
  CHECK(take(out) == "a");

  REQUIRE(rh_pinch_find(g.g, "t^-1 a t", &out) == RH_OK);
  json pin = json::parse(take(out));
  CHECK(pin.at("found").get<bool>());
  CHECK(pin.at("side").get<std::string>() == "A");

  CHECK(rh_is_identity(g.g, "x y z", &id) == RH_ERR_ALPHABET);
  CHECK(std::string(rh_last_error()).find("unknown symbol") != std::string::npos);

  rh_group* bad = nullptr;
  CHECK(rh_group_new("{not json", &bad) == RH_ERR_PARSE);
}

TEST_CASE("c api: subgroup queries") {
  Group f2(R"({"type":"free","rank":2})");
  int member = -1;
  REQUIRE(rh_subgroup_member(f2.g, R"(["a^2","a b"])", "a^2", &member) == RH_OK);
  CHECK(member == 1);
  REQUIRE(rh_subgroup_member(f2.g, R"(["a^2","a b"])", "b", &member) == RH_OK);
  CHECK(member == 0);
  char* expr = nullptr;
  REQUIRE(rh_subgroup_express(f2.g, R"(["a"])", "a^3", &expr) == RH_OK);
  CHECK(take(expr) == "x1^3");
  CHECK(rh_subgroup_express(f2.g, R"(["a"])", "b", &expr) == RH_ERR_MEMBERSHIP);
}

TEST_CASE("c api: balls, delta, decomposition") {
  Group g(kHnn);
  Graph ball;
  json opts{{"kind", "relative"},
            {"x", {"a", "t"}},
            {"parabolics", json::array({json{{"type", "folded"}, {"generators", {"a"}}},
                                        json{{"type", "folded"}, {"generators", {"a"}}}})},
            {"radius", 3},
            {"rh", 3},
            {"exact_check", false}};
  REQUIRE(rh_ball_build(g.g, opts.dump().c_str(), &ball.g) == RH_OK);

  char* info = nullptr;
  REQUIRE(rh_graph_info(ball.g, &info) == RH_OK);
  json ij = json::parse(take(info));
  CHECK(ij.at("vertices").get<int>() > 10);
  CHECK(ij.at("connected").get<bool>());

  char* rep = nullptr;
  REQUIRE(rh_delta(ball.g, R"({"mode":"basepoint"})", &rep) == RH_OK);
  json dj = json::parse(take(rep));
  CHECK(dj.at("method").get<std::string>() == "four-point-basepoint");

  REQUIRE(rh_hnn_decompose(ball.g, "t^-1 a t a^-1", 4, &rep) == RH_OK);
  json dec = json::parse(take(rep));
  CHECK(dec.at("chain_ok").get<bool>());
  CHECK(dec.at("bound_ok").get<bool>());
  CHECK(dec.at("n").get<int>() == 2);

  REQUIRE(rh_verify_ip(ball.g, R"({"M":4,"samples":5,"max_len":10,"seed":1})", &rep) == RH_OK);
  json ip = json::parse(take(rep));
  CHECK(ip.contains("pass_ratio"));

  // Round trip through JSON loses no metric structure.
  char* gj = nullptr;
  REQUIRE(rh_graph_to_json(ball.g, &gj) == RH_OK);
  Graph loaded;
  std::string text = take(gj);
  REQUIRE(rh_graph_from_json(text.c_str(), &loaded.g) == RH_OK);
  REQUIRE(rh_delta(loaded.g, R"({"mode":"basepoint"})", &rep) == RH_OK);
  json dj2 = json::parse(take(rep));
  CHECK(dj2.at("delta_numerator") == dj.at("delta_numerator"));

  char* dot = nullptr;
  REQUIRE(rh_graph_to_dot(ball.g, &dot) == RH_OK);
  CHECK(take(dot).find("graph ball {") == 0);
}

TEST_CASE("c api: eqdef and series") {
  Group z2(R"({"type":"free_abelian","rank":2})");
  json opts{{"x", {"b"}},
            {"parabolics", json::array({json{{"type", "coordinate_lattice"}, {"coords", {"a"}}}})},
            {"radius", 3},
            {"rh", 4}};
  char* rep = nullptr;
  int pass = 0;
  REQUIRE(rh_qi_eqdef(z2.g, opts.dump().c_str(), &rep, &pass) == RH_OK);
  CHECK(pass == 1);
  json ej = json::parse(take(rep));
  CHECK(ej.at("alpha").at("pass").get<bool>());

  json series_opts{{"kind", "relative"},
                   {"x", {"b"}},
                   {"parabolics",
                    json::array({json{{"type", "coordinate_lattice"}, {"coords", {"a"}}}})},
                   {"rh", 1},
                   {"radii", {2, 3, 4}},
                   {"mode", "exact"},
                   {"exact_check", false}};
  char* csv = nullptr;
  REQUIRE(rh_delta_series(z2.g, series_opts.dump().c_str(), &rep, &csv) == RH_OK);
  json sj = json::parse(take(rep));
  CHECK(sj.at("verdict").get<std::string>() == "bounded");
  CHECK(take(csv).find("radius,n_vertices") == 0);
}

TEST_CASE("c api: experiments and witnesses") {
  char* names = nullptr;
  REQUIRE(rh_experiment_names(&names) == RH_OK);
  json nj = json::parse(take(names));
  CHECK(nj.size() == 4);

  Group z2(R"({"type":"free_abelian","rank":2})");
  Graph cos;
  json opts{{"kind", "coset"},
            {"x", {"b"}},
            {"parabolics", json::array({json{{"type", "coordinate_lattice"}, {"coords", {"a"}}}})},
            {"radius", 3},
            {"rh", 3},
            {"exact_check", false}};
  REQUIRE(rh_ball_build(z2.g, opts.dump().c_str(), &cos.g) == RH_OK);
  char* w = nullptr;
  REQUIRE(rh_edge_orbit_witness(cos.g, 0, 1, &w) == RH_OK);
  CHECK_FALSE(take(w).empty());
}
