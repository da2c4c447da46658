#include "relhyp/groups_io.hpp"

#include <json.hpp>

namespace relhyp {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::Parse, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) fail(ErrorCode::Parse, std::string(what) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

SubgroupSpec subgroup_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(ErrorCode::Parse, "subgroup spec must be an object with a type");
  std::string type = j.at("type").get<std::string>();
  if (type == "folded")
    return SubgroupSpec::folded(string_list(j.at("generators"), "generators"));
  if (type == "commutator_kernel") return SubgroupSpec::commutator_kernel();
  if (type == "coordinate_lattice")
    return SubgroupSpec::coordinate_lattice(string_list(j.at("coords"), "coords"));
  if (type == "trivial") return SubgroupSpec::trivial();
  if (type == "whole") return SubgroupSpec::whole();
  fail(ErrorCode::Parse, "unknown subgroup type: " + type);
}

GroupSpec group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(ErrorCode::Parse, "group spec must be an object with a type");
  std::string type = j.at("type").get<std::string>();
  if (type == "free" || type == "free_abelian") {
    int rank = j.at("rank").get<int>();
    std::vector<std::string> names;
    if (j.contains("alphabet")) names = string_list(j.at("alphabet"), "alphabet");
    return type == "free" ? GroupSpec::free_group(rank, std::move(names))
                          : GroupSpec::free_abelian(rank, std::move(names));
  }
  if (type == "product") {
    std::vector<GroupSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(group_from_json(f));
    return GroupSpec::product(std::move(factors));
  }
  if (type == "hnn") {
    std::vector<std::string> phi;
    if (j.contains("phi")) phi = string_list(j.at("phi"), "phi");
    std::string stable = j.value("stable", std::string("t"));
    return GroupSpec::hnn(group_from_json(j.at("base")), subgroup_from_json(j.at("A")),
                          subgroup_from_json(j.at("B")), std::move(phi), std::move(stable));
  }
  if (type == "amalgam") {
    std::vector<std::string> phi;
    if (j.contains("phi")) phi = string_list(j.at("phi"), "phi");
    std::string stable = j.value("stable", std::string("t"));
    return GroupSpec::amalgam(group_from_json(j.at("H")), group_from_json(j.at("K")),
                              subgroup_from_json(j.at("A")), subgroup_from_json(j.at("B")),
                              std::move(phi), std::move(stable));
  }
  fail(ErrorCode::Parse, "unknown group type: " + type);
}

json subgroup_to_json(const SubgroupSpec& s) {
  json j;
  switch (s.kind) {
    case SubKind::FoldedFree:
      j["type"] = "folded";
      j["generators"] = s.generators;
      break;
    case SubKind::CommutatorKernel:
      j["type"] = "commutator_kernel";
      break;
    case SubKind::CoordinateLattice:
      j["type"] = "coordinate_lattice";
      j["coords"] = s.coordinates;
      break;
    case SubKind::Trivial:
      j["type"] = "trivial";
      break;
    case SubKind::Whole:
      j["type"] = "whole";
      break;
  }
  return j;
}

json group_to_json(const GroupSpec& g) {
  json j;
  switch (g.kind) {
    case GroupKind::Free:
    case GroupKind::FreeAbelian:
      j["type"] = g.kind == GroupKind::Free ? "free" : "free_abelian";
      j["rank"] = g.rank;
      if (!g.alphabet.empty()) j["alphabet"] = g.alphabet;
      break;
    case GroupKind::Product: {
      j["type"] = "product";
      json fs = json::array();
      for (const auto& f : g.factors) fs.push_back(group_to_json(f));
      j["factors"] = std::move(fs);
      break;
    }
    case GroupKind::Hnn:
      j["type"] = "hnn";
      j["base"] = group_to_json(*g.base);
      j["A"] = subgroup_to_json(g.sub_a);
      j["B"] = subgroup_to_json(g.sub_b);
      if (!g.phi.empty()) j["phi"] = g.phi;
      j["stable"] = g.stable;
      break;
    case GroupKind::Amalgam:
      j["type"] = "amalgam";
      j["H"] = group_to_json(*g.left);
      j["K"] = group_to_json(*g.right);
      j["A"] = subgroup_to_json(g.sub_a);
      j["B"] = subgroup_to_json(g.sub_b);
      if (!g.phi.empty()) j["phi"] = g.phi;
      j["stable"] = g.stable;
      break;
  }
  return j;
}

json parse_json_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::Parse, std::string("malformed JSON in ") + what);
  return j;
}

}  // namespace

GroupSpec parse_group_spec(const std::string& json_text) {
  return group_from_json(parse_json_text(json_text, "group spec"));
}

SubgroupSpec parse_subgroup_spec(const std::string& json_text) {
  json j = parse_json_text(json_text, "subgroup spec");
  // Accept the bare generator-list shorthand used on the command line.
  if (j.is_array()) {
    std::vector<std::string> gens;
    for (const auto& e : j) gens.push_back(e.get<std::string>());
    return SubgroupSpec::folded(std::move(gens));
  }
  return subgroup_from_json(j);
}

std::string group_spec_to_json(const GroupSpec& spec) { return group_to_json(spec).dump(); }

std::string subgroup_spec_to_json(const SubgroupSpec& spec) {
  return subgroup_to_json(spec).dump();
}

}  // namespace relhyp
