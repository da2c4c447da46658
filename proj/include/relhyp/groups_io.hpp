#pragma once

#include <string>

#include "relhyp/groups.hpp"

namespace relhyp {

/// Parse specs from the JSON forms used by config files and the CLI, e.g.
/// {"type":"hnn","base":{"type":"free","rank":2},
///  "A":{"type":"folded","generators":["a"]},
///  "B":{"type":"folded","generators":["b"]},"phi":["b"],"stable":"t"}.
GroupSpec parse_group_spec(const std::string& json_text);
SubgroupSpec parse_subgroup_spec(const std::string& json_text);

std::string group_spec_to_json(const GroupSpec& spec);
std::string subgroup_spec_to_json(const SubgroupSpec& spec);

}  // namespace relhyp
