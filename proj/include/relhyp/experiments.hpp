#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relhyp/groups.hpp"

namespace relhyp {

struct PresetResult {
  std::string name;
  bool pass = false;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> files;  // (relative path, content)
};

/// Built-in experiments:
///   z-chain            delta series separating Z^2 rel Z (bounded) from
///                      Z^3 rel Z (growing)
///   tree-compare       coset balls of three HNN examples against their
///                      Bass-Serre tree balls (delta 0, Lipschitz both ways,
///                      acyclicity)
///   commutator-kernel  word problem statistics in <F2, t | t^-1 f t = f,
///                      f in [F2, F2]>: decision routes agree, pinches follow
///                      the exponent vector
///   free-weak-hyp      bounded delta series for F2 relative to a finitely
///                      generated subgroup
PresetResult run_preset(const std::string& name, unsigned seed, int threads);

std::vector<std::string> preset_names();

}  // namespace relhyp
