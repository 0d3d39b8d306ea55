#pragma once

#include "bernlab/folner.hpp"
#include "bernlab/marginals.hpp"

#include <string>
#include <vector>

namespace bernlab {

struct PresetInfo {
  std::string name;
  std::string argument;  // empty when the preset takes none
  std::string summary;
};

std::vector<PresetInfo> preset_list();

// "f2-wsplit", "explicit-z(1/3)", "f2-dissipative(40)", "folner-z(log1p:1/2)".
ActionSpec preset(const std::string& name);

ActionSpec explicit_z(const Rational& lambda);
ActionSpec explicit_z_sqrt6();
ActionSpec f2_wsplit();
ActionSpec f2_wsplit_512();
ActionSpec f2_dissipative(const Rational& D);
ActionSpec folner_z(const PhiSpec& phi);

}  // namespace bernlab
