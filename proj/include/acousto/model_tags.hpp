#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace acousto {

/// The six displacement models plus the two companion descriptions.
enum class ModelTag { L0, L1, L2, L3, L4, L, Eulerian, Potential };

inline bool is_lagrangian(ModelTag t) {
  return t != ModelTag::Eulerian && t != ModelTag::Potential;
}

inline std::string to_string(ModelTag t) {
  switch (t) {
    case ModelTag::L0: return "L0";
    case ModelTag::L1: return "L1";
    case ModelTag::L2: return "L2";
    case ModelTag::L3: return "L3";
    case ModelTag::L4: return "L4";
    case ModelTag::L: return "L";
    case ModelTag::Eulerian: return "eulerian";
    case ModelTag::Potential: return "potential";
  }
  return "?";
}

inline ModelTag model_tag_from_string(const std::string& s) {
  if (s == "L0") return ModelTag::L0;
  if (s == "L1") return ModelTag::L1;
  if (s == "L2") return ModelTag::L2;
  if (s == "L3") return ModelTag::L3;
  if (s == "L4") return ModelTag::L4;
  if (s == "L") return ModelTag::L;
  if (s == "eulerian") return ModelTag::Eulerian;
  if (s == "potential") return ModelTag::Potential;
  throw std::invalid_argument("unknown model tag: " + s);
}

}  // namespace acousto
