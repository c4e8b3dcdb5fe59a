#pragma once

#include <string>

#include "core/vector_ops.hpp"

namespace feecns {

enum class Slot { V0, V1, V2 };
enum class Conformity { Conforming, Broken };

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::V0: return "V0";
    case Slot::V1: return "V1";
    case Slot::V2: return "V2";
  }
  return "?";
}

/// Coefficient vector tagged with its space.
struct Field {
  Slot slot = Slot::V1;
  Conformity conformity = Conformity::Broken;
  Vec coeffs;
};

}  // namespace feecns
