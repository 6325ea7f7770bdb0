#pragma once

#include <string>
#include <string_view>

#include "edgedel/error.hpp"

namespace edgedel {

enum class Method { ed_bp, ed_kl };
enum class Schedule { sequential, simultaneous };
enum class Initialization { uniform, warm_start };
// How edges are picked for deletion: at random, by the KL edge score, or by
// weakest mutual information.
enum class Selection { rand, guided, mi };

inline const char* to_string(Method m) { return m == Method::ed_bp ? "ed-bp" : "ed-kl"; }

inline const char* to_string(Selection s) {
  switch (s) {
    case Selection::rand: return "rand";
    case Selection::guided: return "guided";
    case Selection::mi: return "mi";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "ed-bp") return Method::ed_bp;
  if (s == "ed-kl") return Method::ed_kl;
  throw InvalidArgument("unknown method '" + std::string(s) + "' (expected ed-bp or ed-kl)");
}

inline Selection parse_selection(std::string_view s) {
  if (s == "rand") return Selection::rand;
  if (s == "guided") return Selection::guided;
  if (s == "mi") return Selection::mi;
  throw InvalidArgument("unknown selection '" + std::string(s) + "' (expected rand, guided or mi)");
}

inline Schedule parse_schedule(std::string_view s) {
  if (s == "sequential") return Schedule::sequential;
  if (s == "simultaneous") return Schedule::simultaneous;
  throw InvalidArgument("unknown schedule '" + std::string(s) + "'");
}

}  // namespace edgedel
