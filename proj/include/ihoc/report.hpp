#pragma once

#include <string>

#include <json.hpp>

#include "problem.hpp"
#include "spaces.hpp"
#include "weights.hpp"

namespace ihoc {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const CheckResult& c) {
  ordered_json j;
  j["name"] = c.name;
  j["verdict"] = to_string(c.verdict);
  j["value"] = c.value;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline ordered_json to_json(const CheckReport& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : r.items) arr.push_back(to_json(c));
  return arr;
}

inline ordered_json to_json(const PropertyReport& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json j;
    j["name"] = c.name;
    j["verdict"] = to_string(c.verdict);
    j["witness"] = c.witness;
    if (!c.note.empty()) j["note"] = c.note;
    arr.push_back(j);
  }
  return arr;
}

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

}  // namespace ihoc
