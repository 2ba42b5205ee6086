#pragma once

// JSON rendering of goal reports and exhaustion traces.

#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "zorn/realizers.hpp"

namespace zorn {

using Json = nlohmann::ordered_json;

template <class T>
Json elem_json(const T& v) {
  if constexpr (std::is_integral_v<T>) {
    return static_cast<std::uint64_t>(v);
  } else {
    std::ostringstream os;
    os << v;
    return os.str();
  }
}

template <class Approx>
Json approx_json(const Approx& u) {
  Json out = Json::array();
  for (const auto& v : u) out.push_back(elem_json(v));
  return out;
}

Json exhausted_json(const Exhausted& e);

/// Full report including recorded relevant-part checks and any trace.
template <class Approx>
Json goal_report_json(const GoalReport<Approx>& rep) {
  Json j;
  j["status"] = to_string(rep.status);
  j["r"] = rep.r;
  j["s_prefix"] = approx_json(rep.s_prefix);
  j["gamma_len"] = rep.gamma_len;
  j["q_x_r"] = rep.q_x_r;
  j["q_s"] = rep.q_s;
  j["c_holds"] = rep.c_holds;
  j["rp_ok"] = rep.rp_ok;
  j["rp_total"] = rep.rp_total;
  Json checks = Json::array();
  for (const auto& c : rep.rp_checks)
    checks.push_back(Json{{"x", c.snapshot}, {"size", c.size}, {"holds", c.holds}});
  j["rp_checks"] = std::move(checks);
  j["budget_spent"] = rep.budget_spent;
  if (rep.exhaustion) j["exhaustion"] = exhausted_json(*rep.exhaustion);
  return j;
}

}  // namespace zorn
