#pragma once

// JSON forms of parameter records and reports. Big integers and rationals
// are written as decimal strings ("p" or "p/q").

#include "cornerforge/avoiders.hpp"
#include "cornerforge/behrend.hpp"
#include "cornerforge/contfrac.hpp"
#include "cornerforge/mandache.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cornerforge {

using Json = nlohmann::ordered_json;

inline std::string big_string(const BigInt& v) { return v.str(); }

inline BigInt big_from(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  return BigInt(j.get<std::string>());
}

inline Json to_json(const QCSystem& s) {
  Json g = Json::array();
  for (const auto& row : s.gamma) g.push_back(std::vector<std::int64_t>(row.begin(), row.end()));
  return Json{{"a", s.a}, {"M", s.M}, {"gamma", g}};
}

inline QCSystem qc_from_json(const Json& j) {
  QCSystem s;
  s.a = j.at("a").get<std::vector<std::int64_t>>();
  s.M = j.at("M").get<std::int64_t>();
  for (const auto& row : j.at("gamma")) {
    auto v = row.get<std::vector<std::int64_t>>();
    if (v.size() != 4) throw std::invalid_argument("gamma rows must have 4 entries");
    s.gamma.push_back({v[0], v[1], v[2], v[3]});
  }
  if (s.gamma.size() + 3 != s.a.size()) throw std::invalid_argument("gamma row count does not match a");
  return s;
}

inline Json to_json(const DigitSphereParams& p) {
  return Json{{"L", p.L},           {"d", p.d},         {"m", p.m},
              {"Gamma", p.gamma},   {"radius", p.radius}, {"digits", p.digits},
              {"size_bound", to_string(p.size_bound())}};
}

inline Json to_json(const AlphaSequence& s) {
  Json prefix = Json::array();
  for (const auto& c : s.prefix()) prefix.push_back(big_string(c));
  return Json{{"m", s.m()},
              {"r", to_string(s.r())},
              {"a", big_string(s.lcm_m())},
              {"x", big_string(s.x())},
              {"y", big_string(s.y())},
              {"t", s.t()},
              {"K", s.K()},
              {"quotients_prefix", prefix}};
}

inline AlphaSequence alpha_from_json(const Json& j) {
  std::vector<BigInt> prefix;
  for (const auto& c : j.at("quotients_prefix")) prefix.push_back(big_from(c));
  auto m = j.at("m").get<unsigned>();
  AlphaSequence s(prefix, big_from(j.at("a")), m, parse_rational(j.at("r").get<std::string>()), j.at("K").get<std::size_t>(),
                  j.at("t").get<std::size_t>());
  if (s.lcm_m() != big_from(j.at("a"))) throw std::invalid_argument("alpha record: a differs from lcm(1..m)");
  s.set_pair(big_from(j.at("x")), big_from(j.at("y")));
  return s;
}

inline Json to_json(const AlphaReport& r) {
  return Json{{"i", r.index},
              {"p", big_string(r.p)},
              {"q", big_string(r.q)},
              {"coprime", to_string(r.coprime)},
              {"smooth", to_string(r.smooth)},
              {"approximation", to_string(r.approximation)},
              {"window", to_string(r.window)}};
}

inline Json to_json(const AvoiderParams& p) {
  Json j{{"form", p.form},
         {"delta", p.delta},
         {"c", p.c},
         {"L", p.L},
         {"lambda_size", p.lambda.size()},
         {"lambda", p.lambda},
         {"q", big_string(p.alpha.q)},
         {"p", big_string(p.alpha.p)},
         {"j", p.alpha.j},
         {"i", p.alpha.i},
         {"N", p.N},
         {"theta1", p.theta1}};
  if (p.form == "fivepoint") {
    j["a"] = p.a;
    j["theta2"] = p.theta2;
    j["theta3"] = p.theta3;
  }
  return j;
}

/// Config that rebuilds the same avoider.
inline AvoiderConfig avoider_config_from_json(const Json& j) {
  AvoiderConfig cfg;
  cfg.delta = j.at("delta").get<double>();
  cfg.c = j.at("c").get<double>();
  cfg.L = j.at("L").get<std::int64_t>();
  cfg.lambda = j.at("lambda").get<std::vector<std::int64_t>>();
  cfg.target_N = j.at("N").get<std::int64_t>();
  return cfg;
}

inline Json to_json(const DensityEstimate& d) {
  Json j{{"value", d.value}, {"exact", d.is_exact}};
  if (d.is_exact)
    j["fraction"] = to_string(d.exact);
  else {
    j["std_error"] = d.std_error;
    j["samples"] = d.samples;
  }
  return j;
}

inline Json to_json(const MandacheReport& r, const std::vector<std::uint64_t>& seeds) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json per = Json::array();
  for (const auto& s : r.per_seed)
    per.push_back(Json{{"seed", s.seed}, {"min_d", opt(s.min_d)}, {"max_d", opt(s.max_d)}, {"mean", opt(s.mean)}});
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.kernel_hash));
  return Json{{"kernel_hash", hash},
              {"group", r.group},
              {"seeds", seeds},
              {"triforce_value", to_string(r.triforce)},
              {"grand_mean", opt(r.grand_mean)},
              {"std_dev", opt(r.std_dev)},
              {"std_error", opt(r.std_error)},
              {"z_score", opt(r.z_score())},
              {"per_seed", per}};
}

}  // namespace cornerforge
