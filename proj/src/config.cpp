#include "gcf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gcf/error.hpp"

namespace gcf {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) bad("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) bad(where + "." + key + " must be a number");
  return v.get<double>();
}

std::size_t count_value(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

SpeedLaw parse_speed(const json& s) {
  only_keys(s, "speed", {"a", "beta", "kind"});
  const std::string kind = s.contains("kind") ? s.at("kind").get<std::string>() : "power";
  if (kind == "exponential") {
    if (s.contains("a") || s.contains("beta")) bad("speed: exponential law takes no a/beta");
    return SpeedLaw::exponential();
  }
  if (kind != "power") bad("speed.kind must be 'power' or 'exponential', got '" + kind + "'");
  if (!s.contains("a") || !s.contains("beta")) bad("speed needs both a and beta");
  return SpeedLaw::power(number(s, "a", "speed"), number(s, "beta", "speed"));
}

InitialSpec parse_initial(const json& j) {
  only_keys(j, "initial", {"type", "R0", "modes"});
  InitialSpec spec;
  const std::string type = j.contains("type") ? j.at("type").get<std::string>() : "circle";
  if (type == "circle" || type == "sphere" || type == "round") {
    spec.type = InitialShape::Round;
  } else if (type == "fourier") {
    spec.type = InitialShape::Fourier;
  } else if (type == "self_similar") {
    spec.type = InitialShape::SelfSimilar;
  } else {
    bad("initial.type must be circle, sphere, fourier or self_similar, got '" + type + "'");
  }
  if (j.contains("R0")) spec.R0 = number(j, "R0", "initial");
  if (j.contains("modes")) {
    const auto& modes = j.at("modes");
    if (!modes.is_array()) bad("initial.modes must be an array");
    for (const auto& m : modes) {
      if (!m.is_array() || m.size() < 2 || m.size() > 3) bad("each mode must be [k, amplitude] or [k, amplitude, phase]");
      if (!m[0].is_number_integer()) bad("mode k must be an integer");
      for (std::size_t i = 1; i < m.size(); ++i) {
        if (!m[i].is_number()) bad("mode amplitude and phase must be numbers");
      }
      FourierMode fm;
      fm.k = m[0].get<int>();
      fm.amplitude = m[1].get<double>();
      if (m.size() == 3) fm.phase = m[2].get<double>();
      spec.modes.push_back(fm);
    }
  }
  return spec;
}

}  // namespace

FlowConfig parse_config(const json& doc) {
  try {
    only_keys(doc, "config", {"n", "speed", "grid", "initial", "time", "output"});
    FlowConfig cfg;
    if (!doc.contains("n") || !doc.at("n").is_number_integer()) bad("config.n must be an integer");
    cfg.n = doc.at("n").get<int>();
    if (!doc.contains("speed")) bad("config needs a speed section");
    cfg.law = parse_speed(doc.at("speed"));
    if (doc.contains("grid")) {
      only_keys(doc.at("grid"), "grid", {"N"});
      if (doc.at("grid").contains("N")) cfg.grid_size = count_value(doc.at("grid"), "N", "grid");
    }
    if (doc.contains("initial")) cfg.initial = parse_initial(doc.at("initial"));
    if (doc.contains("time")) {
      const auto& t = doc.at("time");
      only_keys(t, "time", {"t_end", "t0", "safety"});
      if (t.contains("t_end")) cfg.t_end = number(t, "t_end", "time");
      if (t.contains("t0")) cfg.t0 = number(t, "t0", "time");
      if (t.contains("safety")) cfg.safety = number(t, "safety", "time");
    }
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      only_keys(o, "output", {"stride", "interval"});
      if (o.contains("stride")) cfg.stride = count_value(o, "stride", "output");
      if (o.contains("interval")) cfg.output_interval = number(o, "interval", "output");
    }
    return cfg;
  } catch (const json::exception& e) {
    bad(std::string("malformed config: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

json law_mapping(const SpeedLaw& law) {
  json j;
  if (law.kind() == SpeedKind::Exponential) {
    j["kind"] = "exponential";
    j["b"] = nullptr;
    return j;
  }
  j["kind"] = "power";
  j["a"] = law.a();
  j["beta"] = law.beta();
  if (law.is_expanding_form()) {
    j["b"] = law.expanding_exponent();
    j["form"] = "dF/dt = K^{-b} nu with a = -1, beta = -b";
  } else {
    j["b"] = nullptr;
    j["form"] = "dF/dt = -a K^beta nu";
  }
  return j;
}

json config_to_json(const FlowConfig& c) {
  json j;
  j["n"] = c.n;
  if (c.law.kind() == SpeedKind::Exponential) {
    j["speed"] = {{"kind", "exponential"}};
  } else {
    j["speed"] = {{"a", c.law.a()}, {"beta", c.law.beta()}};
  }
  j["grid"] = {{"N", c.grid_size}};
  const char* type = "circle";
  if (c.initial.type == InitialShape::Fourier) type = "fourier";
  if (c.initial.type == InitialShape::SelfSimilar) type = "self_similar";
  if (c.initial.type == InitialShape::Round && c.n == 2) type = "sphere";
  json modes = json::array();
  for (const auto& m : c.initial.modes) modes.push_back({m.k, m.amplitude, m.phase});
  j["initial"] = {{"type", type}, {"R0", c.initial.R0}, {"modes", modes}};
  j["time"] = {{"t_end", c.t_end}, {"t0", c.t0}, {"safety", c.safety}};
  j["output"] = {{"stride", c.stride}, {"interval", c.output_interval}};
  return j;
}

}  // namespace gcf
