#pragma once

// Flat key = value configuration with [section] headers, '#' comments.
// Serialization round-trips exactly (17 significant digits for doubles).

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hillfila/diagnostics.hpp"
#include "hillfila/scenarios.hpp"

namespace hillfila {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// section.key -> value
using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    m[section.empty() ? key : section + "." + key] = val;
  }
  return m;
}

struct FullConfig {
  ScenarioConfig scenario;
  DiagnosticsConfig diagnostics;
};

inline std::string serialize_config(const FullConfig& c) {
  using detail::fmt_double;
  std::ostringstream o;
  const auto& s = c.scenario;
  o << "[scenario]\n";
  o << "kind = " << to_string(s.scenario) << "\n";
  o << "a = " << fmt_double(s.a) << "\n";
  o << "b = " << fmt_double(s.b) << "\n";
  o << "match_volume = " << (s.match_volume ? "true" : "false") << "\n";
  o << "delta_prime = " << fmt_double(s.delta_prime) << "\n";
  o << "m_peak = " << fmt_double(s.m_peak) << "\n";
  o << "r0 = " << fmt_double(s.r0) << "\n";
  o << "sigma = " << fmt_double(s.sigma) << "\n";
  o << "seed_tail = " << (s.seed_tail ? "true" : "false") << "\n";
  o << "\n[numerics]\n";
  o << "dt = " << fmt_double(s.dt) << "\n";
  o << "t_end = " << fmt_double(s.t_end) << "\n";
  o << "h_min = " << fmt_double(s.h_min) << "\n";
  o << "h_max = " << fmt_double(s.h_max) << "\n";
  o << "curvature_budget = " << fmt_double(s.curvature_budget) << "\n";
  o << "h_quad = " << fmt_double(s.h_quad) << "\n";
  o << "blob_spacing = " << fmt_double(s.blob_spacing) << "\n";
  o << "r_axis_snap = " << fmt_double(s.r_axis_snap) << "\n";
  o << "frozen_stage_masks = " << (s.frozen_stage_masks ? "true" : "false") << "\n";
  o << "\n[output]\n";
  o << "out_dir = " << s.out_dir << "\n";
  o << "snapshot_every = " << s.snapshot_every << "\n";
  o << "observe_every = " << s.observe_every << "\n";
  const auto& d = c.diagnostics;
  o << "\n[diagnostics]\n";
  o << "h_tau = " << fmt_double(d.h_tau) << "\n";
  o << "bracket = " << fmt_double(d.bracket) << "\n";
  o << "jump_guard = " << fmt_double(d.jump_guard) << "\n";
  o << "h_energy = " << fmt_double(d.h_energy) << "\n";
  o << "h_ins = " << fmt_double(d.h_ins) << "\n";
  o << "h_probe = " << fmt_double(d.h_probe) << "\n";
  o << "fs_enabled = " << (d.fs_enabled ? "true" : "false") << "\n";
  o << "fs_c0 = " << fmt_double(d.fs_c0) << "\n";
  return o.str();
}

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

inline double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
  return d;
}

inline int parse_int(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  int d = 0;
  try {
    d = std::stoi(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  return d;
}

}  // namespace detail

inline FullConfig config_from_map(const ConfigMap& m, FullConfig base = {}) {
  FullConfig c = base;
  auto& s = c.scenario;
  auto& d = c.diagnostics;
  for (const auto& [key, val] : m) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    if (key == "scenario.kind") s.scenario = scenario_from_string(val);
    else if (key == "scenario.a") s.a = parse_double(val, key);
    else if (key == "scenario.b") s.b = parse_double(val, key);
    else if (key == "scenario.match_volume") s.match_volume = parse_bool(val, key);
    else if (key == "scenario.delta_prime") s.delta_prime = parse_double(val, key);
    else if (key == "scenario.m_peak") s.m_peak = parse_double(val, key);
    else if (key == "scenario.r0") s.r0 = parse_double(val, key);
    else if (key == "scenario.sigma") s.sigma = parse_double(val, key);
    else if (key == "scenario.seed_tail") s.seed_tail = parse_bool(val, key);
    else if (key == "numerics.dt") s.dt = parse_double(val, key);
    else if (key == "numerics.t_end") s.t_end = parse_double(val, key);
    else if (key == "numerics.h_min") s.h_min = parse_double(val, key);
    else if (key == "numerics.h_max") s.h_max = parse_double(val, key);
    else if (key == "numerics.curvature_budget") s.curvature_budget = parse_double(val, key);
    else if (key == "numerics.h_quad") s.h_quad = parse_double(val, key);
    else if (key == "numerics.blob_spacing") s.blob_spacing = parse_double(val, key);
    else if (key == "numerics.r_axis_snap") s.r_axis_snap = parse_double(val, key);
    else if (key == "numerics.frozen_stage_masks") s.frozen_stage_masks = parse_bool(val, key);
    else if (key == "output.out_dir") s.out_dir = val;
    else if (key == "output.snapshot_every") s.snapshot_every = parse_int(val, key);
    else if (key == "output.observe_every") s.observe_every = parse_int(val, key);
    else if (key == "diagnostics.h_tau") d.h_tau = parse_double(val, key);
    else if (key == "diagnostics.bracket") d.bracket = parse_double(val, key);
    else if (key == "diagnostics.jump_guard") d.jump_guard = parse_double(val, key);
    else if (key == "diagnostics.h_energy") d.h_energy = parse_double(val, key);
    else if (key == "diagnostics.h_ins") d.h_ins = parse_double(val, key);
    else if (key == "diagnostics.h_probe") d.h_probe = parse_double(val, key);
    else if (key == "diagnostics.fs_enabled") d.fs_enabled = parse_bool(val, key);
    else if (key == "diagnostics.fs_c0") d.fs_c0 = parse_double(val, key);
    else throw std::invalid_argument("config: unknown key " + key);
  }
  d.h_quad = s.h_quad;  // diagnostics evaluate fields at the run's quadrature
  return c;
}

inline FullConfig parse_config(const std::string& text, FullConfig base = {}) {
  return config_from_map(parse_config_text(text), std::move(base));
}

}  // namespace hillfila
