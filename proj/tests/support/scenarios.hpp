#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "deon/dsl.hpp"

namespace deon::testing {

inline const std::vector<std::string>& golden_names() {
  static const std::vector<std::string> names{"theft", "ambulance", "merge", "bus", "pedestrian"};
  return names;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string scenario_path(const std::string& name) { return std::string(DEON_SCENARIO_DIR) + "/" + name + ".deon"; }

inline std::string scenario_text(const std::string& name) { return read_file(scenario_path(name)); }

inline Scenario load(const std::string& name) {
  ParseOptions options;
  options.file = name + ".deon";
  auto r = parse_scenario(scenario_text(name), options);
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += d.str() + "\n";
    throw std::runtime_error(msg);
  }
  return *r.scenario;
}

inline Scenario parse_or_die(const std::string& text) {
  auto r = parse_scenario(text);
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += d.str() + "\n";
    throw std::runtime_error(msg);
  }
  return *r.scenario;
}

}  // namespace deon::testing
