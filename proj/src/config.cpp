#include "gradfuse/config.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace gf {

Scale parse_scale(const std::string& value) {
  if (value == "log") return Scale::Log;
  if (value == "linear") return Scale::Linear;
  throw ConfigError("fusion_domain must be 'log' or 'linear', got '" + value + "'");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v) {
  std::size_t used = 0;
  double out = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return out;
}

int parse_int(const std::string& v) {
  std::size_t used = 0;
  int out = std::stoi(v, &used);
  if (used != v.size()) throw std::invalid_argument(v);
  return out;
}

}  // namespace

void load_config_file(const std::string& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");

  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"omega", [&](const std::string& v) { config.omega = parse_double(v); }},
      {"lambda", [&](const std::string& v) { config.lambda = parse_double(v); }},
      {"epsilon", [&](const std::string& v) { config.epsilon = parse_double(v); }},
      {"fusion_domain", [&](const std::string& v) { config.fusion_domain = parse_scale(v); }},
      {"irls.max_outer_iters",
       [&](const std::string& v) { config.irls.max_outer_iters = parse_int(v); }},
      {"irls.outer_tol", [&](const std::string& v) { config.irls.outer_tol = parse_double(v); }},
      {"irls.cg_tol", [&](const std::string& v) { config.irls.cg_tol = parse_double(v); }},
      {"irls.cg_max_iters",
       [&](const std::string& v) { config.irls.cg_max_iters = parse_int(v); }},
      {"bilateral.window",
       [&](const std::string& v) { config.bilateral.window = parse_int(v); }},
      {"bilateral.spatial_sigma",
       [&](const std::string& v) { config.bilateral.spatial_sigma = parse_double(v); }},
      {"bilateral.range_sigma",
       [&](const std::string& v) { config.bilateral.range_sigma = parse_double(v); }},
      {"intrinsics.fx", [&](const std::string& v) { config.intrinsics.fx = parse_double(v); }},
      {"intrinsics.fy", [&](const std::string& v) { config.intrinsics.fy = parse_double(v); }},
      {"intrinsics.cx", [&](const std::string& v) { config.intrinsics.cx = parse_double(v); }},
      {"intrinsics.cy", [&](const std::string& v) { config.intrinsics.cy = parse_double(v); }},
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value, got '" +
                        line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": invalid value '" + value +
                        "' for key '" + key + "'");
    }
  }
}

}  // namespace gf
