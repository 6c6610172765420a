#include "sdns/config_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sdns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v))
      throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "yes" || value == "1")
    return true;
  if (value == "false" || value == "off" || value == "no" || value == "0")
    return false;
  throw ConfigError("key '" + key + "': expected boolean, got '" + value + "'");
}

}  // namespace

std::pair<int, int> default_pencil_grid(int n, int p) {
  // Prefer the most square split; ties resolve to p1 <= p2.
  for (int p1 = static_cast<int>(std::sqrt(static_cast<double>(p))); p1 >= 1;
       --p1) {
    if (p % p1 != 0) continue;
    const int p2 = p / p1;
    if (n % p1 == 0 && n % p2 == 0 && p2 <= n / 2) return {p1, p2};
  }
  throw ConfigError("no valid pencil grid for n=" + std::to_string(n) +
                    ", p=" + std::to_string(p));
}

ParsedConfig parse_config_text(const std::string& text,
                               const ConfigOverrides& overrides) {
  ParsedConfig out;
  SolverConfig& cfg = out.cfg;
  bool saw_t_end = false;
  bool saw_pencil_grid = false;

  auto apply = [&](const std::string& key, const std::string& value) {
    if (key == "n") {
      cfg.n = parse_int(key, value);
    } else if (key == "decomp") {
      cfg.decomp = decomp_from_string(value);
    } else if (key == "p") {
      cfg.p = parse_int(key, value);
    } else if (key == "p1") {
      cfg.p1 = parse_int(key, value);
      saw_pencil_grid = true;
    } else if (key == "p2") {
      cfg.p2 = parse_int(key, value);
      saw_pencil_grid = true;
    } else if (key == "nu") {
      cfg.nu = parse_double(key, value);
    } else if (key == "re") {
      const double re = parse_double(key, value);
      if (re <= 0.0) throw ConfigError("key 're': must be > 0");
      cfg.nu = viscosity_from_reynolds(re);
    } else if (key == "dt") {
      cfg.dt = parse_double(key, value);
    } else if (key == "t_end") {
      cfg.t_end = parse_double(key, value);
      saw_t_end = true;
    } else if (key == "dealias") {
      cfg.dealias = parse_bool(key, value);
    } else if (key == "case") {
      cfg.initial_case = value;
    } else if (key == "out_every") {
      cfg.out_every = parse_int(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  };

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  for (const auto& [key, value] : overrides) apply(key, value);

  if (!saw_t_end)
    out.notices.push_back("t_end not specified; defaulting to " +
                          std::to_string(cfg.t_end));
  if (cfg.decomp == Decomp::Pencil && !saw_pencil_grid && cfg.p > 1) {
    const auto [p1, p2] = default_pencil_grid(cfg.n, cfg.p);
    cfg.p1 = p1;
    cfg.p2 = p2;
    out.notices.push_back("pencil grid not specified; using p1=" +
                          std::to_string(p1) + " p2=" + std::to_string(p2));
  }

  cfg.validate();
  return out;
}

ParsedConfig parse_config_file(const std::string& path,
                               const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

}  // namespace sdns
