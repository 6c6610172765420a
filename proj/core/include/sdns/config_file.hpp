#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sdns/config.hpp"

namespace sdns {

/// Ordered key/value overrides, applied after the file contents.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

struct ParsedConfig {
  SolverConfig cfg;
  std::vector<std::string> notices;  ///< e.g. defaulted keys worth logging
};

/// Parses line-oriented `key = value` text ('#' starts a comment).
/// Recognized keys: n, decomp, p, p1, p2, nu, re, dt, t_end, dealias,
/// case, out_every. `re` sets nu = 1/re. Unknown keys and malformed
/// values are rejected with the offending key named. The result is
/// validated before returning.
ParsedConfig parse_config_text(const std::string& text,
                               const ConfigOverrides& overrides = {});

ParsedConfig parse_config_file(const std::string& path,
                               const ConfigOverrides& overrides = {});

/// Near-square (p1, p2) factorization of p compatible with grid size n:
/// p1 | n, p2 | n, p2 <= n/2. Throws ConfigError when none exists.
std::pair<int, int> default_pencil_grid(int n, int p);

}  // namespace sdns
