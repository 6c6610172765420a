#include "sdns/config.hpp"

#include <string>

namespace sdns {

std::string to_string(Decomp d) {
  return d == Decomp::Slab ? "slab" : "pencil";
}

Decomp decomp_from_string(const std::string& s) {
  if (s == "slab") return Decomp::Slab;
  if (s == "pencil") return Decomp::Pencil;
  throw ConfigError("unknown decomposition '" + s + "' (expected slab|pencil)");
}

void SolverConfig::validate() const {
  if (n < 4) throw ConfigError("n must be >= 4, got " + std::to_string(n));
  if (n % 2 != 0) throw ConfigError("n must be even, got " + std::to_string(n));
  if (p < 1) throw ConfigError("p must be >= 1, got " + std::to_string(p));
  if (decomp == Decomp::Slab) {
    if (p > n)
      throw ConfigError("slab requires p <= n, got p=" + std::to_string(p) +
                        " n=" + std::to_string(n));
    if (n % p != 0)
      throw ConfigError("slab requires p to divide n, got p=" +
                        std::to_string(p) + " n=" + std::to_string(n));
  } else {
    if (p1 < 1 || p2 < 1)
      throw ConfigError("pencil requires p1 >= 1 and p2 >= 1");
    if (p != p1 * p2)
      throw ConfigError("pencil requires p = p1*p2, got p=" + std::to_string(p) +
                        " p1=" + std::to_string(p1) + " p2=" + std::to_string(p2));
    if (n % p1 != 0)
      throw ConfigError("pencil requires p1 to divide n, got p1=" +
                        std::to_string(p1) + " n=" + std::to_string(n));
    if (n % p2 != 0)
      throw ConfigError("pencil requires p2 to divide n, got p2=" +
                        std::to_string(p2) + " n=" + std::to_string(n));
    // Every rank must own at least one kz plane of the n/2+1 half-axis.
    if (p2 > n / 2)
      throw ConfigError("pencil requires p2 <= n/2, got p2=" +
                        std::to_string(p2) + " n=" + std::to_string(n));
  }
  if (nu < 0.0) throw ConfigError("nu must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (t_end < 0.0) throw ConfigError("t_end must be >= 0");
  if (out_every < 1) throw ConfigError("out_every must be >= 1");
  if (initial_case.empty()) throw ConfigError("initial_case must be non-empty");
}

}  // namespace sdns
