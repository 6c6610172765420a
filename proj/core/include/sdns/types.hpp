#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sdns {

using Complex = std::complex<double>;

/// Extents of a row-major 3-d array (axis order x, y, z; z fastest).
struct Shape3 {
  std::int64_t n0 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  std::int64_t size() const { return n0 * n1 * n2; }
  bool operator==(const Shape3&) const = default;
};

inline std::int64_t flat_index(const Shape3& s, std::int64_t i, std::int64_t j,
                               std::int64_t k) {
  return (i * s.n1 + j) * s.n2 + k;
}

/// Invalid or inconsistent solver configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collective call sequences that violate the transport contract
/// (mismatched operations, inconsistent block tables, poisoned groups).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rank waited longer than the configured timeout inside a collective.
class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values appeared in the solution update.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_ = 0;
};

/// File format or filesystem failures (checkpoints, CSV, manifests).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Library version string baked in at configure time.
const std::string& version();

}  // namespace sdns
