#pragma once

#include <string>

#include "sdns/types.hpp"

namespace sdns {

enum class Decomp { Slab, Pencil };

std::string to_string(Decomp d);
Decomp decomp_from_string(const std::string& s);

/// Full description of one solver run on the 2*pi periodic box.
struct SolverConfig {
  int n = 32;                 ///< grid points per axis (even, >= 4)
  Decomp decomp = Decomp::Slab;
  int p = 1;                  ///< total ranks
  int p1 = 1;                 ///< pencil rank-grid rows (splits x/y)
  int p2 = 1;                 ///< pencil rank-grid cols (splits y/z)
  double nu = 1.0 / 1600.0;   ///< kinematic viscosity
  double dt = 1e-3;
  double t_end = 0.1;
  bool dealias = true;        ///< strict 2/3-rule truncation
  std::string initial_case = "taylor_green";
  int out_every = 10;         ///< diagnostics cadence in steps

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

inline double viscosity_from_reynolds(double re) { return 1.0 / re; }

}  // namespace sdns
