#pragma once

#include <vector>

#include "sdns/fields.hpp"
#include "sdns/mesh.hpp"
#include "sdns/transport.hpp"

namespace sdns {

/// Volume-averaged integrals of one sample, identical on every rank.
struct FlowStats {
  double t = 0.0;
  double energy = 0.0;        ///< (1/2) <|u|^2>
  double enstrophy = 0.0;     ///< (1/2) <|omega|^2>
  double dissipation = 0.0;   ///< 2 nu enstrophy
  double divergence_max = 0.0;
  std::vector<double> spectrum;  ///< shell-binned energy, shell = round(|k|)
};

/// Number of shells for grid size n: round(sqrt(3) n/2) + 1.
int spectrum_shells(std::int64_t n);

double energy(const SpectralField3& u_hat, const WavenumberMesh& wm,
              Communicator& comm);
double enstrophy(const SpectralField3& u_hat, const WavenumberMesh& wm,
                 Communicator& comm);

/// max over modes of |k . u_hat| / (|k| |u_hat| + eps); zero for a
/// discretely divergence-free field up to rounding.
double divergence_norm(const SpectralField3& u_hat, const WavenumberMesh& wm,
                       Communicator& comm);

std::vector<double> spectrum(const SpectralField3& u_hat,
                             const WavenumberMesh& wm, Communicator& comm);

/// All of the above with two reductions total (one sum, one max).
FlowStats collect_stats(double t, const SpectralField3& u_hat,
                        const WavenumberMesh& wm, double nu,
                        Communicator& comm);

/// Box-mean L2 distance: sqrt( sum_c <(a_c - b_c)^2> ).
double l2_diff(const RealField3& a, const RealField3& b, std::int64_t n,
               Communicator& comm);

}  // namespace sdns
