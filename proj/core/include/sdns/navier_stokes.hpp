#pragma once

#include "sdns/fft.hpp"
#include "sdns/fields.hpp"
#include "sdns/mesh.hpp"

namespace sdns {

/// u = ( cos x sin y sin z, -sin x cos y sin z, 0 ) on the local block.
RealField3 taylor_green_init(const RankLayout& layout, const PhysicalMesh& mesh);

/// Dispatch by case name ("taylor_green"); throws ConfigError otherwise.
RealField3 make_initial_condition(const std::string& name,
                                  const RankLayout& layout,
                                  const PhysicalMesh& mesh);

/// out = a x b, pointwise over the local block.
void cross(const RealField3& a, const RealField3& b, RealField3& out);

/// omega_hat = i k x u_hat, pointwise over the local spectral block.
void curl_hat(const SpectralField3& u_hat, const WavenumberMesh& wm,
              SpectralField3& omega_hat);

/// p_hat = -i (k . nl_hat) / |k|^2 (zero at k = 0).
void pressure_hat(const SpectralField3& nl_hat, const WavenumberMesh& wm,
                  SpectralField& p_hat);

/// Removes the component along k: u_hat -= k (k . u_hat) / |k|^2.
void project(SpectralField3& u_hat, const WavenumberMesh& wm);

/// Reusable buffers so RHS evaluation never allocates.
struct RhsWorkspace {
  RealField3 vel, vor, nl;
  SpectralField3 spec;

  explicit RhsWorkspace(const RankLayout& layout)
      : vel(layout.real.shape),
        vor(layout.real.shape),
        nl(layout.real.shape),
        spec(layout.spec.shape) {}
};

/// du_hat = P[ dealias( FFT(u x omega) ) ] - nu |k|^2 u_hat, evaluated in
/// rotational form: velocity and vorticity are brought to physical space,
/// crossed pointwise, transformed back, masked, then projected; the viscous
/// term is added modewise.
void compute_rhs(const SpectralField3& u_hat, const WavenumberMesh& wm,
                 DistributedFFT& fft, RhsWorkspace& ws, double nu,
                 SpectralField3& du_hat);

}  // namespace sdns
