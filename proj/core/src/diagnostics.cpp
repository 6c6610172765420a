#include "sdns/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace sdns {

namespace {

/// Hermitian weight of a stored kz plane: interior planes stand for their
/// unstored conjugates as well.
double hermitian_weight(double kz, std::int64_t n) {
  return (kz == 0.0 || kz == static_cast<double>(n / 2)) ? 1.0 : 2.0;
}

double sixth_power(std::int64_t n) {
  const double n3 = static_cast<double>(n) * static_cast<double>(n) *
                    static_cast<double>(n);
  return n3 * n3;
}

/// Accumulates, per local mode, weighted |u|^2 and |k x u|^2 into sums[0..1]
/// and shell energies into sums[2..]; returns the local divergence ratio max.
double accumulate_local(const SpectralField3& u_hat, const WavenumberMesh& wm,
                        std::vector<double>& sums) {
  const Shape3 s = wm.shape;
  const std::int64_t n = wm.n;
  const double eps = std::numeric_limits<double>::epsilon();
  double div_max = 0.0;
  std::size_t m = 0;
  for (std::int64_t i = 0; i < s.n0; ++i) {
    const double kx = wm.kx[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < s.n1; ++j) {
      const double ky = wm.ky[static_cast<std::size_t>(j)];
      for (std::int64_t k = 0; k < s.n2; ++k, ++m) {
        const double kz = wm.kz[static_cast<std::size_t>(k)];
        const double w = hermitian_weight(kz, n);
        const Complex u0 = u_hat[0].data[m];
        const Complex u1 = u_hat[1].data[m];
        const Complex u2 = u_hat[2].data[m];
        const double e = std::norm(u0) + std::norm(u1) + std::norm(u2);

        const Complex c0 = ky * u2 - kz * u1;
        const Complex c1 = kz * u0 - kx * u2;
        const Complex c2 = kx * u1 - ky * u0;
        const double z = std::norm(c0) + std::norm(c1) + std::norm(c2);

        sums[0] += w * e;
        sums[1] += w * z;
        const auto shell =
            static_cast<std::size_t>(std::llround(std::sqrt(wm.k2[m])));
        sums[2 + shell] += 0.5 * w * e;

        const Complex kd = kx * u0 + ky * u1 + kz * u2;
        const double knorm = std::sqrt(wm.k2[m]);
        const double ratio = std::abs(kd) / (knorm * std::sqrt(e) + eps);
        div_max = std::max(div_max, ratio);
      }
    }
  }
  return div_max;
}

}  // namespace

int spectrum_shells(std::int64_t n) {
  const double half = static_cast<double>(n / 2);
  return static_cast<int>(std::llround(std::sqrt(3.0 * half * half))) + 1;
}

FlowStats collect_stats(double t, const SpectralField3& u_hat,
                        const WavenumberMesh& wm, double nu,
                        Communicator& comm) {
  const int shells = spectrum_shells(wm.n);
  std::vector<double> sums(static_cast<std::size_t>(2 + shells), 0.0);
  double div_max = accumulate_local(u_hat, wm, sums);

  comm.allreduce(sums, ReduceOp::Sum);
  div_max = comm.allreduce_max(div_max);

  const double n6 = sixth_power(wm.n);
  FlowStats st;
  st.t = t;
  st.energy = 0.5 * sums[0] / n6;
  st.enstrophy = 0.5 * sums[1] / n6;
  st.dissipation = 2.0 * nu * st.enstrophy;
  st.divergence_max = div_max;
  st.spectrum.assign(sums.begin() + 2, sums.end());
  for (double& v : st.spectrum) v /= n6;
  return st;
}

double energy(const SpectralField3& u_hat, const WavenumberMesh& wm,
              Communicator& comm) {
  return collect_stats(0.0, u_hat, wm, 0.0, comm).energy;
}

double enstrophy(const SpectralField3& u_hat, const WavenumberMesh& wm,
                 Communicator& comm) {
  return collect_stats(0.0, u_hat, wm, 0.0, comm).enstrophy;
}

double divergence_norm(const SpectralField3& u_hat, const WavenumberMesh& wm,
                       Communicator& comm) {
  return collect_stats(0.0, u_hat, wm, 0.0, comm).divergence_max;
}

std::vector<double> spectrum(const SpectralField3& u_hat,
                             const WavenumberMesh& wm, Communicator& comm) {
  return collect_stats(0.0, u_hat, wm, 0.0, comm).spectrum;
}

double l2_diff(const RealField3& a, const RealField3& b, std::int64_t n,
               Communicator& comm) {
  double local = 0.0;
  for (int c = 0; c < 3; ++c) {
    const std::size_t total = a[c].data.size();
    for (std::size_t m = 0; m < total; ++m) {
      const double d = a[c].data[m] - b[c].data[m];
      local += d * d;
    }
  }
  const double global = comm.allreduce_sum(local);
  const double n3 = static_cast<double>(n) * static_cast<double>(n) *
                    static_cast<double>(n);
  return std::sqrt(global / n3);
}

}  // namespace sdns
