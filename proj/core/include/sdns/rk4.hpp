#pragma once

#include <functional>

#include "sdns/config.hpp"
#include "sdns/fields.hpp"
#include "sdns/transport.hpp"

namespace sdns {

/// Evaluates du_hat from u_hat; must not modify u_hat.
using RhsFn = std::function<void(const SpectralField3&, SpectralField3&)>;

/// Solution plus the three preallocated stage buffers of the low-storage
/// classical RK4 scheme (base copy, weighted accumulator, stage RHS) and a
/// Neumaier carry holding the low-order bits lost by each state update, so
/// long runs do not random-walk away from the exact trajectory.
struct Rk4State {
  SpectralField3 u_hat;
  SpectralField3 base, accum, rhs, carry;
  double t = 0.0;
  std::int64_t step = 0;

  explicit Rk4State(Shape3 spec_shape)
      : u_hat(spec_shape),
        base(spec_shape),
        accum(spec_shape),
        rhs(spec_shape),
        carry(spec_shape) {}
};

/// One classical RK4 step (weights 1/6, 1/3, 1/3, 1/6; stage offsets
/// dt/2, dt/2, dt). Advances t += dt and step += 1. Throws DivergenceError
/// if the updated solution contains non-finite values.
void rk4_step(Rk4State& st, double dt, const RhsFn& rhs);

/// Same update but returns whether the updated solution is finite instead
/// of throwing, so multi-rank drivers can agree collectively first.
bool rk4_step_finite(Rk4State& st, double dt, const RhsFn& rhs);

/// Number of steps to reach t_end from 0 with step dt: ceil(t_end/dt) with
/// a tolerance so t_end = k*dt computed in floating point gives exactly k.
std::int64_t step_count(double t_end, double dt);

struct AdvanceHooks {
  /// Fired at step 0 and then every cfg.out_every steps plus the final step.
  std::function<void(std::int64_t step, double t)> sample;
  /// Fired after every step with its wall-clock duration.
  std::function<void(std::int64_t step, double seconds)> timing;
  /// Fired right after each update, inside the timed region. The solver
  /// registers a solenoidal cleanup here: re-projecting the state keeps the
  /// per-mode divergence at second-order rounding even on modes the
  /// nonlinear projection annihilates outright.
  std::function<void()> post_step;
};

/// Advances from t=0 to t_end; the final step is shortened to land exactly
/// on t_end. After each full step t is set to step*dt (no accumulation
/// drift). The non-finite check is collective: every rank throws
/// DivergenceError with the same step index.
void advance(Rk4State& st, const SolverConfig& cfg, const RhsFn& rhs,
             Communicator& comm, const AdvanceHooks& hooks = {});

}  // namespace sdns
