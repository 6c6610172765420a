#pragma once

#include <memory>

#include "sdns/types.hpp"

namespace sdns {

enum class FftDir { Forward, Backward };

/// Node-local FFT kernels on row-major arrays, backed by FFTW3.
///
/// Transforms are unnormalized in both directions (a forward/backward round
/// trip scales by the transform length); callers own normalization. Plans
/// are cached per (kind, shape, axis, direction) and reused via FFTW's
/// new-array execute interface, so repeated calls on different buffers do
/// not re-plan. Planning is serialized internally; execution of cached
/// plans is safe to run concurrently from several SerialFFT instances.
///
/// Complex-to-real transforms destroy their input buffer (an FFTW
/// constraint); the r2c and c2c kernels leave their input untouched.
class SerialFFT {
 public:
  SerialFFT();
  ~SerialFFT();
  SerialFFT(const SerialFFT&) = delete;
  SerialFFT& operator=(const SerialFFT&) = delete;

  /// r2c along the last axis: (n0, n1, n2) real -> (n0, n1, n2/2+1) complex.
  void forward_r2c_z(const Shape3& real_shape, const double* in, Complex* out);
  /// c2r along the last axis; clobbers `in`.
  void inverse_c2r_z(const Shape3& real_shape, Complex* in, double* out);

  /// r2c over the last two axes: (n0, n1, n2) -> (n0, n1, n2/2+1).
  void forward_r2c_yz(const Shape3& real_shape, const double* in, Complex* out);
  /// c2r over the last two axes; clobbers `in`.
  void inverse_c2r_yz(const Shape3& real_shape, Complex* in, double* out);

  /// c2c along one axis of a complex array, out of place allowed.
  void c2c(const Shape3& shape, int axis, FftDir dir, const Complex* in,
           Complex* out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sdns
