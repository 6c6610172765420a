#include "sdns/serial_fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace sdns {

namespace {

// FFTW planning is not thread-safe; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

enum class Kind { R2cZ, C2rZ, R2cYz, C2rYz, C2c };

// (kind, n0, n1, n2, axis, sign, in-place?) -- FFTW plans bake in whether
// input and output alias, so aliasing is part of the cache key.
using PlanKey =
    std::tuple<Kind, std::int64_t, std::int64_t, std::int64_t, int, int, int>;

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

fftw_iodim64 dim(std::int64_t n, std::int64_t is, std::int64_t os) {
  return fftw_iodim64{n, is, os};
}

int inplace(const void* in, const void* out) { return in == out ? 1 : 0; }

}  // namespace

struct SerialFFT::Impl {
  std::map<PlanKey, fftw_plan> plans;

  ~Impl() {
    std::lock_guard lk(planner_mutex());
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  template <class Make>
  fftw_plan get(const PlanKey& key, Make&& make) {
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    std::lock_guard lk(planner_mutex());
    fftw_plan p = make();
    plans.emplace(key, p);
    return p;
  }
};

SerialFFT::SerialFFT() : impl_(std::make_unique<Impl>()) {}
SerialFFT::~SerialFFT() = default;

void SerialFFT::forward_r2c_z(const Shape3& s, const double* in, Complex* out) {
  const std::int64_t nf = s.n2 / 2 + 1;
  fftw_plan plan = impl_->get({Kind::R2cZ, s.n0, s.n1, s.n2, 2, 0, inplace(in, out)}, [&] {
    fftw_iodim64 t = dim(s.n2, 1, 1);
    fftw_iodim64 loops[2] = {dim(s.n0, s.n1 * s.n2, s.n1 * nf),
                             dim(s.n1, s.n2, nf)};
    return fftw_plan_guru64_dft_r2c(1, &t, 2, loops, const_cast<double*>(in),
                                    reinterpret_cast<fftw_complex*>(out), kFlags);
  });
  fftw_execute_dft_r2c(plan, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void SerialFFT::inverse_c2r_z(const Shape3& s, Complex* in, double* out) {
  const std::int64_t nf = s.n2 / 2 + 1;
  fftw_plan plan = impl_->get({Kind::C2rZ, s.n0, s.n1, s.n2, 2, 0, inplace(in, out)}, [&] {
    fftw_iodim64 t = dim(s.n2, 1, 1);
    fftw_iodim64 loops[2] = {dim(s.n0, s.n1 * nf, s.n1 * s.n2),
                             dim(s.n1, nf, s.n2)};
    return fftw_plan_guru64_dft_c2r(1, &t, 2, loops,
                                    reinterpret_cast<fftw_complex*>(in), out,
                                    kFlags);
  });
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
}

void SerialFFT::forward_r2c_yz(const Shape3& s, const double* in, Complex* out) {
  const std::int64_t nf = s.n2 / 2 + 1;
  fftw_plan plan = impl_->get({Kind::R2cYz, s.n0, s.n1, s.n2, 12, 0, inplace(in, out)}, [&] {
    fftw_iodim64 t[2] = {dim(s.n1, s.n2, nf), dim(s.n2, 1, 1)};
    fftw_iodim64 loops[1] = {dim(s.n0, s.n1 * s.n2, s.n1 * nf)};
    return fftw_plan_guru64_dft_r2c(2, t, 1, loops, const_cast<double*>(in),
                                    reinterpret_cast<fftw_complex*>(out), kFlags);
  });
  fftw_execute_dft_r2c(plan, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void SerialFFT::inverse_c2r_yz(const Shape3& s, Complex* in, double* out) {
  const std::int64_t nf = s.n2 / 2 + 1;
  fftw_plan plan = impl_->get({Kind::C2rYz, s.n0, s.n1, s.n2, 12, 0, inplace(in, out)}, [&] {
    fftw_iodim64 t[2] = {dim(s.n1, nf, s.n2), dim(s.n2, 1, 1)};
    fftw_iodim64 loops[1] = {dim(s.n0, s.n1 * nf, s.n1 * s.n2)};
    return fftw_plan_guru64_dft_c2r(2, t, 1, loops,
                                    reinterpret_cast<fftw_complex*>(in), out,
                                    kFlags);
  });
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in), out);
}

void SerialFFT::c2c(const Shape3& s, int axis, FftDir dir, const Complex* in,
                    Complex* out) {
  const int sign = dir == FftDir::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan = impl_->get({Kind::C2c, s.n0, s.n1, s.n2, axis, sign, inplace(in, out)}, [&] {
    const std::int64_t stride[3] = {s.n1 * s.n2, s.n2, 1};
    const std::int64_t len[3] = {s.n0, s.n1, s.n2};
    fftw_iodim64 t = dim(len[axis], stride[axis], stride[axis]);
    fftw_iodim64 loops[2];
    int nl = 0;
    for (int a = 0; a < 3; ++a)
      if (a != axis) loops[nl++] = dim(len[a], stride[a], stride[a]);
    auto* ci = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in));
    return fftw_plan_guru64_dft(1, &t, nl, loops, ci,
                                reinterpret_cast<fftw_complex*>(out), sign,
                                kFlags);
  });
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace sdns
