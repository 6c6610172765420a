#include <cmath>
#include <vector>

#include "doctest.h"
#include "sdns/serial_fft.hpp"
#include "test_support.hpp"

using namespace sdns;
using sdns::test::naive_dft_line;
using sdns::test::random_complexes;
using sdns::test::random_reals;

namespace {

/// Naive r2c along the last axis only, one line at a time.
std::vector<Complex> naive_r2c_z(const std::vector<double>& in, Shape3 s) {
  const std::int64_t nf = s.n2 / 2 + 1;
  std::vector<Complex> out(static_cast<std::size_t>(s.n0 * s.n1 * nf));
  std::vector<Complex> line(static_cast<std::size_t>(s.n2));
  for (std::int64_t l = 0; l < s.n0 * s.n1; ++l) {
    for (std::int64_t k = 0; k < s.n2; ++k)
      line[static_cast<std::size_t>(k)] =
          in[static_cast<std::size_t>(l * s.n2 + k)];
    const auto f = naive_dft_line(line);
    for (std::int64_t k = 0; k < nf; ++k)
      out[static_cast<std::size_t>(l * nf + k)] = f[static_cast<std::size_t>(k)];
  }
  return out;
}

/// Naive c2c along `axis` of a row-major complex array.
std::vector<Complex> naive_c2c(const std::vector<Complex>& in, Shape3 s,
                               int axis, FftDir dir) {
  std::vector<Complex> out = in;
  const std::int64_t dims[3] = {s.n0, s.n1, s.n2};
  const std::int64_t strides[3] = {s.n1 * s.n2, s.n2, 1};
  const std::int64_t len = dims[axis];
  const std::int64_t stride = strides[axis];
  std::vector<Complex> line(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < s.n0; ++i)
    for (std::int64_t j = 0; j < s.n1; ++j)
      for (std::int64_t k = 0; k < s.n2; ++k) {
        const std::int64_t idx[3] = {i, j, k};
        if (idx[axis] != 0) continue;
        const std::int64_t base = i * strides[0] + j * strides[1] + k;
        for (std::int64_t m = 0; m < len; ++m)
          line[static_cast<std::size_t>(m)] =
              in[static_cast<std::size_t>(base + m * stride)];
        std::vector<Complex> f;
        if (dir == FftDir::Forward) {
          f = naive_dft_line(line);
        } else {
          // Backward via the conjugate trick: conj(DFT(conj(x))).
          std::vector<Complex> cline(line.size());
          for (std::size_t q = 0; q < line.size(); ++q)
            cline[q] = std::conj(line[q]);
          f = naive_dft_line(cline);
          for (Complex& v : f) v = std::conj(v);
        }
        for (std::int64_t m = 0; m < len; ++m)
          out[static_cast<std::size_t>(base + m * stride)] =
              f[static_cast<std::size_t>(m)];
      }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("serial_fft");

TEST_CASE("r2c along z matches the naive DFT") {
  SerialFFT fft;
  for (Shape3 s : {Shape3{2, 3, 8}, Shape3{4, 4, 4}, Shape3{1, 1, 16}}) {
    const auto in = random_reals(static_cast<std::size_t>(s.size()),
                                 77u + static_cast<unsigned>(s.n2));
    std::vector<Complex> out(
        static_cast<std::size_t>(s.n0 * s.n1 * (s.n2 / 2 + 1)));
    fft.forward_r2c_z(s, in.data(), out.data());
    const auto ref = naive_r2c_z(in, s);
    CHECK(test::max_abs_diff(out, ref) <= 1e-12);
  }
}

TEST_CASE("r2c z round trip scales by n2") {
  SerialFFT fft;
  const Shape3 s{3, 2, 8};
  const auto in = random_reals(static_cast<std::size_t>(s.size()), 5u);
  std::vector<Complex> mid(static_cast<std::size_t>(s.n0 * s.n1 * (s.n2 / 2 + 1)));
  fft.forward_r2c_z(s, in.data(), mid.data());
  std::vector<double> back(in.size());
  fft.inverse_c2r_z(s, mid.data(), back.data());  // clobbers mid
  double err = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i)
    err = std::max(err, std::abs(back[i] / static_cast<double>(s.n2) - in[i]));
  CHECK(err <= 1e-13);
}

TEST_CASE("r2c over (y,z) equals two naive passes") {
  SerialFFT fft;
  const Shape3 s{2, 4, 6};
  const std::int64_t nf = s.n2 / 2 + 1;
  const auto in = random_reals(static_cast<std::size_t>(s.size()), 11u);
  std::vector<Complex> out(static_cast<std::size_t>(s.n0 * s.n1 * nf));
  fft.forward_r2c_yz(s, in.data(), out.data());

  auto ref = naive_r2c_z(in, s);
  ref = naive_c2c(ref, Shape3{s.n0, s.n1, nf}, 1, FftDir::Forward);
  CHECK(test::max_abs_diff(out, ref) <= 1e-12);

  // Round trip: inverse is unnormalized too, so scale by n1*n2.
  std::vector<double> back(in.size());
  std::vector<Complex> tmp = out;
  fft.inverse_c2r_yz(s, tmp.data(), back.data());
  double err = 0.0;
  const double scale = static_cast<double>(s.n1 * s.n2);
  for (std::size_t i = 0; i < in.size(); ++i)
    err = std::max(err, std::abs(back[i] / scale - in[i]));
  CHECK(err <= 1e-13);
}

TEST_CASE("c2c along each axis matches the naive DFT") {
  SerialFFT fft;
  const Shape3 s{4, 6, 5};
  const auto in = random_complexes(static_cast<std::size_t>(s.size()), 23u);
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<Complex> out(in.size());
    fft.c2c(s, axis, FftDir::Forward, in.data(), out.data());
    CHECK(test::max_abs_diff(out, naive_c2c(in, s, axis, FftDir::Forward)) <=
          1e-12);

    std::vector<Complex> back(in.size());
    fft.c2c(s, axis, FftDir::Backward, out.data(), back.data());
    const std::int64_t dims[3] = {s.n0, s.n1, s.n2};
    double err = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i)
      err = std::max(err,
                     std::abs(back[i] / static_cast<double>(dims[axis]) - in[i]));
    CHECK(err <= 1e-13);
  }
}

TEST_CASE("c2c supports in-place execution") {
  SerialFFT fft;
  const Shape3 s{4, 3, 4};
  const auto in = random_complexes(static_cast<std::size_t>(s.size()), 31u);
  std::vector<Complex> ref(in.size());
  fft.c2c(s, 0, FftDir::Forward, in.data(), ref.data());
  std::vector<Complex> buf = in;
  fft.c2c(s, 0, FftDir::Forward, buf.data(), buf.data());
  // In-place uses its own plan; results may differ from out-of-place in
  // the last ulp but no more.
  CHECK(test::max_abs_diff(buf, ref) <= 1e-13);
}

TEST_CASE("plans are reused across calls with different buffers") {
  SerialFFT fft;
  const Shape3 s{2, 2, 8};
  const auto a = random_reals(static_cast<std::size_t>(s.size()), 1u);
  const auto b = random_reals(static_cast<std::size_t>(s.size()), 2u);
  std::vector<Complex> fa(static_cast<std::size_t>(s.n0 * s.n1 * (s.n2 / 2 + 1)));
  std::vector<Complex> fb(fa.size());
  fft.forward_r2c_z(s, a.data(), fa.data());
  fft.forward_r2c_z(s, b.data(), fb.data());  // same plan, new arrays
  CHECK(test::max_abs_diff(fa, naive_r2c_z(a, s)) <= 1e-12);
  CHECK(test::max_abs_diff(fb, naive_r2c_z(b, s)) <= 1e-12);
}

TEST_SUITE_END();
