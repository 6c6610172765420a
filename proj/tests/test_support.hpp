#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sdns/fields.hpp"
#include "sdns/types.hpp"

namespace sdns::test {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> random_reals(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> out(count);
  for (double& v : out) v = dist(rng);
  return out;
}

inline std::vector<Complex> random_complexes(std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Complex> out(count);
  for (Complex& v : out) v = Complex(dist(rng), dist(rng));
  return out;
}

/// Unnormalized forward DFT of one line: X[k] = sum_j x[j] e^{-2 pi i j k / n}.
/// O(n^2) on purpose; the oracle must not share code with the implementation.
inline std::vector<Complex> naive_dft_line(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * kPi * static_cast<double>(j * k) /
                           static_cast<double>(n);
      out[k] += x[j] * Complex(std::cos(angle), std::sin(angle));
    }
  return out;
}

/// Full unnormalized 3-d r2c reference: (n0, n1, n2) real -> (n0, n1,
/// n2/2+1) complex, transforming z, then y, then x with the naive DFT.
inline std::vector<Complex> naive_rfft3(const std::vector<double>& in,
                                        std::int64_t n0, std::int64_t n1,
                                        std::int64_t n2) {
  const std::int64_t nf = n2 / 2 + 1;
  std::vector<Complex> full(static_cast<std::size_t>(n0 * n1 * n2));
  for (std::size_t m = 0; m < full.size(); ++m) full[m] = in[m];

  auto transform_axis = [&](std::int64_t len, std::int64_t stride,
                            std::int64_t lines, auto line_base) {
    std::vector<Complex> buf(static_cast<std::size_t>(len));
    for (std::int64_t line = 0; line < lines; ++line) {
      const std::int64_t base = line_base(line);
      for (std::int64_t j = 0; j < len; ++j)
        buf[static_cast<std::size_t>(j)] =
            full[static_cast<std::size_t>(base + j * stride)];
      const std::vector<Complex> out = naive_dft_line(buf);
      for (std::int64_t j = 0; j < len; ++j)
        full[static_cast<std::size_t>(base + j * stride)] =
            out[static_cast<std::size_t>(j)];
    }
  };

  // z (stride 1), then y (stride n2), then x (stride n1*n2).
  transform_axis(n2, 1, n0 * n1, [&](std::int64_t l) { return l * n2; });
  transform_axis(n1, n2, n0 * n2, [&](std::int64_t l) {
    return (l / n2) * n1 * n2 + l % n2;
  });
  transform_axis(n0, n1 * n2, n1 * n2, [&](std::int64_t l) { return l; });

  std::vector<Complex> half(static_cast<std::size_t>(n0 * n1 * nf));
  for (std::int64_t i = 0; i < n0; ++i)
    for (std::int64_t j = 0; j < n1; ++j)
      for (std::int64_t k = 0; k < nf; ++k)
        half[static_cast<std::size_t>((i * n1 + j) * nf + k)] =
            full[static_cast<std::size_t>((i * n1 + j) * n2 + k)];
  return half;
}

inline double max_abs_diff(const std::vector<Complex>& a,
                           const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace sdns::test
