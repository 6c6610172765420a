#pragma once

#include <array>
#include <vector>

#include "sdns/types.hpp"

namespace sdns {

template <class T>
struct Field3d {
  Shape3 shape;
  std::vector<T> data;

  Field3d() = default;
  explicit Field3d(Shape3 s)
      : shape(s), data(static_cast<std::size_t>(s.size())) {}

  T& operator()(std::int64_t i, std::int64_t j, std::int64_t k) {
    return data[static_cast<std::size_t>(flat_index(shape, i, j, k))];
  }
  const T& operator()(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return data[static_cast<std::size_t>(flat_index(shape, i, j, k))];
  }
  std::int64_t size() const { return shape.size(); }

  void fill(const T& v) { data.assign(data.size(), v); }
};

using RealField = Field3d<double>;
using SpectralField = Field3d<Complex>;

/// Three-component vector field, one Field3d per component.
template <class T>
struct VectorField3 {
  std::array<Field3d<T>, 3> c;

  VectorField3() = default;
  explicit VectorField3(Shape3 s) : c{Field3d<T>(s), Field3d<T>(s), Field3d<T>(s)} {}

  Field3d<T>& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const Field3d<T>& operator[](int i) const {
    return c[static_cast<std::size_t>(i)];
  }
  Shape3 shape() const { return c[0].shape; }
};

using RealField3 = VectorField3<double>;
using SpectralField3 = VectorField3<Complex>;

}  // namespace sdns
