// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "holoshot/error.hpp"

namespace holoshot {

/// Largest spatial dimension supported by the fixed-capacity coordinate types.
inline constexpr std::size_t kMaxDim = 3;

/// Fixed-capacity coordinate tuple. Points and lattice indices are tiny and
/// created in hot loops, so they live on the stack.
template <typename T>
class Coords {
 public:
  using value_type = T;

  Coords() = default;

  explicit Coords(std::size_t dim, T fill = T{}) : dim_(dim) {
    check_dim(dim);
    std::fill_n(data_.begin(), dim, fill);
  }

  Coords(std::initializer_list<T> values) : dim_(values.size()) {
    check_dim(dim_);
    std::copy(values.begin(), values.end(), data_.begin());
  }

  template <typename Range>
  static Coords from_range(const Range& values) {
    Coords out;
    out.dim_ = std::size(values);
    check_dim(out.dim_);
    std::size_t i = 0;
    for (const auto& v : values) out.data_[i++] = static_cast<T>(v);
    return out;
  }

  std::size_t size() const noexcept { return dim_; }
  bool empty() const noexcept { return dim_ == 0; }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  T* begin() noexcept { return data_.data(); }
  T* end() noexcept { return data_.data() + dim_; }
  const T* begin() const noexcept { return data_.data(); }
  const T* end() const noexcept { return data_.data() + dim_; }

  friend bool operator==(const Coords& a, const Coords& b) {
    return a.dim_ == b.dim_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  static void check_dim(std::size_t dim) {
    if (dim > kMaxDim) {
      throw Error(ErrorCode::kShape, "dimension " + std::to_string(dim) +
                                         " exceeds supported maximum " + std::to_string(kMaxDim));
    }
  }

  std::array<T, kMaxDim> data_{};
  std::size_t dim_ = 0;
};

using Point = Coords<double>;
using Index = Coords<std::int64_t>;

inline double norm2(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double norm2(const Index& k) {
  double s = 0.0;
  for (auto v : k) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

inline void require_same_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::kShape, std::string(what) + ": expected dimension " +
                                       std::to_string(expected) + ", got " + std::to_string(got));
  }
}

inline std::string to_string(const Index& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

}  // namespace holoshot
