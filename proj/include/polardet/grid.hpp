#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polardet/error.hpp"

namespace polardet {

// Dense channels x height x width array, row-major within each channel.
struct Grid {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Grid() = default;
  Grid(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  std::size_t plane_size() const { return height * width; }
  std::size_t size() const { return data.size(); }

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data[(c * height + y) * width + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }

  std::span<double> plane(std::size_t c) { return {data.data() + c * plane_size(), plane_size()}; }
  std::span<const double> plane(std::size_t c) const {
    return {data.data() + c * plane_size(), plane_size()};
  }

  bool same_shape(const Grid& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
  bool same_plane(const Grid& o) const { return height == o.height && width == o.width; }
};

inline void require_same_shape(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_shape(b)) throw Error(ErrorKind::InvalidInput, std::string(what) + ": shape mismatch");
}

}  // namespace polardet
