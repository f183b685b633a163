#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "cloudgan/core/buffer.hpp"

namespace cloudgan {

/// A named learnable tensor with its gradient accumulator.
template <typename T>
struct Param {
  std::string name;
  std::vector<int> shape;
  Buffer<T> value;
  Buffer<T> grad;

  Param() = default;
  Param(std::string n, std::vector<int> s, T fill = T(0)) : name(std::move(n)), shape(std::move(s)) {
    const auto count = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                                       [](std::size_t acc, int d) { return acc * static_cast<std::size_t>(d); });
    value.assign(count, fill);
    grad.assign(count, T(0));
  }

  std::size_t size() const { return value.size(); }
  void zero_grad() { std::fill(grad.begin(), grad.end(), T(0)); }
};

template <typename T>
using ParamRefs = std::vector<Param<T>*>;

template <typename T>
std::size_t total_size(const ParamRefs<T>& params) {
  std::size_t n = 0;
  for (const auto* p : params) n += p->size();
  return n;
}

template <typename T>
void zero_grads(const ParamRefs<T>& params) {
  for (auto* p : params) p->zero_grad();
}

}  // namespace cloudgan
