#pragma once

#include <string>

#include "cloudgan/core/conv2d.hpp"

namespace cloudgan::attention {

/// Spatial Attentive Residual Block: out = x + conv_b(relu(conv_a(x))) * A,
/// with the single-channel map A broadcast over all F channels.
template <typename T>
class Sarb {
 public:
  struct Trace {
    Tensor<T> input;
    Tensor<T> hidden;    // relu(conv_a(x))
    Tensor<T> residual;  // conv_b(hidden)
  };

  struct Grads {
    Tensor<T> input;
    Tensor<T> attention;
  };

  Sarb() = default;
  Sarb(int features, const std::string& name);

  Tensor<T> forward(const Tensor<T>& x, const Tensor<T>& attention, Trace* trace = nullptr) const;
  Grads backward(const Trace& trace, const Tensor<T>& attention, const Tensor<T>& grad_out);

  void init(Rng& rng);
  void collect(ParamRefs<T>& out);

  Conv2d<T>& conv_a() { return conv_a_; }
  Conv2d<T>& conv_b() { return conv_b_; }

 private:
  Conv2d<T> conv_a_;
  Conv2d<T> conv_b_;
};

extern template class Sarb<float>;
extern template class Sarb<double>;

}  // namespace cloudgan::attention
