#include "cloudgan/attention/sarb.hpp"

namespace cloudgan::attention {
namespace {

template <typename T>
void check_attention(const Tensor<T>& x, const Tensor<T>& attention) {
  if (attention.channels() != 1 || attention.height() != x.height() || attention.width() != x.width()) {
    throw ShapeError("SARB attention " + attention.shape().str() + " does not match features " + x.shape().str());
  }
}

}  // namespace

template <typename T>
Sarb<T>::Sarb(int features, const std::string& name)
    : conv_a_(ConvSpec::same(features, features, 3), name + ".conv_a"),
      conv_b_(ConvSpec::same(features, features, 3), name + ".conv_b") {}

template <typename T>
void Sarb<T>::init(Rng& rng) {
  conv_a_.init(rng);
  conv_b_.init(rng);
}

template <typename T>
void Sarb<T>::collect(ParamRefs<T>& out) {
  conv_a_.collect(out);
  conv_b_.collect(out);
}

template <typename T>
Tensor<T> Sarb<T>::forward(const Tensor<T>& x, const Tensor<T>& attention, Trace* trace) const {
  check_attention(x, attention);
  Tensor<T> hidden = conv_a_.forward(x);
  for (auto& v : hidden.storage()) v = v > T(0) ? v : T(0);
  Tensor<T> residual = conv_b_.forward(hidden);

  Tensor<T> out = x;
  const std::size_t plane = x.shape().plane();
  const T* gate = attention.data();
  for (int c = 0; c < x.channels(); ++c) {
    T* o = out.channel(c).data();
    const T* r = residual.channel(c).data();
    for (std::size_t i = 0; i < plane; ++i) o[i] += r[i] * gate[i];
  }
  if (trace) *trace = Trace{x, std::move(hidden), std::move(residual)};
  return out;
}

template <typename T>
typename Sarb<T>::Grads Sarb<T>::backward(const Trace& trace, const Tensor<T>& attention, const Tensor<T>& grad_out) {
  check_attention(trace.input, attention);
  require_same_shape(trace.input, grad_out, "SARB backward");
  const std::size_t plane = grad_out.shape().plane();
  const T* gate = attention.data();

  Tensor<T> grad_attention(1, attention.height(), attention.width());
  Tensor<T> grad_residual(grad_out.shape());
  for (int c = 0; c < grad_out.channels(); ++c) {
    const T* g = grad_out.channel(c).data();
    const T* r = trace.residual.channel(c).data();
    T* gr = grad_residual.channel(c).data();
    T* ga = grad_attention.data();
    for (std::size_t i = 0; i < plane; ++i) {
      gr[i] = g[i] * gate[i];
      ga[i] += g[i] * r[i];
    }
  }

  Tensor<T> grad_hidden = conv_b_.backward(trace.hidden, grad_residual);
  for (std::size_t i = 0; i < grad_hidden.size(); ++i) {
    if (!(trace.hidden.storage()[i] > T(0))) grad_hidden.storage()[i] = T(0);
  }
  Tensor<T> grad_input = conv_a_.backward(trace.input, grad_hidden);
  grad_input += grad_out;
  return {std::move(grad_input), std::move(grad_attention)};
}

template class Sarb<float>;
template class Sarb<double>;

}  // namespace cloudgan::attention
