#include "hmn/adam.hpp"

#include <cmath>

#include "hmn/error.hpp"

namespace hmn {

AdamState AdamState::for_param(const Tensor& param, AdamHyper hyper) {
  AdamState state;
  state.m.assign(param.size(), 0.0);
  state.v.assign(param.size(), 0.0);
  state.hyper = hyper;
  return state;
}

void adam_step(Tensor& param, AdamState& state) {
  if (!param.has_grad()) throw OptimizerError("adam_step: parameter has no gradient");
  if (state.m.size() != param.size() || state.v.size() != param.size()) {
    throw OptimizerError("adam_step: state holds " + std::to_string(state.m.size()) + " moments for a parameter of " +
                         std::to_string(param.size()) + " values");
  }
  const AdamHyper& h = state.hyper;
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);
  auto values = param.mutable_data();
  const auto grads = param.grad();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double g = grads[i];
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    values[i] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
  }
}

double global_grad_norm(std::span<const Tensor> params) {
  double total = 0.0;
  for (const Tensor& p : params) {
    if (!p.has_grad()) continue;
    for (double g : p.grad()) total += g * g;
  }
  return std::sqrt(total);
}

double clip_global_norm(std::span<Tensor> params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (norm > max_norm && norm > 0.0) {
    const double factor = max_norm / norm;
    for (Tensor& p : params) {
      if (!p.has_grad()) continue;
      for (double& g : p.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

}  // namespace hmn
