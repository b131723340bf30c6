#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hmn/tensor.hpp"

namespace hmn {

struct AdamHyper {
  double learning_rate = 0.001;
  double beta1 = 0.99;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates for one parameter tensor.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
  AdamHyper hyper;

  static AdamState for_param(const Tensor& param, AdamHyper hyper);
};

// Bias-corrected Adam update of `param` from its accumulated gradient.
// The gradient is left untouched; resetting it is the caller's job.
void adam_step(Tensor& param, AdamState& state);

// Scales every gradient so the joint L2 norm is at most `max_norm`.
// Returns the norm measured before clipping.
double clip_global_norm(std::span<Tensor> params, double max_norm);

double global_grad_norm(std::span<const Tensor> params);

}  // namespace hmn
