#pragma once
#include "cdgl/free_lie.hpp"

namespace cdgl {

// Truncated exponential and logarithm in the tensor algebra.
Tensor tensor_exp(const FreeLie& lie, const Tensor& x);
Tensor tensor_log(const FreeLie& lie, const Tensor& g);

// x * y = log(exp x exp y) for degree 0 Lie elements.
Tensor bch(const FreeLie& lie, const Tensor& x, const Tensor& y);
// e^{ad_x}(y)
Tensor exp_ad(const FreeLie& lie, const Tensor& x, const Tensor& y);

}  // namespace cdgl
