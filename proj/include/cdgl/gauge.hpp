#pragma once
#include "cdgl/dgl.hpp"

namespace cdgl {

// x G a = e^{ad_x}(a) - ((e^{ad_x} - 1)/ad_x)(dx)
Tensor gauge_act(const DGL& l, const Tensor& x, const Tensor& a);

struct GaugeResult {
  bool equivalent = false;
  Tensor witness;
  int obstruction_length = 0;  // set when not equivalent
  int stages = 0;
};

// Lifts a witness through bracket lengths; a negative answer is exact at the cap.
GaugeResult gauge_equivalent(const DGL& l, const Tensor& a, const Tensor& b);

}  // namespace cdgl
