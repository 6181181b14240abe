#pragma once

#include <cstdint>
#include <vector>

#include "netprof/graph.hpp"

namespace netprof {

struct TensorShape {
  int n = 1;
  int c = 1;
  int h = 1;
  int w = 1;

  std::int64_t elements() const {
    return static_cast<std::int64_t>(n) * c * h * w;
  }
  // batch-1 element count, used by the cost and traffic models
  std::int64_t per_sample_elements() const {
    return static_cast<std::int64_t>(c) * h * w;
  }
  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

// floor((size + 2*padding - kernel) / stride) + 1; throws ShapeError when the
// result would drop below 1.
int conv_out_dim(int size, int kernel, int stride, int padding);

// Output shape of every node, indexed by node id (= the shape carried by all
// of the node's outgoing edges). The Output sink is annotated with the shape
// it consumes. Throws ShapeError on concat spatial mismatch or underflow.
using ShapeMap = std::vector<TensorShape>;
ShapeMap propagate(const ComputeGraph& graph, const TensorShape& input);

}  // namespace netprof
