#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netprof/graph.hpp"
#include "netprof/memplan.hpp"
#include "netprof/shapes.hpp"

namespace netprof {

struct SplitMix64 {
  std::uint64_t state = 0;
  std::uint64_t next();
  // uniform in [0,1): top 53 bits of the next output
  double next_unit();
};

struct Tensor {
  TensorShape shape;
  std::vector<float> data;  // row-major NCHW, length n*c*h*w

  float& at(int n0, int c0, int h0, int w0) {
    return data[static_cast<size_t>(((n0 * shape.c + c0) * shape.h + h0) * shape.w + w0)];
  }
  float at(int n0, int c0, int h0, int w0) const {
    return data[static_cast<size_t>(((n0 * shape.c + c0) * shape.h + h0) * shape.w + w0)];
  }
};

Tensor zeros(const TensorShape& shape);

// Deterministic test input: a dedicated splitmix64 stream (state = seed XOR
// 2^64-1, disjoint from every per-node weight stream), values 2u-1 in (-1,1).
Tensor random_tensor(const TensorShape& shape, std::uint64_t seed);

struct NodeWeights {
  std::vector<float> weights;  // conv kernels (c_out,c_in,kh,kw) / fc matrix (classes,c_in)
  std::vector<float> bias;
  std::vector<float> gamma;    // batch norm scale, init 1
  std::vector<float> beta;     // batch norm shift, init 0
};

struct WeightStore {
  std::vector<NodeWeights> per_node;  // indexed by node id
};

// Reproducible init: each node draws from splitmix64 seeded with
// (seed XOR node id); weight = (2u - 1) / sqrt(fan_in) emitted in canonical
// index order. Conv fan_in = c_in*k^2, FC fan_in = c_in. Biases 0.
WeightStore init_weights(const ComputeGraph& graph, const ShapeMap& shapes,
                         std::uint64_t seed);

struct ExecStats {
  // Inner-loop multiply counts per node: conv kernel products (padding
  // positions included), fc products, one per element for batch norm.
  // With batch 1 these equal op_macc node for node.
  std::vector<std::int64_t> multiplies;
};

// Naive direct-loop execution retaining every intermediate. Fixed accumulation
// order (c_in-major, then kh, kw), 32-bit accumulation, batch norm in inference
// form with mu=0, sigma^2=1, eps=1e-5. Returns the value consumed by Output.
Tensor exec_naive(const ComputeGraph& graph, const ShapeMap& shapes,
                  const WeightStore& weights, const Tensor& input,
                  ExecStats* stats = nullptr);

// Identical arithmetic, but frees each value's buffer per the schedule's
// free_after sets. Bit-identical to exec_naive; throws InternalError if the
// schedule would read a freed buffer.
Tensor exec_scheduled(const ComputeGraph& graph, const ShapeMap& shapes,
                      const Schedule& sched, const WeightStore& weights,
                      const Tensor& input, ExecStats* stats = nullptr);

// FNV-1a 64 over the little-endian byte serialization of each float in
// row-major order; 16 lowercase hex digits. Platform-independent.
std::string checksum(const Tensor& t);

}  // namespace netprof
