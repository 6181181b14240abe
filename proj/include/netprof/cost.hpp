#pragma once

#include <cstdint>
#include <vector>

#include "netprof/graph.hpp"
#include "netprof/shapes.hpp"

namespace netprof {

struct NodeCost {
  std::int64_t params = 0;
  std::int64_t macc = 0;
  friend bool operator==(const NodeCost&, const NodeCost&) = default;
};

// reported_flops/reported_macs follow the column conventions of the usual
// comparison tables: the FLOPs column equals the multiply-accumulate count
// and the MACs column is exactly twice it.
struct CostReport {
  std::vector<NodeCost> per_node;  // indexed by node id
  std::int64_t total_params = 0;
  std::int64_t total_macc = 0;
  std::int64_t reported_flops = 0;  // = total_macc
  std::int64_t reported_macs = 0;   // = 2 * total_macc
  int depth = 0;
  friend bool operator==(const CostReport&, const CostReport&) = default;
};

// Parameter count of one node given its input shape.
// Conv: c_in*c_out*k^2 (+c_out with bias); BatchNorm: 2c; FullyConnected:
// c_in*classes + classes; everything else 0.
std::int64_t op_params(const OpNode& node, const TensorShape& in);

// Multiply-accumulate count, batch excluded (per-sample).
// Conv: c_in*c_out*k^2*h_out*w_out; FullyConnected: c_in*classes; BatchNorm:
// one multiply-add per element (c*h*w); pools, relu, concat 0.
std::int64_t op_macc(const OpNode& node, const TensorShape& in,
                     const TensorShape& out);

// Number of Conv plus FullyConnected nodes.
int depth(const ComputeGraph& graph);

CostReport network_cost(const ComputeGraph& graph, const TensorShape& input);

}  // namespace netprof
