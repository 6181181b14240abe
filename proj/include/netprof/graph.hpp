#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "netprof/config.hpp"

namespace netprof {

enum class OpKind {
  Input,
  Conv,
  BatchNorm,
  Relu,
  Concat,
  AvgPool,
  MaxPool,
  GlobalAvgPool,
  FullyConnected,
  Output,
};

struct PoolAttrs {
  int kernel = 2;
  int stride = 2;
  int padding = 0;
  friend bool operator==(const PoolAttrs&, const PoolAttrs&) = default;
};

struct FcAttrs {
  int classes = 0;
  friend bool operator==(const FcAttrs&, const FcAttrs&) = default;
};

using OpAttrs = std::variant<std::monostate, ConvSpec, PoolAttrs, FcAttrs>;

using NodeId = int;

struct OpNode {
  NodeId id = -1;
  OpKind kind = OpKind::Input;
  OpAttrs attrs;
  std::optional<int> block_index;
  std::optional<int> layer_index;  // 1-based layer inside a block; empty for
                                   // block-output concats and transitions
  friend bool operator==(const OpNode&, const OpNode&) = default;
};

struct Edge {
  NodeId producer = -1;
  NodeId consumer = -1;
  int slot = 0;  // input position at the consumer; concat order = slot order
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable operator DAG. Every node produces one tensor value shared by all
// its consumers, so a value is identified by its producer's node id.
struct ComputeGraph {
  std::vector<OpNode> nodes;  // indexed by id; ids dense and unique
  std::vector<Edge> edges;
  std::vector<NodeId> topo_order;

  // adjacency, derived from edges at finalize time
  std::vector<std::vector<NodeId>> inputs_of;    // consumer id -> producers by slot
  std::vector<std::vector<NodeId>> consumers_of; // producer id -> consumer ids

  const OpNode& node(NodeId id) const { return nodes[static_cast<size_t>(id)]; }
  int size() const { return static_cast<int>(nodes.size()); }

  // The unique source/sink; throws InternalError if absent or ambiguous.
  NodeId input_node() const;
  NodeId output_node() const;
};

// Validates structure (dense unique ids, slots dense per consumer, Input nodes
// have no predecessors, Output nodes no successors, acyclic) and computes a
// deterministic topological order. Throws InternalError on violations.
ComputeGraph finalize_graph(std::vector<OpNode> nodes, std::vector<Edge> edges);

class GraphBuilder {
 public:
  NodeId add(OpKind kind, OpAttrs attrs, const std::vector<NodeId>& inputs,
             std::optional<int> block = std::nullopt,
             std::optional<int> layer = std::nullopt);
  ComputeGraph finish();

 private:
  std::vector<OpNode> nodes_;
  std::vector<Edge> edges_;
};

const char* to_string(OpKind k);

}  // namespace netprof
