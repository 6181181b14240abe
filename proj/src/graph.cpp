#include "netprof/graph.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "netprof/errors.hpp"

namespace netprof {

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Input: return "input";
    case OpKind::Conv: return "conv";
    case OpKind::BatchNorm: return "batchnorm";
    case OpKind::Relu: return "relu";
    case OpKind::Concat: return "concat";
    case OpKind::AvgPool: return "avgpool";
    case OpKind::MaxPool: return "maxpool";
    case OpKind::GlobalAvgPool: return "global_avgpool";
    case OpKind::FullyConnected: return "fc";
    case OpKind::Output: return "output";
  }
  return "?";
}

NodeId ComputeGraph::input_node() const {
  NodeId found = -1;
  for (const OpNode& n : nodes)
    if (n.kind == OpKind::Input) {
      if (found != -1) throw InternalError("graph has more than one input node");
      found = n.id;
    }
  if (found == -1) throw InternalError("graph has no input node");
  return found;
}

NodeId ComputeGraph::output_node() const {
  NodeId found = -1;
  for (const OpNode& n : nodes)
    if (n.kind == OpKind::Output) {
      if (found != -1) throw InternalError("graph has more than one output node");
      found = n.id;
    }
  if (found == -1) throw InternalError("graph has no output node");
  return found;
}

ComputeGraph finalize_graph(std::vector<OpNode> nodes, std::vector<Edge> edges) {
  ComputeGraph g;
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  const int n = g.size();

  for (int i = 0; i < n; ++i)
    if (g.nodes[static_cast<size_t>(i)].id != i)
      throw InternalError("node ids must be dense and unique, in order");

  g.inputs_of.assign(static_cast<size_t>(n), {});
  g.consumers_of.assign(static_cast<size_t>(n), {});

  std::vector<std::vector<Edge>> by_consumer(static_cast<size_t>(n));
  for (const Edge& e : g.edges) {
    if (e.producer < 0 || e.producer >= n || e.consumer < 0 || e.consumer >= n)
      throw InternalError("edge references an unknown node");
    by_consumer[static_cast<size_t>(e.consumer)].push_back(e);
  }
  for (int c = 0; c < n; ++c) {
    auto& in = by_consumer[static_cast<size_t>(c)];
    std::sort(in.begin(), in.end(),
              [](const Edge& a, const Edge& b) { return a.slot < b.slot; });
    for (size_t s = 0; s < in.size(); ++s) {
      if (in[s].slot != static_cast<int>(s))
        throw InternalError("input slots of node " + std::to_string(c) +
                            " are not dense");
      g.inputs_of[static_cast<size_t>(c)].push_back(in[s].producer);
      g.consumers_of[static_cast<size_t>(in[s].producer)].push_back(c);
    }
  }

  for (const OpNode& nd : g.nodes) {
    if (nd.kind == OpKind::Input && !g.inputs_of[static_cast<size_t>(nd.id)].empty())
      throw InternalError("input node " + std::to_string(nd.id) + " has predecessors");
    if (nd.kind == OpKind::Output && !g.consumers_of[static_cast<size_t>(nd.id)].empty())
      throw InternalError("output node " + std::to_string(nd.id) + " has successors");
  }

  // Kahn with a min-id frontier: a deterministic topological order, and the
  // acyclicity check for every built graph.
  std::vector<int> indegree(static_cast<size_t>(n), 0);
  for (const Edge& e : g.edges) ++indegree[static_cast<size_t>(e.consumer)];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indegree[static_cast<size_t>(i)] == 0) ready.push(i);
  while (!ready.empty()) {
    int id = ready.top();
    ready.pop();
    g.topo_order.push_back(id);
    for (NodeId c : g.consumers_of[static_cast<size_t>(id)])
      if (--indegree[static_cast<size_t>(c)] == 0) ready.push(c);
  }
  if (static_cast<int>(g.topo_order.size()) != n)
    throw InternalError("graph contains a cycle");
  return g;
}

NodeId GraphBuilder::add(OpKind kind, OpAttrs attrs,
                         const std::vector<NodeId>& inputs,
                         std::optional<int> block, std::optional<int> layer) {
  OpNode node;
  node.id = static_cast<NodeId>(nodes_.size());
  node.kind = kind;
  node.attrs = std::move(attrs);
  node.block_index = block;
  node.layer_index = layer;
  nodes_.push_back(node);
  for (size_t s = 0; s < inputs.size(); ++s)
    edges_.push_back(Edge{inputs[s], node.id, static_cast<int>(s)});
  return node.id;
}

ComputeGraph GraphBuilder::finish() {
  return finalize_graph(std::move(nodes_), std::move(edges_));
}

}  // namespace netprof
