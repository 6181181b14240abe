#include "netprof/cost.hpp"

namespace netprof {

std::int64_t op_params(const OpNode& node, const TensorShape& in) {
  switch (node.kind) {
    case OpKind::Conv: {
      const ConvSpec& cs = std::get<ConvSpec>(node.attrs);
      std::int64_t p = static_cast<std::int64_t>(in.c) * cs.out_channels *
                       cs.kernel * cs.kernel;
      if (cs.has_bias) p += cs.out_channels;
      return p;
    }
    case OpKind::BatchNorm:
      return 2LL * in.c;  // affine scale + shift
    case OpKind::FullyConnected: {
      std::int64_t features = in.per_sample_elements();
      int classes = std::get<FcAttrs>(node.attrs).classes;
      return features * classes + classes;
    }
    default:
      return 0;
  }
}

std::int64_t op_macc(const OpNode& node, const TensorShape& in,
                     const TensorShape& out) {
  switch (node.kind) {
    case OpKind::Conv: {
      const ConvSpec& cs = std::get<ConvSpec>(node.attrs);
      return static_cast<std::int64_t>(in.c) * out.c * cs.kernel * cs.kernel *
             out.h * out.w;
    }
    case OpKind::BatchNorm:
      return in.per_sample_elements();
    case OpKind::FullyConnected:
      return in.per_sample_elements() * std::get<FcAttrs>(node.attrs).classes;
    default:
      return 0;  // pools, relu, concat carry no multiplies in this model
  }
}

int depth(const ComputeGraph& g) {
  int d = 0;
  for (const OpNode& n : g.nodes)
    if (n.kind == OpKind::Conv || n.kind == OpKind::FullyConnected) ++d;
  return d;
}

CostReport network_cost(const ComputeGraph& g, const TensorShape& input) {
  const ShapeMap shapes = propagate(g, input);
  CostReport rep;
  rep.per_node.resize(g.nodes.size());
  for (NodeId id : g.topo_order) {
    const OpNode& nd = g.node(id);
    const auto& ins = g.inputs_of[static_cast<size_t>(id)];
    TensorShape in = ins.empty() ? TensorShape{} : shapes[static_cast<size_t>(ins[0])];
    NodeCost& c = rep.per_node[static_cast<size_t>(id)];
    c.params = op_params(nd, in);
    c.macc = op_macc(nd, in, shapes[static_cast<size_t>(id)]);
    rep.total_params += c.params;
    rep.total_macc += c.macc;
  }
  rep.reported_flops = rep.total_macc;
  rep.reported_macs = 2 * rep.total_macc;
  rep.depth = depth(g);
  return rep;
}

}  // namespace netprof
