#include "netprof/shapes.hpp"

#include <sstream>

#include "netprof/errors.hpp"

namespace netprof {

namespace {

std::string shape_str(const TensorShape& s) {
  std::ostringstream os;
  os << s.n << "x" << s.c << "x" << s.h << "x" << s.w;
  return os.str();
}

}  // namespace

int conv_out_dim(int size, int kernel, int stride, int padding) {
  int out = (size + 2 * padding - kernel) / stride + 1;
  if (size + 2 * padding - kernel < 0 || out < 1) {
    std::ostringstream msg;
    msg << "shape underflow: size " << size << " with kernel " << kernel
        << ", stride " << stride << ", padding " << padding;
    throw ShapeError(msg.str());
  }
  return out;
}

ShapeMap propagate(const ComputeGraph& g, const TensorShape& input) {
  ShapeMap shapes(g.nodes.size());
  for (NodeId id : g.topo_order) {
    const OpNode& nd = g.node(id);
    const auto& ins = g.inputs_of[static_cast<size_t>(id)];
    switch (nd.kind) {
      case OpKind::Input:
        shapes[static_cast<size_t>(id)] = input;
        break;
      case OpKind::Conv: {
        const TensorShape& in = shapes[static_cast<size_t>(ins.at(0))];
        const ConvSpec& cs = std::get<ConvSpec>(nd.attrs);
        shapes[static_cast<size_t>(id)] = {
            in.n, cs.out_channels,
            conv_out_dim(in.h, cs.kernel, cs.stride, cs.padding),
            conv_out_dim(in.w, cs.kernel, cs.stride, cs.padding)};
        break;
      }
      case OpKind::BatchNorm:
      case OpKind::Relu:
        shapes[static_cast<size_t>(id)] = shapes[static_cast<size_t>(ins.at(0))];
        break;
      case OpKind::Concat: {
        const TensorShape& first = shapes[static_cast<size_t>(ins.at(0))];
        TensorShape out = first;
        out.c = 0;
        for (size_t s = 0; s < ins.size(); ++s) {
          const TensorShape& in = shapes[static_cast<size_t>(ins[s])];
          if (in.h != first.h || in.w != first.w || in.n != first.n) {
            std::ostringstream msg;
            msg << "shape mismatch at concat node " << id << ": input 0 from node "
                << ins[0] << " is " << shape_str(first) << ", input " << s
                << " from node " << ins[s] << " is " << shape_str(in);
            throw ShapeError(msg.str());
          }
          out.c += in.c;
        }
        shapes[static_cast<size_t>(id)] = out;
        break;
      }
      case OpKind::AvgPool:
      case OpKind::MaxPool: {
        const TensorShape& in = shapes[static_cast<size_t>(ins.at(0))];
        const PoolAttrs& p = std::get<PoolAttrs>(nd.attrs);
        shapes[static_cast<size_t>(id)] = {
            in.n, in.c, conv_out_dim(in.h, p.kernel, p.stride, p.padding),
            conv_out_dim(in.w, p.kernel, p.stride, p.padding)};
        break;
      }
      case OpKind::GlobalAvgPool: {
        const TensorShape& in = shapes[static_cast<size_t>(ins.at(0))];
        shapes[static_cast<size_t>(id)] = {in.n, in.c, 1, 1};
        break;
      }
      case OpKind::FullyConnected: {
        const TensorShape& in = shapes[static_cast<size_t>(ins.at(0))];
        shapes[static_cast<size_t>(id)] = {
            in.n, std::get<FcAttrs>(nd.attrs).classes, 1, 1};
        break;
      }
      case OpKind::Output:
        shapes[static_cast<size_t>(id)] = shapes[static_cast<size_t>(ins.at(0))];
        break;
    }
  }
  return shapes;
}

}  // namespace netprof
