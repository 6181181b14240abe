#include "netprof/refexec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>

#include "netprof/cost.hpp"
#include "netprof/errors.hpp"

namespace netprof {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Tensor zeros(const TensorShape& shape) {
  Tensor t;
  t.shape = shape;
  t.data.assign(static_cast<size_t>(shape.elements()), 0.0f);
  return t;
}

Tensor random_tensor(const TensorShape& shape, std::uint64_t seed) {
  Tensor t = zeros(shape);
  SplitMix64 rng{seed ^ ~0ULL};
  for (float& v : t.data) v = static_cast<float>(2.0 * rng.next_unit() - 1.0);
  return t;
}

WeightStore init_weights(const ComputeGraph& g, const ShapeMap& shapes,
                         std::uint64_t seed) {
  WeightStore ws;
  ws.per_node.resize(g.nodes.size());
  for (const OpNode& nd : g.nodes) {
    NodeWeights& w = ws.per_node[static_cast<size_t>(nd.id)];
    const auto& ins = g.inputs_of[static_cast<size_t>(nd.id)];
    SplitMix64 rng{seed ^ static_cast<std::uint64_t>(nd.id)};
    switch (nd.kind) {
      case OpKind::Conv: {
        const ConvSpec& cs = std::get<ConvSpec>(nd.attrs);
        int c_in = shapes[static_cast<size_t>(ins.at(0))].c;
        std::int64_t fan_in =
            static_cast<std::int64_t>(c_in) * cs.kernel * cs.kernel;
        double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        w.weights.resize(static_cast<size_t>(fan_in) * cs.out_channels);
        // canonical order (c_out, c_in, kh, kw) = storage order
        for (float& v : w.weights)
          v = static_cast<float>((2.0 * rng.next_unit() - 1.0) * scale);
        if (cs.has_bias) w.bias.assign(static_cast<size_t>(cs.out_channels), 0.0f);
        break;
      }
      case OpKind::BatchNorm: {
        int c = shapes[static_cast<size_t>(ins.at(0))].c;
        w.gamma.assign(static_cast<size_t>(c), 1.0f);
        w.beta.assign(static_cast<size_t>(c), 0.0f);
        break;
      }
      case OpKind::FullyConnected: {
        std::int64_t features =
            shapes[static_cast<size_t>(ins.at(0))].per_sample_elements();
        int classes = std::get<FcAttrs>(nd.attrs).classes;
        double scale = 1.0 / std::sqrt(static_cast<double>(features));
        w.weights.resize(static_cast<size_t>(features) * classes);
        for (float& v : w.weights)
          v = static_cast<float>((2.0 * rng.next_unit() - 1.0) * scale);
        w.bias.assign(static_cast<size_t>(classes), 0.0f);
        break;
      }
      default:
        break;
    }
  }
  return ws;
}

namespace {

// batch norm inference transform with fixed statistics mu=0, sigma^2=1:
// y = gamma * x / sqrt(1 + eps) + beta, folded to one multiply-add per element
const float kBnInvStd = 1.0f / std::sqrt(1.0f + 1e-5f);

Tensor conv_forward(const Tensor& in, const ConvSpec& cs, const TensorShape& out_shape,
                    const NodeWeights& w, std::int64_t* mul) {
  Tensor out = zeros(out_shape);
  const int k = cs.kernel;
  for (int n0 = 0; n0 < out_shape.n; ++n0)
    for (int co = 0; co < out_shape.c; ++co)
      for (int oh = 0; oh < out_shape.h; ++oh)
        for (int ow = 0; ow < out_shape.w; ++ow) {
          float acc = 0.0f;
          // fixed accumulation order: c_in major, then kh, kw; padding
          // positions multiply an explicit zero so the count matches op_macc
          for (int ci = 0; ci < in.shape.c; ++ci)
            for (int kh = 0; kh < k; ++kh)
              for (int kw = 0; kw < k; ++kw) {
                int ih = oh * cs.stride - cs.padding + kh;
                int iw = ow * cs.stride - cs.padding + kw;
                float v = (ih >= 0 && ih < in.shape.h && iw >= 0 && iw < in.shape.w)
                              ? in.at(n0, ci, ih, iw)
                              : 0.0f;
                acc += v * w.weights[static_cast<size_t>(
                               ((co * in.shape.c + ci) * k + kh) * k + kw)];
              }
          if (!w.bias.empty()) acc += w.bias[static_cast<size_t>(co)];
          out.at(n0, co, oh, ow) = acc;
        }
  if (mul)
    *mul += static_cast<std::int64_t>(out_shape.n) * out_shape.c * out_shape.h *
            out_shape.w * in.shape.c * k * k;
  return out;
}

Tensor batchnorm_forward(const Tensor& in, const NodeWeights& w, std::int64_t* mul) {
  Tensor out = zeros(in.shape);
  const std::int64_t plane = static_cast<std::int64_t>(in.shape.h) * in.shape.w;
  for (int n0 = 0; n0 < in.shape.n; ++n0)
    for (int c = 0; c < in.shape.c; ++c) {
      float scale = w.gamma[static_cast<size_t>(c)] * kBnInvStd;
      float shift = w.beta[static_cast<size_t>(c)];
      const float* src = in.data.data() + (n0 * in.shape.c + c) * plane;
      float* dst = out.data.data() + (n0 * in.shape.c + c) * plane;
      for (std::int64_t i = 0; i < plane; ++i) dst[i] = src[i] * scale + shift;
    }
  if (mul) *mul += static_cast<std::int64_t>(in.shape.n) * in.shape.c * plane;
  return out;
}

Tensor relu_forward(const Tensor& in) {
  Tensor out = zeros(in.shape);
  for (size_t i = 0; i < in.data.size(); ++i)
    out.data[i] = in.data[i] > 0.0f ? in.data[i] : 0.0f;
  return out;
}

Tensor concat_forward(const std::vector<const Tensor*>& ins, const TensorShape& out_shape) {
  Tensor out = zeros(out_shape);
  for (int n0 = 0; n0 < out_shape.n; ++n0) {
    int c_base = 0;
    for (const Tensor* t : ins) {
      for (int c = 0; c < t->shape.c; ++c)
        for (int h = 0; h < t->shape.h; ++h)
          for (int w = 0; w < t->shape.w; ++w)
            out.at(n0, c_base + c, h, w) = t->at(n0, c, h, w);
      c_base += t->shape.c;
    }
  }
  return out;
}

Tensor pool_forward(const Tensor& in, const PoolAttrs& p, const TensorShape& out_shape,
                    bool is_max) {
  Tensor out = zeros(out_shape);
  for (int n0 = 0; n0 < out_shape.n; ++n0)
    for (int c = 0; c < out_shape.c; ++c)
      for (int oh = 0; oh < out_shape.h; ++oh)
        for (int ow = 0; ow < out_shape.w; ++ow) {
          if (is_max) {
            float best = -std::numeric_limits<float>::infinity();
            for (int kh = 0; kh < p.kernel; ++kh)
              for (int kw = 0; kw < p.kernel; ++kw) {
                int ih = oh * p.stride - p.padding + kh;
                int iw = ow * p.stride - p.padding + kw;
                if (ih >= 0 && ih < in.shape.h && iw >= 0 && iw < in.shape.w)
                  best = std::max(best, in.at(n0, c, ih, iw));
              }
            out.at(n0, c, oh, ow) = best;
          } else {
            // padded cells contribute zeros; divisor stays kernel^2
            float acc = 0.0f;
            for (int kh = 0; kh < p.kernel; ++kh)
              for (int kw = 0; kw < p.kernel; ++kw) {
                int ih = oh * p.stride - p.padding + kh;
                int iw = ow * p.stride - p.padding + kw;
                if (ih >= 0 && ih < in.shape.h && iw >= 0 && iw < in.shape.w)
                  acc += in.at(n0, c, ih, iw);
              }
            out.at(n0, c, oh, ow) = acc / static_cast<float>(p.kernel * p.kernel);
          }
        }
  return out;
}

Tensor global_avgpool_forward(const Tensor& in) {
  Tensor out = zeros({in.shape.n, in.shape.c, 1, 1});
  const std::int64_t plane = static_cast<std::int64_t>(in.shape.h) * in.shape.w;
  for (int n0 = 0; n0 < in.shape.n; ++n0)
    for (int c = 0; c < in.shape.c; ++c) {
      float acc = 0.0f;
      const float* src = in.data.data() + (n0 * in.shape.c + c) * plane;
      for (std::int64_t i = 0; i < plane; ++i) acc += src[i];
      out.at(n0, c, 0, 0) = acc / static_cast<float>(plane);
    }
  return out;
}

Tensor fc_forward(const Tensor& in, int classes, const NodeWeights& w,
                  std::int64_t* mul) {
  const std::int64_t features = in.shape.per_sample_elements();
  Tensor out = zeros({in.shape.n, classes, 1, 1});
  for (int n0 = 0; n0 < in.shape.n; ++n0) {
    const float* src = in.data.data() + n0 * features;
    for (int j = 0; j < classes; ++j) {
      float acc = 0.0f;
      const float* row = w.weights.data() + static_cast<size_t>(j) * features;
      for (std::int64_t i = 0; i < features; ++i) acc += src[i] * row[i];
      acc += w.bias[static_cast<size_t>(j)];
      out.at(n0, j, 0, 0) = acc;
    }
  }
  if (mul) *mul += static_cast<std::int64_t>(in.shape.n) * features * classes;
  return out;
}

Tensor eval_node(const ComputeGraph& g, const ShapeMap& shapes,
                 const WeightStore& ws, NodeId id,
                 const std::vector<const Tensor*>& ins, ExecStats* stats) {
  const OpNode& nd = g.node(id);
  std::int64_t* mul =
      stats ? &stats->multiplies[static_cast<size_t>(id)] : nullptr;
  const TensorShape& out_shape = shapes[static_cast<size_t>(id)];
  Tensor out;
  switch (nd.kind) {
    case OpKind::Conv:
      out = conv_forward(*ins.at(0), std::get<ConvSpec>(nd.attrs), out_shape,
                         ws.per_node[static_cast<size_t>(id)], mul);
      break;
    case OpKind::BatchNorm:
      out = batchnorm_forward(*ins.at(0), ws.per_node[static_cast<size_t>(id)], mul);
      break;
    case OpKind::Relu:
      out = relu_forward(*ins.at(0));
      break;
    case OpKind::Concat:
      out = concat_forward(ins, out_shape);
      break;
    case OpKind::AvgPool:
      out = pool_forward(*ins.at(0), std::get<PoolAttrs>(nd.attrs), out_shape, false);
      break;
    case OpKind::MaxPool:
      out = pool_forward(*ins.at(0), std::get<PoolAttrs>(nd.attrs), out_shape, true);
      break;
    case OpKind::GlobalAvgPool:
      out = global_avgpool_forward(*ins.at(0));
      break;
    case OpKind::FullyConnected:
      out = fc_forward(*ins.at(0), std::get<FcAttrs>(nd.attrs).classes,
                       ws.per_node[static_cast<size_t>(id)], mul);
      break;
    default:
      throw InternalError("eval_node: unexpected kind");
  }
  if (out.shape != out_shape)
    throw InternalError("runtime shape of node " + std::to_string(id) +
                        " diverges from propagated shape");
  return out;
}

void check_input(const ComputeGraph& g, const ShapeMap& shapes, const Tensor& input) {
  if (input.shape != shapes[static_cast<size_t>(g.input_node())])
    throw ShapeError("input tensor shape does not match the graph input");
  if (input.data.size() != static_cast<size_t>(input.shape.elements()))
    throw ShapeError("input tensor data length does not match its shape");
}

}  // namespace

Tensor exec_naive(const ComputeGraph& g, const ShapeMap& shapes,
                  const WeightStore& ws, const Tensor& input, ExecStats* stats) {
  check_input(g, shapes, input);
  if (stats) stats->multiplies.assign(g.nodes.size(), 0);
  std::vector<Tensor> vals(g.nodes.size());  // every intermediate retained
  Tensor result;
  for (NodeId id : g.topo_order) {
    const OpNode& nd = g.node(id);
    if (nd.kind == OpKind::Input) {
      vals[static_cast<size_t>(id)] = input;
      continue;
    }
    std::vector<const Tensor*> ins;
    for (NodeId p : g.inputs_of[static_cast<size_t>(id)])
      ins.push_back(&vals[static_cast<size_t>(p)]);
    if (nd.kind == OpKind::Output) {
      result = *ins.at(0);
      continue;
    }
    vals[static_cast<size_t>(id)] = eval_node(g, shapes, ws, id, ins, stats);
  }
  return result;
}

Tensor exec_scheduled(const ComputeGraph& g, const ShapeMap& shapes,
                      const Schedule& sched, const WeightStore& ws,
                      const Tensor& input, ExecStats* stats) {
  check_input(g, shapes, input);
  if (stats) stats->multiplies.assign(g.nodes.size(), 0);
  std::vector<std::optional<Tensor>> buf(g.nodes.size());
  Tensor result;
  for (const ScheduleStep& step : sched.steps) {
    const OpNode& nd = g.node(step.node);
    std::vector<const Tensor*> ins;
    for (NodeId p : g.inputs_of[static_cast<size_t>(step.node)]) {
      if (!buf[static_cast<size_t>(p)])
        throw InternalError("use after free: node " + std::to_string(step.node) +
                            " reads freed value " + std::to_string(p));
      ins.push_back(&*buf[static_cast<size_t>(p)]);
    }
    if (nd.kind == OpKind::Input)
      buf[static_cast<size_t>(step.node)] = input;
    else if (nd.kind == OpKind::Output)
      result = *ins.at(0);
    else
      buf[static_cast<size_t>(step.node)] =
          eval_node(g, shapes, ws, step.node, ins, stats);
    for (NodeId v : step.free_after) {
      if (!buf[static_cast<size_t>(v)])
        throw InternalError("double free of value " + std::to_string(v));
      buf[static_cast<size_t>(v)].reset();
    }
  }
  return result;
}

std::string checksum(const Tensor& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (float f : t.data) {
    std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;  // little-endian byte order
      h *= 0x100000001b3ULL;
    }
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace netprof
