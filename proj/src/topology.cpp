#include "netprof/topology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "netprof/errors.hpp"

namespace netprof {

std::vector<BlockMode> resolve_modes(const NetworkSpec& spec) {
  std::vector<BlockMode> modes;
  modes.reserve(spec.blocks.size());
  for (size_t i = 0; i < spec.blocks.size(); ++i) {
    BlockMode m = spec.blocks[i].mode;
    if (m == BlockMode::Auto)
      m = spec.channel_list[i] >= spec.threshold ? BlockMode::Harmonic
                                                 : BlockMode::Dense;
    modes.push_back(m);
  }
  return modes;
}

int two_adic_valuation(int l) {
  if (l < 1) throw std::domain_error("two_adic_valuation: l must be >= 1");
  int n = 0;
  while (l % 2 == 0) {
    l /= 2;
    ++n;
  }
  return n;
}

std::vector<int> dense_layer_inputs(int layer) {
  if (layer < 1) throw std::domain_error("dense_layer_inputs: layer must be >= 1");
  std::vector<int> in(static_cast<size_t>(layer));
  for (int j = 0; j < layer; ++j) in[static_cast<size_t>(j)] = j;
  return in;
}

std::vector<int> harmonic_layer_inputs(int layer) {
  if (layer < 1)
    throw std::domain_error("harmonic_layer_inputs: layer must be >= 1");
  std::vector<int> in;
  for (int p = 1; layer % p == 0 && layer - p >= 0; p <<= 1)
    in.push_back(layer - p);
  std::sort(in.begin(), in.end());
  return in;
}

int harmonic_layer_width(int growth_rate, double multiplier, int layer) {
  double w = growth_rate;
  for (int n = two_adic_valuation(layer); n > 0; --n) w *= multiplier;
  return static_cast<int>(std::floor(w));
}

std::vector<int> block_output_layers(BlockMode mode, int num_layers) {
  if (num_layers < 1)
    throw std::domain_error("block_output_layers: num_layers must be >= 1");
  std::vector<int> out;
  if (mode == BlockMode::Dense) {
    for (int l = 0; l <= num_layers; ++l) out.push_back(l);
  } else if (mode == BlockMode::Harmonic) {
    out.push_back(0);
    for (int l = 1; l <= num_layers; l += 2) out.push_back(l);
    if (num_layers % 2 == 0) out.push_back(num_layers);
  } else {
    throw InternalError("block_output_layers: mode must be resolved");
  }
  return out;
}

ComputeGraph build_graph(const NetworkSpec& spec) {
  auto violations = validate(spec);
  if (!violations.empty()) {
    std::ostringstream msg;
    for (size_t i = 0; i < violations.size(); ++i) {
      if (i) msg << "; ";
      msg << violations[i].field << ": " << violations[i].rule;
    }
    throw ConfigError(ConfigError::Kind::Invariant, msg.str());
  }
  const std::vector<BlockMode> modes = resolve_modes(spec);

  GraphBuilder b;
  NodeId cur = b.add(OpKind::Input, std::monostate{}, {});
  for (const ConvSpec& conv : spec.stem.convs)
    cur = b.add(OpKind::Conv, conv, {cur});
  PoolAttrs stem_pool{spec.stem.pool_kernel, spec.stem.pool_stride, 1};
  cur = b.add(spec.stem.pool_kind == PoolKind::Max ? OpKind::MaxPool
                                                   : OpKind::AvgPool,
              stem_pool, {cur});

  const int n_blocks = static_cast<int>(spec.blocks.size());
  for (int bi = 0; bi < n_blocks; ++bi) {
    const BlockSpec& blk = spec.blocks[static_cast<size_t>(bi)];
    const BlockMode mode = modes[static_cast<size_t>(bi)];
    std::vector<NodeId> layer_out(static_cast<size_t>(blk.num_layers) + 1);
    layer_out[0] = cur;  // layer 0 is the block input

    for (int l = 1; l <= blk.num_layers; ++l) {
      std::vector<int> in_layers = mode == BlockMode::Dense
                                       ? dense_layer_inputs(l)
                                       : harmonic_layer_inputs(l);
      std::vector<NodeId> in_nodes;
      in_nodes.reserve(in_layers.size());
      for (int j : in_layers) in_nodes.push_back(layer_out[static_cast<size_t>(j)]);
      // single-input layers connect directly; no one-tensor concat
      NodeId in = in_nodes.size() == 1
                      ? in_nodes[0]
                      : b.add(OpKind::Concat, std::monostate{}, in_nodes, bi, l);

      NodeId x = in;
      if (mode == BlockMode::Dense) {
        x = b.add(OpKind::BatchNorm, std::monostate{}, {x}, bi, l);
        x = b.add(OpKind::Relu, std::monostate{}, {x}, bi, l);
        if (blk.use_bottleneck) {
          x = b.add(OpKind::Conv, ConvSpec{4 * blk.growth_rate, 1, 1, 0, false},
                    {x}, bi, l);
          x = b.add(OpKind::BatchNorm, std::monostate{}, {x}, bi, l);
          x = b.add(OpKind::Relu, std::monostate{}, {x}, bi, l);
        }
        x = b.add(OpKind::Conv, ConvSpec{blk.growth_rate, 3, 1, 1, false}, {x},
                  bi, l);
      } else {
        int width = harmonic_layer_width(blk.growth_rate, blk.multiplier, l);
        x = b.add(OpKind::Conv, ConvSpec{width, 3, 1, 1, false}, {x}, bi, l);
        x = b.add(OpKind::BatchNorm, std::monostate{}, {x}, bi, l);
        x = b.add(OpKind::Relu, std::monostate{}, {x}, bi, l);
      }
      layer_out[static_cast<size_t>(l)] = x;
    }

    std::vector<NodeId> outs;
    for (int j : block_output_layers(mode, blk.num_layers))
      outs.push_back(layer_out[static_cast<size_t>(j)]);
    cur = b.add(OpKind::Concat, std::monostate{}, outs, bi, std::nullopt);

    if (bi + 1 < n_blocks) {
      cur = b.add(OpKind::Conv,
                  ConvSpec{spec.channel_list[static_cast<size_t>(bi) + 1], 1, 1,
                           0, false},
                  {cur}, bi, std::nullopt);
      cur = b.add(OpKind::BatchNorm, std::monostate{}, {cur}, bi, std::nullopt);
      cur = b.add(OpKind::Relu, std::monostate{}, {cur}, bi, std::nullopt);
      if (blk.downsample_after)
        cur = b.add(OpKind::AvgPool, PoolAttrs{2, 2, 0}, {cur}, bi, std::nullopt);
    }
  }

  cur = b.add(OpKind::GlobalAvgPool, std::monostate{}, {cur});
  cur = b.add(OpKind::FullyConnected, FcAttrs{spec.classifier_classes}, {cur});
  b.add(OpKind::Output, std::monostate{}, {cur});
  return b.finish();
}

}  // namespace netprof
