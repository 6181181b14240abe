#pragma once

// Shared fixtures for the unit and acceptance suites: a seeded generator of
// valid NetworkSpecs, bare block graphs for connectivity/liveness checks, and
// small structural queries over built graphs.

#include <algorithm>
#include <vector>

#include "netprof/config.hpp"
#include "netprof/graph.hpp"
#include "netprof/refexec.hpp"
#include "netprof/topology.hpp"

namespace netprof::testutil {

// Uniform integer in [lo, hi] from a splitmix64 stream.
inline int pick(SplitMix64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Random valid spec. With buildable=true the result is also small enough to
// execute at a 32x32 input (at most 3 blocks, at most 2 downsamples).
inline NetworkSpec random_spec(std::uint64_t seed, bool buildable = true) {
  SplitMix64 rng{seed};
  NetworkSpec s;
  s.name = "random" + std::to_string(seed);

  int stem_convs = pick(rng, 1, 2);
  int c0 = pick(rng, 4, 16);
  int stem_out = pick(rng, 4, buildable ? 24 : 64);
  for (int i = 0; i < stem_convs; ++i) {
    ConvSpec c;
    c.out_channels = i + 1 == stem_convs ? stem_out : c0;
    if (buildable) {
      c.kernel = 3;
      c.padding = 1;
    } else {
      const int kernels[3] = {1, 3, 7};
      c.kernel = kernels[pick(rng, 0, 2)];
      c.padding = pick(rng, 0, 3);
    }
    c.stride = i == 0 ? 2 : 1;
    c.has_bias = !buildable && rng.next() % 2 == 0;
    s.stem.convs.push_back(c);
  }
  s.stem.pool_kernel = 3;
  s.stem.pool_stride = 2;
  s.stem.pool_kind = rng.next() % 2 == 0 ? PoolKind::Max : PoolKind::Avg;

  int n_blocks = pick(rng, 1, 3);
  int pools_left = 2;
  for (int i = 0; i < n_blocks; ++i) {
    BlockSpec b;
    b.num_layers = pick(rng, 1, buildable ? 5 : 8);
    b.growth_rate = pick(rng, 2, buildable ? 12 : 48);
    int m = pick(rng, 0, 2);
    b.mode = m == 0 ? BlockMode::Auto : m == 1 ? BlockMode::Dense : BlockMode::Harmonic;
    b.multiplier = 1.0 + pick(rng, 2, 9) / 10.0;  // (1, 2]
    b.use_bottleneck = rng.next() % 2 == 0;
    b.downsample_after = pools_left > 0 && rng.next() % 2 == 0;
    if (b.downsample_after) --pools_left;
    s.blocks.push_back(b);
    s.channel_list.push_back(i == 0 ? stem_out : pick(rng, 4, 32));
  }
  s.threshold = pick(rng, 4, 40);
  const double reductions[3] = {0.5, 0.85, 1.0};
  s.dense_reduction = reductions[pick(rng, 0, 2)];
  s.harmonic_reduction = reductions[pick(rng, 0, 2)];
  s.classifier_classes = pick(rng, 2, 10);
  return s;
}

// A block in isolation: Input -> layers (one conv of `width` channels each,
// wired per the mode's input-set rule) -> Output from the final layer, or from
// the mode's output concat when with_output_concat is set. Every layer conv is
// tagged (block 0, layer l) so edge queries work the same as in full graphs.
inline ComputeGraph bare_block_graph(BlockMode mode, int num_layers, int k0,
                                     int width, bool with_output_concat) {
  GraphBuilder b;
  std::vector<NodeId> layer_out(static_cast<size_t>(num_layers) + 1);
  NodeId input = b.add(OpKind::Input, std::monostate{}, {});
  // widen the block input to k0 channels so shapes are controllable
  layer_out[0] = b.add(OpKind::Conv, ConvSpec{k0, 1, 1, 0, false}, {input});
  for (int l = 1; l <= num_layers; ++l) {
    auto in_layers = mode == BlockMode::Dense ? dense_layer_inputs(l)
                                              : harmonic_layer_inputs(l);
    std::vector<NodeId> ins;
    for (int j : in_layers) ins.push_back(layer_out[static_cast<size_t>(j)]);
    NodeId in = ins.size() == 1
                    ? ins[0]
                    : b.add(OpKind::Concat, std::monostate{}, ins, 0, l);
    layer_out[static_cast<size_t>(l)] =
        b.add(OpKind::Conv, ConvSpec{width, 3, 1, 1, false}, {in}, 0, l);
  }
  NodeId last = layer_out[static_cast<size_t>(num_layers)];
  if (with_output_concat) {
    std::vector<NodeId> outs;
    for (int j : block_output_layers(mode, num_layers))
      outs.push_back(layer_out[static_cast<size_t>(j)]);
    last = b.add(OpKind::Concat, std::monostate{}, outs, 0, std::nullopt);
  }
  b.add(OpKind::Output, std::monostate{}, {last});
  return b.finish();
}

// Edges arriving at layer `l` of block `b` from outside that layer: the
// block's layer-to-layer connectivity, one edge per consumed predecessor.
inline int layer_fanin_edges(const ComputeGraph& g, int block, int layer) {
  int count = 0;
  for (const Edge& e : g.edges) {
    const OpNode& c = g.node(e.consumer);
    if (c.block_index != block || c.layer_index != layer) continue;
    const OpNode& p = g.node(e.producer);
    if (p.block_index == block && p.layer_index == layer) continue;
    ++count;
  }
  return count;
}

inline int block_fanin_edges(const ComputeGraph& g, int block, int num_layers) {
  int total = 0;
  for (int l = 1; l <= num_layers; ++l) total += layer_fanin_edges(g, block, l);
  return total;
}

inline NodeId find_block_output_concat(const ComputeGraph& g, int block) {
  for (const OpNode& nd : g.nodes)
    if (nd.kind == OpKind::Concat && nd.block_index == block && !nd.layer_index)
      return nd.id;
  return -1;
}

// The node producing the value that layer `layer` of block `block` emits
// (the last node tagged with that block/layer pair).
inline NodeId layer_output_node(const ComputeGraph& g, int block, int layer) {
  NodeId found = -1;
  for (const OpNode& nd : g.nodes)
    if (nd.block_index == block && nd.layer_index == layer) found = nd.id;
  return found;
}

// Single-block network spec around the given block parameters.
inline NetworkSpec single_block_spec(BlockMode mode, int num_layers, int k,
                                     double multiplier, bool bottleneck,
                                     int input_channels) {
  NetworkSpec s;
  s.name = "single";
  s.stem.convs = {ConvSpec{input_channels, 3, 2, 1, false}};
  BlockSpec b;
  b.num_layers = num_layers;
  b.growth_rate = k;
  b.mode = mode;
  b.multiplier = multiplier;
  b.use_bottleneck = bottleneck;
  b.downsample_after = false;
  s.blocks.push_back(b);
  s.channel_list = {input_channels};
  s.threshold = 320;
  s.classifier_classes = 10;
  return s;
}

}  // namespace netprof::testutil
