#pragma once

#include "netprof/config.hpp"
#include "netprof/graph.hpp"

namespace netprof {

// Connection mode per block with Auto collapsed: an Auto block goes harmonic
// iff its input channel count (channel_list entry) >= spec.threshold.
std::vector<BlockMode> resolve_modes(const NetworkSpec& spec);

// Largest n with 2^n dividing l.
int two_adic_valuation(int l);

// Layer input sets inside a block, ascending; index 0 is the block input.
// Both throw std::domain_error for layer < 1.
std::vector<int> dense_layer_inputs(int layer);     // {0, 1, ..., l-1}
std::vector<int> harmonic_layer_inputs(int layer);  // {l - 2^n : n >= 0, 2^n | l}

// Output channels of harmonic layer l: floor(k * m^nu2(l)). No even-snapping.
int harmonic_layer_width(int growth_rate, double multiplier, int layer);

// Layers concatenated into the block output, ascending and deduplicated.
// Dense: [0..L]; harmonic: {0} + odd layers + {L}. Mode must be resolved.
std::vector<int> block_output_layers(BlockMode mode, int num_layers);

// Lowers a validated spec into the full operator graph:
//   Input -> stem convs -> stem pool
//   per block: layers and concats per resolved mode, then (except after the
//   last block) transition conv 1x1 -> BN -> ReLU (-> avg pool 2x2 if
//   downsample_after)
//   -> GlobalAvgPool -> FullyConnected -> Output.
// Dense layer: BN-ReLU[-Conv1x1(4k)-BN-ReLU]-Conv3x3(k); harmonic layer:
// Conv3x3(width)-BN-ReLU. Concat inputs are ordered by ascending layer index.
ComputeGraph build_graph(const NetworkSpec& spec);

}  // namespace netprof
