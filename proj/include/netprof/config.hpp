#pragma once

#include <string>
#include <vector>

namespace netprof {

enum class PoolKind { Max, Avg };

enum class BlockMode { Auto, Dense, Harmonic };

struct ConvSpec {
  int out_channels = 0;
  int kernel = 1;  // square
  int stride = 1;
  int padding = 0;
  bool has_bias = false;
  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

struct StemSpec {
  std::vector<ConvSpec> convs;  // pool follows the last conv
  int pool_kernel = 3;
  int pool_stride = 2;
  PoolKind pool_kind = PoolKind::Max;
  friend bool operator==(const StemSpec&, const StemSpec&) = default;
};

struct BlockSpec {
  int num_layers = 1;     // L
  int growth_rate = 1;    // k
  BlockMode mode = BlockMode::Auto;
  double multiplier = 1.0;      // m, harmonic width factor; unused for dense blocks
  bool use_bottleneck = false;  // dense only: 1x1(4k) + 3x3(k) pair vs single 3x3(k)
  bool downsample_after = true; // transition after this block ends with a 2x2 avg pool
  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

// Declarative network description. channel_list[i] is the input channel count
// of block i: the stem's final conv emits channel_list[0] and transition i emits
// channel_list[i+1]. The reduction rates are carried as metadata only; the
// explicit channel list drives every transition width.
struct NetworkSpec {
  std::string name;
  StemSpec stem;
  std::vector<BlockSpec> blocks;
  std::vector<int> channel_list;
  int threshold = 1;  // channels; Auto blocks go harmonic at input >= threshold
  double dense_reduction = 0.5;
  double harmonic_reduction = 0.85;
  int classifier_classes = 1000;
  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Violation {
  std::string field;
  std::string rule;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty result means the spec satisfies every invariant.
std::vector<Violation> validate(const NetworkSpec& spec);

// Built-in presets: "threshnet79", "threshnet95", "densenet121".
// Throws UnknownPresetError otherwise.
NetworkSpec preset(const std::string& name);

// JSON config document <-> NetworkSpec. parse_config throws ConfigError
// (syntax with position, schema violation, or invariant violation delegated
// to validate); parse_config(serialize_config(s)) == s for every valid s.
NetworkSpec parse_config(const std::string& text);
std::string serialize_config(const NetworkSpec& spec);

const char* to_string(PoolKind k);
const char* to_string(BlockMode m);

}  // namespace netprof
