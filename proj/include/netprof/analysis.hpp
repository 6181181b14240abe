#pragma once

#include <string>
#include <vector>

#include "netprof/config.hpp"
#include "netprof/cost.hpp"
#include "netprof/memplan.hpp"
#include "netprof/shapes.hpp"

namespace netprof {

struct BlockSummary {
  int index = 0;  // 1-based, display order
  BlockMode mode = BlockMode::Dense;
  int num_layers = 0;
  int growth_rate = 0;
  int input_channels = 0;
  int input_h = 0;
  int input_w = 0;
  int output_channels = 0;  // block-output concat width
  friend bool operator==(const BlockSummary&, const BlockSummary&) = default;
};

struct AnalysisDocument {
  std::string tool_version;
  NetworkSpec spec;
  TensorShape input;
  std::vector<BlockMode> modes;
  std::vector<BlockSummary> blocks;
  CostReport cost;
  MemReport memory;
  friend bool operator==(const AnalysisDocument&, const AnalysisDocument&) = default;
};

// Builds the graph, propagates shapes and aggregates cost and memory reports
// for a square input of the given side length (batch 1, 3 channels).
AnalysisDocument analyze(const NetworkSpec& spec, int input_size,
                         const TrafficOptions& opts = {});

// Text and machine-readable renderings carry the same numbers; the JSON form
// round-trips losslessly through analysis_from_json.
std::string analysis_to_text(const AnalysisDocument& doc);
std::string analysis_to_json(const AnalysisDocument& doc);
AnalysisDocument analysis_from_json(const std::string& text);

// One comparison row per document, columns Params (M) / MACs (G) / FLOPs (G) /
// MemR+W (MB) with M = 1e6, G = 1e9, MB = 1e6 bytes.
std::string comparison_table(const std::vector<AnalysisDocument>& docs);

}  // namespace netprof
