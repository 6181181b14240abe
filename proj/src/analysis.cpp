#include "netprof/analysis.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "netprof/errors.hpp"
#include "netprof/topology.hpp"
#include "netprof/version.hpp"

namespace netprof {

using nlohmann::json;

namespace {

constexpr int kAnalysisSchemaVersion = 1;

AnalysisDocument analysis_from_json_impl(const json& j);

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// The block-output concat is the unique concat tagged with the block index
// and no layer index; its slot-0 input is the block input value.
NodeId block_output_concat(const ComputeGraph& g, int block) {
  for (const OpNode& nd : g.nodes)
    if (nd.kind == OpKind::Concat && nd.block_index == block && !nd.layer_index)
      return nd.id;
  throw InternalError("block " + std::to_string(block) + " has no output concat");
}

}  // namespace

AnalysisDocument analyze(const NetworkSpec& spec, int input_size,
                         const TrafficOptions& opts) {
  AnalysisDocument doc;
  doc.tool_version = kToolVersion;
  doc.spec = spec;
  doc.input = TensorShape{1, 3, input_size, input_size};
  doc.modes = resolve_modes(spec);

  ComputeGraph g = build_graph(spec);
  ShapeMap shapes = propagate(g, doc.input);
  doc.cost = network_cost(g, doc.input);
  doc.memory = traffic(g, shapes, doc.cost, opts);

  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    NodeId concat = block_output_concat(g, static_cast<int>(b));
    NodeId block_in = g.inputs_of[static_cast<size_t>(concat)].at(0);
    const TensorShape& in = shapes[static_cast<size_t>(block_in)];
    BlockSummary s;
    s.index = static_cast<int>(b) + 1;
    s.mode = doc.modes[b];
    s.num_layers = spec.blocks[b].num_layers;
    s.growth_rate = spec.blocks[b].growth_rate;
    s.input_channels = in.c;
    s.input_h = in.h;
    s.input_w = in.w;
    s.output_channels = shapes[static_cast<size_t>(concat)].c;
    doc.blocks.push_back(s);
  }
  return doc;
}

std::string analysis_to_text(const AnalysisDocument& doc) {
  std::ostringstream os;
  os << doc.tool_version << "\n";
  os << "network: " << doc.spec.name << "\n";
  os << "input: " << doc.input.n << "x" << doc.input.c << "x" << doc.input.h
     << "x" << doc.input.w << "\n";
  os << "classes: " << doc.spec.classifier_classes << "\n";
  os << "modes:";
  for (BlockMode m : doc.modes) os << " " << to_string(m);
  os << "\n";
  os << "depth: " << doc.cost.depth << "\n\n";

  char row[160];
  os << "block  mode       layers     k   in_ch  in_size    out_ch\n";
  for (const BlockSummary& b : doc.blocks) {
    std::snprintf(row, sizeof(row), "%5d  %-9s  %6d  %4d  %6d  %-9s %6d\n",
                  b.index, to_string(b.mode), b.num_layers, b.growth_rate,
                  b.input_channels,
                  (std::to_string(b.input_h) + "x" + std::to_string(b.input_w)).c_str(),
                  b.output_channels);
    os << row;
  }
  os << "\n";
  os << "Params (M):  " << fixed2(static_cast<double>(doc.cost.total_params) / 1e6) << "\n";
  os << "MACs (G):    " << fixed2(static_cast<double>(doc.cost.reported_macs) / 1e9) << "\n";
  os << "FLOPs (G):   " << fixed2(static_cast<double>(doc.cost.reported_flops) / 1e9) << "\n";
  os << "MemR+W (MB): " << fixed2(doc.memory.memrw_mb) << "\n";
  os << "Peak (MB):   " << fixed2(static_cast<double>(doc.memory.peak_bytes) / 1e6) << "\n";
  os << "\n";
  os << "params: " << doc.cost.total_params << "\n";
  os << "macc: " << doc.cost.total_macc << "\n";
  os << "read_bytes: " << doc.memory.total_read_bytes << "\n";
  os << "write_bytes: " << doc.memory.total_write_bytes << "\n";
  os << "peak_bytes: " << doc.memory.peak_bytes << "\n";
  return os.str();
}

std::string analysis_to_json(const AnalysisDocument& doc) {
  json blocks = json::array();
  for (const BlockSummary& b : doc.blocks)
    blocks.push_back(json{{"index", b.index},
                          {"mode", to_string(b.mode)},
                          {"layers", b.num_layers},
                          {"growth_rate", b.growth_rate},
                          {"input_channels", b.input_channels},
                          {"input_h", b.input_h},
                          {"input_w", b.input_w},
                          {"output_channels", b.output_channels}});
  json modes = json::array();
  for (BlockMode m : doc.modes) modes.push_back(to_string(m));

  json cost_nodes = json::array();
  for (size_t i = 0; i < doc.cost.per_node.size(); ++i)
    cost_nodes.push_back(json{{"id", i},
                              {"params", doc.cost.per_node[i].params},
                              {"macc", doc.cost.per_node[i].macc}});
  json mem_nodes = json::array();
  for (size_t i = 0; i < doc.memory.per_node.size(); ++i)
    mem_nodes.push_back(json{{"id", i},
                             {"read_bytes", doc.memory.per_node[i].read_bytes},
                             {"write_bytes", doc.memory.per_node[i].write_bytes}});

  json j{{"schema_version", kAnalysisSchemaVersion},
         {"tool", doc.tool_version},
         {"network", json::parse(serialize_config(doc.spec))},
         {"input", json{{"n", doc.input.n},
                        {"c", doc.input.c},
                        {"h", doc.input.h},
                        {"w", doc.input.w}}},
         {"modes", modes},
         {"blocks", blocks},
         {"cost", json{{"total_params", doc.cost.total_params},
                       {"total_macc", doc.cost.total_macc},
                       {"reported_flops", doc.cost.reported_flops},
                       {"reported_macs", doc.cost.reported_macs},
                       {"depth", doc.cost.depth},
                       {"per_node", cost_nodes}}},
         {"memory", json{{"total_read_bytes", doc.memory.total_read_bytes},
                         {"total_write_bytes", doc.memory.total_write_bytes},
                         {"memrw_mb", doc.memory.memrw_mb},
                         {"peak_bytes", doc.memory.peak_bytes},
                         {"per_node", mem_nodes}}}};
  return j.dump(2) + "\n";
}

AnalysisDocument analysis_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::Syntax, e.what());
  }
  if (!j.is_object() || j.value("schema_version", 0) != kAnalysisSchemaVersion)
    throw ConfigError(ConfigError::Kind::Schema,
                      "analysis: unsupported or missing schema_version");
  try {
    return analysis_from_json_impl(j);
  } catch (const json::exception& e) {
    throw ConfigError(ConfigError::Kind::Schema, std::string("analysis: ") + e.what());
  }
}

namespace {

AnalysisDocument analysis_from_json_impl(const json& j) {
  AnalysisDocument doc;
  doc.tool_version = j.at("tool").get<std::string>();
  doc.spec = parse_config(j.at("network").dump());
  const json& in = j.at("input");
  doc.input = TensorShape{in.at("n").get<int>(), in.at("c").get<int>(),
                          in.at("h").get<int>(), in.at("w").get<int>()};
  for (const json& m : j.at("modes")) {
    std::string s = m.get<std::string>();
    doc.modes.push_back(s == "dense" ? BlockMode::Dense
                        : s == "harmonic" ? BlockMode::Harmonic
                                          : BlockMode::Auto);
  }
  for (const json& b : j.at("blocks")) {
    BlockSummary s;
    s.index = b.at("index").get<int>();
    std::string m = b.at("mode").get<std::string>();
    s.mode = m == "dense" ? BlockMode::Dense
             : m == "harmonic" ? BlockMode::Harmonic
                               : BlockMode::Auto;
    s.num_layers = b.at("layers").get<int>();
    s.growth_rate = b.at("growth_rate").get<int>();
    s.input_channels = b.at("input_channels").get<int>();
    s.input_h = b.at("input_h").get<int>();
    s.input_w = b.at("input_w").get<int>();
    s.output_channels = b.at("output_channels").get<int>();
    doc.blocks.push_back(s);
  }
  const json& c = j.at("cost");
  doc.cost.total_params = c.at("total_params").get<std::int64_t>();
  doc.cost.total_macc = c.at("total_macc").get<std::int64_t>();
  doc.cost.reported_flops = c.at("reported_flops").get<std::int64_t>();
  doc.cost.reported_macs = c.at("reported_macs").get<std::int64_t>();
  doc.cost.depth = c.at("depth").get<int>();
  for (const json& n : c.at("per_node"))
    doc.cost.per_node.push_back(
        NodeCost{n.at("params").get<std::int64_t>(), n.at("macc").get<std::int64_t>()});
  const json& m = j.at("memory");
  doc.memory.total_read_bytes = m.at("total_read_bytes").get<std::int64_t>();
  doc.memory.total_write_bytes = m.at("total_write_bytes").get<std::int64_t>();
  doc.memory.memrw_mb = m.at("memrw_mb").get<double>();
  doc.memory.peak_bytes = m.at("peak_bytes").get<std::int64_t>();
  for (const json& n : m.at("per_node"))
    doc.memory.per_node.push_back(NodeTraffic{n.at("read_bytes").get<std::int64_t>(),
                                              n.at("write_bytes").get<std::int64_t>()});
  return doc;
}

}  // namespace

std::string comparison_table(const std::vector<AnalysisDocument>& docs) {
  std::ostringstream os;
  char row[200];
  std::snprintf(row, sizeof(row), "%-16s %11s %11s %11s %12s\n", "name",
                "Params (M)", "MACs (G)", "FLOPs (G)", "MemR+W (MB)");
  os << row;
  for (const AnalysisDocument& d : docs) {
    std::snprintf(row, sizeof(row), "%-16s %11.2f %11.2f %11.2f %12.2f\n",
                  d.spec.name.c_str(),
                  static_cast<double>(d.cost.total_params) / 1e6,
                  static_cast<double>(d.cost.reported_macs) / 1e9,
                  static_cast<double>(d.cost.reported_flops) / 1e9,
                  d.memory.memrw_mb);
    os << row;
  }
  return os.str();
}

}  // namespace netprof
