#include "netprof/export.hpp"

#include <sstream>

#include "json.hpp"
#include "netprof/errors.hpp"
#include "netprof/version.hpp"

namespace netprof {

using nlohmann::json;

namespace {

constexpr int kGraphSchemaVersion = 1;

std::string node_label(const OpNode& nd) {
  std::ostringstream os;
  switch (nd.kind) {
    case OpKind::Conv: {
      const ConvSpec& c = std::get<ConvSpec>(nd.attrs);
      os << "conv " << c.kernel << "x" << c.kernel << " s" << c.stride << " p"
         << c.padding << " -> " << c.out_channels;
      if (c.has_bias) os << " +b";
      break;
    }
    case OpKind::AvgPool:
    case OpKind::MaxPool: {
      const PoolAttrs& p = std::get<PoolAttrs>(nd.attrs);
      os << (nd.kind == OpKind::MaxPool ? "maxpool " : "avgpool ") << p.kernel
         << "x" << p.kernel << " s" << p.stride;
      if (p.padding > 0) os << " p" << p.padding;
      break;
    }
    case OpKind::FullyConnected:
      os << "fc -> " << std::get<FcAttrs>(nd.attrs).classes;
      break;
    default:
      os << to_string(nd.kind);
      break;
  }
  if (nd.block_index) {
    os << "\\nb" << *nd.block_index;
    if (nd.layer_index) os << " l" << *nd.layer_index;
  }
  return os.str();
}

}  // namespace

std::string graph_to_dot(const ComputeGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const OpNode& nd : g.nodes)
    os << "  n" << nd.id << " [label=\"" << node_label(nd) << "\"];\n";
  std::vector<Edge> edges = g.edges;
  std::sort(edges.begin(), edges.end());
  for (const Edge& e : edges) {
    os << "  n" << e.producer << " -> n" << e.consumer;
    if (g.inputs_of[static_cast<size_t>(e.consumer)].size() > 1)
      os << " [label=\"" << e.slot << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string graph_to_json(const ComputeGraph& g, const std::string& name) {
  json nodes = json::array();
  for (const OpNode& nd : g.nodes) {
    json n{{"id", nd.id}, {"kind", to_string(nd.kind)}};
    if (const ConvSpec* c = std::get_if<ConvSpec>(&nd.attrs)) {
      n["out_channels"] = c->out_channels;
      n["kernel"] = c->kernel;
      n["stride"] = c->stride;
      n["padding"] = c->padding;
      n["has_bias"] = c->has_bias;
    } else if (const PoolAttrs* p = std::get_if<PoolAttrs>(&nd.attrs)) {
      n["kernel"] = p->kernel;
      n["stride"] = p->stride;
      n["padding"] = p->padding;
    } else if (const FcAttrs* f = std::get_if<FcAttrs>(&nd.attrs)) {
      n["classes"] = f->classes;
    }
    if (nd.block_index) n["block"] = *nd.block_index;
    if (nd.layer_index) n["layer"] = *nd.layer_index;
    nodes.push_back(n);
  }
  json edges = json::array();
  std::vector<Edge> sorted = g.edges;
  std::sort(sorted.begin(), sorted.end());
  for (const Edge& e : sorted)
    edges.push_back(json{{"from", e.producer}, {"to", e.consumer}, {"slot", e.slot}});
  json j{{"schema_version", kGraphSchemaVersion},
         {"tool", kToolVersion},
         {"name", name},
         {"nodes", nodes},
         {"edges", edges}};
  return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void load_fail(const std::string& msg) {
  throw ConfigError(ConfigError::Kind::Schema, "graph: " + msg);
}

OpKind kind_from_string(const std::string& s) {
  for (OpKind k : {OpKind::Input, OpKind::Conv, OpKind::BatchNorm, OpKind::Relu,
                   OpKind::Concat, OpKind::AvgPool, OpKind::MaxPool,
                   OpKind::GlobalAvgPool, OpKind::FullyConnected, OpKind::Output})
    if (s == to_string(k)) return k;
  load_fail("unknown node kind \"" + s + "\"");
}

}  // namespace

ComputeGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigError::Kind::Syntax, e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges") ||
      !j.contains("schema_version"))
    load_fail("expected an object with schema_version, nodes and edges");
  if (j["schema_version"].get<int>() != kGraphSchemaVersion)
    load_fail("unsupported schema_version");

  std::vector<OpNode> nodes(j["nodes"].size());
  std::vector<Edge> edges;
  try {
    for (const json& n : j["nodes"]) {
      if (!n.contains("id") || !n.contains("kind")) load_fail("node without id/kind");
      OpNode nd;
      nd.id = n["id"].get<int>();
      nd.kind = kind_from_string(n["kind"].get<std::string>());
      switch (nd.kind) {
        case OpKind::Conv:
          nd.attrs = ConvSpec{n.at("out_channels").get<int>(), n.at("kernel").get<int>(),
                              n.at("stride").get<int>(), n.at("padding").get<int>(),
                              n.at("has_bias").get<bool>()};
          break;
        case OpKind::AvgPool:
        case OpKind::MaxPool:
          nd.attrs = PoolAttrs{n.at("kernel").get<int>(), n.at("stride").get<int>(),
                               n.at("padding").get<int>()};
          break;
        case OpKind::FullyConnected:
          nd.attrs = FcAttrs{n.at("classes").get<int>()};
          break;
        default:
          break;
      }
      if (n.contains("block")) nd.block_index = n["block"].get<int>();
      if (n.contains("layer")) nd.layer_index = n["layer"].get<int>();
      if (nd.id < 0 || nd.id >= static_cast<int>(nodes.size()))
        load_fail("node ids must be dense 0..n-1");
      nodes[static_cast<size_t>(nd.id)] = nd;
    }
    for (const json& e : j["edges"])
      edges.push_back(Edge{e.at("from").get<int>(), e.at("to").get<int>(),
                           e.at("slot").get<int>()});
  } catch (const json::exception& e) {
    load_fail(e.what());  // wrong type or missing attribute
  }
  try {
    return finalize_graph(std::move(nodes), std::move(edges));
  } catch (const InternalError& e) {
    load_fail(e.what());  // malformed document, not an artifact bug
  }
}

}  // namespace netprof
