#include "netprof/export.hpp"

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "netprof/analysis.hpp"
#include "netprof/cost.hpp"
#include "netprof/errors.hpp"
#include "netprof/topology.hpp"
#include "testutil.hpp"

using namespace netprof;

namespace {

// minimal structural check of the DOT output: header, one statement per line,
// every statement a node or an edge, balanced braces
void check_dot_wellformed(const std::string& dot) {
  std::istringstream is(dot);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line.rfind("digraph ", 0) == 0);
  CHECK(line.back() == '{');
  bool closed = false;
  while (std::getline(is, line)) {
    if (line == "}") {
      closed = true;
      continue;
    }
    CHECK_FALSE(closed);
    if (line.find("->") != std::string::npos) {
      CHECK(line.find("n") != std::string::npos);
      CHECK(line.back() == ';');
    } else if (line.find('[') != std::string::npos) {
      CHECK(line.find(']') != std::string::npos);
      CHECK(line.back() == ';');
      CHECK(std::count(line.begin(), line.end(), '"') % 2 == 0);
    }
  }
  CHECK(closed);
}

}  // namespace

TEST_CASE("dot export is well-formed and deterministic") {
  ComputeGraph g = build_graph(preset("threshnet79"));
  std::string a = graph_to_dot(g, "threshnet79");
  std::string b = graph_to_dot(g, "threshnet79");
  CHECK(a == b);
  check_dot_wellformed(a);
  CHECK(a.find("fc -> 1000") != std::string::npos);
}

TEST_CASE("graph json round-trips") {
  auto roundtrip = [](const ComputeGraph& g, const std::string& name) {
    std::string text = graph_to_json(g, name);
    CHECK(text == graph_to_json(g, name));  // byte-stable
    ComputeGraph back = graph_from_json(text);
    REQUIRE(back.nodes.size() == g.nodes.size());
    CHECK(back.nodes == g.nodes);
    auto ea = g.edges;
    auto eb = back.edges;
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    CHECK(ea == eb);
    // the reloaded graph drives shape and cost analysis identically
    TensorShape input{1, 3, 64, 64};
    CHECK(propagate(back, input) == propagate(g, input));
    CHECK(network_cost(back, input) == network_cost(g, input));
  };
  for (const char* name : {"threshnet79", "densenet121"})
    roundtrip(build_graph(preset(name)), name);
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL})
    roundtrip(build_graph(testutil::random_spec(seed)), "random");
}

TEST_CASE("graph loader rejects malformed documents") {
  CHECK_THROWS_AS(graph_from_json("{"), ConfigError);
  CHECK_THROWS_AS(graph_from_json("{\"schema_version\": 9}"), ConfigError);
  // a cycle is a schema-level failure of the document, not an internal bug
  std::string cyclic = R"({
    "schema_version": 1, "tool": "x", "name": "c",
    "nodes": [{"id":0,"kind":"relu"},{"id":1,"kind":"relu"}],
    "edges": [{"from":0,"to":1,"slot":0},{"from":1,"to":0,"slot":0}]
  })";
  CHECK_THROWS_AS(graph_from_json(cyclic), ConfigError);
  // missing or mistyped attributes surface as schema errors too
  std::string noattrs = R"({
    "schema_version": 1, "tool": "x", "name": "c",
    "nodes": [{"id":0,"kind":"conv"}], "edges": []
  })";
  CHECK_THROWS_AS(graph_from_json(noattrs), ConfigError);
  std::string badtype = R"({
    "schema_version": 1, "tool": "x", "name": "c",
    "nodes": [{"id":0,"kind":"fc","classes":"many"}], "edges": []
  })";
  CHECK_THROWS_AS(graph_from_json(badtype), ConfigError);
}

TEST_CASE("analysis document round-trips and text matches json") {
  AnalysisDocument doc = analyze(preset("threshnet79"), 224);
  std::string js = analysis_to_json(doc);
  AnalysisDocument back = analysis_from_json(js);
  CHECK(back == doc);

  // the text report carries the same exact totals
  std::string text = analysis_to_text(doc);
  auto grab = [&text](const std::string& key) {
    auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stoll(text.substr(pos + key.size()));
  };
  CHECK(grab("params: ") == doc.cost.total_params);
  CHECK(grab("macc: ") == doc.cost.total_macc);
  CHECK(grab("read_bytes: ") == doc.memory.total_read_bytes);
  CHECK(grab("write_bytes: ") == doc.memory.total_write_bytes);
  CHECK(grab("peak_bytes: ") == doc.memory.peak_bytes);
  CHECK(text.find("depth: " + std::to_string(doc.cost.depth)) != std::string::npos);
}

TEST_CASE("comparison table lists one row per network") {
  std::vector<AnalysisDocument> docs = {analyze(preset("threshnet79"), 224),
                                        analyze(preset("densenet121"), 224)};
  std::string table = comparison_table(docs);
  CHECK(table.find("threshnet79") != std::string::npos);
  CHECK(table.find("densenet121") != std::string::npos);
  CHECK(table.find("Params (M)") != std::string::npos);
  CHECK(table.find("MACs (G)") != std::string::npos);
  CHECK(table.find("FLOPs (G)") != std::string::npos);
  CHECK(table.find("MemR+W (MB)") != std::string::npos);
}
