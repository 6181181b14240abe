#pragma once

#include <string>

#include "netprof/graph.hpp"

namespace netprof {

// DOT text: one node per OpNode labeled with kind/attrs, one directed edge per
// graph edge, ordered by id so repeated exports are byte-identical.
std::string graph_to_dot(const ComputeGraph& graph, const std::string& name);

// Versioned JSON listing nodes and edges; round-trips through graph_from_json
// (equal node and edge multisets).
std::string graph_to_json(const ComputeGraph& graph, const std::string& name);
ComputeGraph graph_from_json(const std::string& text);  // throws ConfigError

}  // namespace netprof
