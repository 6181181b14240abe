#pragma once

#include <cstdint>
#include <vector>

#include "netprof/cost.hpp"
#include "netprof/graph.hpp"
#include "netprof/shapes.hpp"

namespace netprof {

// A tensor value is identified by the id of the node producing it; Output
// sinks produce no value.

struct ScheduleStep {
  NodeId node = -1;
  std::vector<NodeId> free_after;  // values whose last consumer is this step
};

struct Schedule {
  std::vector<ScheduleStep> steps;  // order equals topo_order
};

// For every value, the topo position of its last consumer (values feeding the
// Output sink die at the final step; values with no consumer die at their own
// step). Indexed by producer node id; the Output sink's slot is its own position.
std::vector<int> liveness(const ComputeGraph& graph);

// Execution in topo order with free_after at step t holding exactly the values
// whose last consumer is t. Every value appears in exactly one free_after set.
Schedule schedule(const ComputeGraph& graph);

struct NodeTraffic {
  std::int64_t read_bytes = 0;
  std::int64_t write_bytes = 0;
  friend bool operator==(const NodeTraffic&, const NodeTraffic&) = default;
};

struct MemReport {
  std::vector<NodeTraffic> per_node;  // indexed by node id
  std::int64_t total_read_bytes = 0;
  std::int64_t total_write_bytes = 0;
  double memrw_mb = 0.0;  // (reads + writes) / 1e6
  std::int64_t peak_bytes = 0;
  friend bool operator==(const MemReport&, const MemReport&) = default;
};

struct TrafficOptions {
  // With false, concat nodes contribute no traffic (view semantics). Byte
  // accounting only; the peak replay always models materialized buffers.
  bool materialize_concat = true;
};

// Per node: read = 4*(sum of input elements + params), write = 4*(output
// elements), batch 1, float32. Weights are read once per node execution.
// peak_bytes replays schedule(graph), allocating each value at its step and
// freeing per free_after; the replay throws InternalError if a step would
// read an already-freed value.
MemReport traffic(const ComputeGraph& graph, const ShapeMap& shapes,
                  const CostReport& costs, const TrafficOptions& opts = {});

// Exposed for schedule-safety checks: peak resident bytes under an arbitrary
// schedule. Throws InternalError on any read-after-free or double free.
std::int64_t replay_peak_bytes(const ComputeGraph& graph, const ShapeMap& shapes,
                               const Schedule& sched);

}  // namespace netprof
