#include "netprof/memplan.hpp"

#include <string>

#include "netprof/errors.hpp"

namespace netprof {

std::vector<int> liveness(const ComputeGraph& g) {
  const size_t n = g.nodes.size();
  std::vector<int> pos(n, 0);
  for (size_t i = 0; i < g.topo_order.size(); ++i)
    pos[static_cast<size_t>(g.topo_order[i])] = static_cast<int>(i);

  std::vector<int> last(n);
  for (size_t id = 0; id < n; ++id) {
    int die = pos[id];  // unconsumed values die at their own step
    for (NodeId c : g.consumers_of[id]) die = std::max(die, pos[static_cast<size_t>(c)]);
    last[id] = die;
  }
  return last;
}

Schedule schedule(const ComputeGraph& g) {
  const std::vector<int> last = liveness(g);
  Schedule s;
  s.steps.resize(g.topo_order.size());
  for (size_t i = 0; i < g.topo_order.size(); ++i)
    s.steps[i].node = g.topo_order[i];
  for (size_t id = 0; id < g.nodes.size(); ++id) {
    if (g.nodes[id].kind == OpKind::Output) continue;  // sinks own no buffer
    s.steps[static_cast<size_t>(last[id])].free_after.push_back(
        static_cast<NodeId>(id));
  }
  return s;
}

namespace {

std::int64_t value_bytes(const ComputeGraph& g, const ShapeMap& shapes, NodeId id) {
  if (g.node(id).kind == OpKind::Output) return 0;
  return 4 * shapes[static_cast<size_t>(id)].per_sample_elements();
}

}  // namespace

std::int64_t replay_peak_bytes(const ComputeGraph& g, const ShapeMap& shapes,
                               const Schedule& sched) {
  std::vector<bool> alive(g.nodes.size(), false);
  std::int64_t live = 0, peak = 0;
  for (const ScheduleStep& step : sched.steps) {
    for (NodeId p : g.inputs_of[static_cast<size_t>(step.node)])
      if (!alive[static_cast<size_t>(p)])
        throw InternalError("schedule safety: node " + std::to_string(step.node) +
                            " reads freed value " + std::to_string(p));
    if (g.node(step.node).kind != OpKind::Output) {
      alive[static_cast<size_t>(step.node)] = true;
      live += value_bytes(g, shapes, step.node);
    }
    peak = std::max(peak, live);
    for (NodeId v : step.free_after) {
      if (!alive[static_cast<size_t>(v)])
        throw InternalError("schedule safety: double free of value " +
                            std::to_string(v));
      alive[static_cast<size_t>(v)] = false;
      live -= value_bytes(g, shapes, v);
    }
  }
  return peak;
}

MemReport traffic(const ComputeGraph& g, const ShapeMap& shapes,
                  const CostReport& costs, const TrafficOptions& opts) {
  MemReport rep;
  rep.per_node.resize(g.nodes.size());
  for (NodeId id : g.topo_order) {
    const OpNode& nd = g.node(id);
    NodeTraffic& t = rep.per_node[static_cast<size_t>(id)];
    if (nd.kind == OpKind::Concat && !opts.materialize_concat) continue;
    std::int64_t read_el = costs.per_node[static_cast<size_t>(id)].params;
    for (NodeId p : g.inputs_of[static_cast<size_t>(id)])
      read_el += shapes[static_cast<size_t>(p)].per_sample_elements();
    std::int64_t write_el =
        nd.kind == OpKind::Output ? 0 : shapes[static_cast<size_t>(id)].per_sample_elements();
    t.read_bytes = 4 * read_el;
    t.write_bytes = 4 * write_el;
    rep.total_read_bytes += t.read_bytes;
    rep.total_write_bytes += t.write_bytes;
  }
  rep.memrw_mb =
      static_cast<double>(rep.total_read_bytes + rep.total_write_bytes) / 1e6;
  rep.peak_bytes = replay_peak_bytes(g, shapes, schedule(g));
  return rep;
}

}  // namespace netprof
