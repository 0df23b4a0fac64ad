#pragma once

#include "depthmap/circuit.hpp"
#include "depthmap/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace depthmap {

using Cycle = std::uint64_t;

/// Precedence DAG over gate ids. Only immediate per-qubit predecessors are
/// stored; the transitive closure is the full operand-sharing order.
struct DependencyGraph {
  std::vector<std::vector<std::size_t>> predecessors;
  std::vector<std::vector<std::size_t>> successors;

  [[nodiscard]] std::size_t num_nodes() const noexcept {
    return predecessors.size();
  }

  [[nodiscard]] std::size_t num_edges() const noexcept {
    std::size_t n = 0;
    for (const auto& preds : predecessors) {
      n += preds.size();
    }
    return n;
  }

  /// Edges as (predecessor, successor), sorted.
  [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> result;
    for (std::size_t node = 0; node < predecessors.size(); ++node) {
      for (const auto pred : predecessors[node]) {
        result.emplace_back(pred, node);
      }
    }
    std::sort(result.begin(), result.end());
    return result;
  }

  void add_edge(std::size_t from, std::size_t to) {
    auto& preds = predecessors[to];
    if (std::find(preds.begin(), preds.end(), from) == preds.end()) {
      preds.push_back(from);
      successors[from].push_back(to);
    }
  }
};

[[nodiscard]] inline DependencyGraph
build_dependency_graph(const Circuit& circuit) {
  DependencyGraph graph;
  graph.predecessors.resize(circuit.size());
  graph.successors.resize(circuit.size());
  std::vector<std::optional<std::size_t>> last_on_qubit(circuit.num_qubits());
  for (const auto& gate : circuit.gates()) {
    for (const auto q : gate.qubits) {
      if (last_on_qubit[q]) {
        graph.add_edge(*last_on_qubit[q], gate.id);
      }
      last_on_qubit[q] = gate.id;
    }
  }
  return graph;
}

struct Schedule {
  std::vector<Cycle> earliest_start;
  std::vector<unsigned> latency;
  Cycle critical_path = 0;
};

/// Longest-path schedule: nodes are visited in topological order (Kahn) and
/// each starts once all predecessors have finished.
[[nodiscard]] inline Schedule compute_schedule(const DependencyGraph& graph,
                                               std::span<const unsigned> latencies) {
  const auto n = graph.num_nodes();
  if (latencies.size() != n) {
    throw Error("latency count does not match the dependency graph");
  }
  Schedule schedule;
  schedule.earliest_start.assign(n, 0);
  schedule.latency.assign(latencies.begin(), latencies.end());

  std::vector<std::size_t> indegree(n);
  std::vector<std::size_t> ready;
  for (std::size_t node = 0; node < n; ++node) {
    indegree[node] = graph.predecessors[node].size();
    if (indegree[node] == 0) {
      ready.push_back(node);
    }
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const auto node = ready.back();
    ready.pop_back();
    ++visited;
    Cycle start = 0;
    for (const auto pred : graph.predecessors[node]) {
      start = std::max(start, schedule.earliest_start[pred] + latencies[pred]);
    }
    schedule.earliest_start[node] = start;
    schedule.critical_path =
        std::max(schedule.critical_path, start + latencies[node]);
    for (const auto succ : graph.successors[node]) {
      if (--indegree[succ] == 0) {
        ready.push_back(succ);
      }
    }
  }
  if (visited != n) {
    throw CycleDetected();
  }
  return schedule;
}

struct LayerPartition {
  std::vector<std::vector<std::size_t>> layers;

  [[nodiscard]] std::size_t size() const noexcept { return layers.size(); }
};

/// Groups gates by earliest start. Zero-latency gates (barriers) share a
/// start cycle with their successors, so within one cycle gates are further
/// split by the length of the zero-latency chain that precedes them. Gate
/// order inside a layer follows the source circuit.
[[nodiscard]] inline LayerPartition partition_layers(const DependencyGraph& graph,
                                                     const Schedule& schedule) {
  const auto n = graph.num_nodes();
  std::vector<std::size_t> zero_rank(n, 0);
  // Predecessors always have smaller ids, so id order is topological.
  for (std::size_t node = 0; node < n; ++node) {
    for (const auto pred : graph.predecessors[node]) {
      if (schedule.latency[pred] == 0 &&
          schedule.earliest_start[pred] == schedule.earliest_start[node]) {
        zero_rank[node] = std::max(zero_rank[node], zero_rank[pred] + 1);
      }
    }
  }
  std::map<std::pair<Cycle, std::size_t>, std::vector<std::size_t>> buckets;
  for (std::size_t node = 0; node < n; ++node) {
    buckets[{schedule.earliest_start[node], zero_rank[node]}].push_back(node);
  }
  LayerPartition partition;
  partition.layers.reserve(buckets.size());
  for (auto& [key, gates] : buckets) {
    partition.layers.push_back(std::move(gates));
  }
  return partition;
}

[[nodiscard]] inline Cycle circuit_depth(const Circuit& circuit) {
  const auto latencies = circuit.latencies();
  return compute_schedule(build_dependency_graph(circuit), latencies)
      .critical_path;
}

/// Incremental ASAP schedule over a growing gate list: tracks when each
/// qubit becomes free. Pushing gates in order yields the same critical path
/// as `compute_schedule` over the concatenated circuit.
class ScheduleFrontier {
public:
  ScheduleFrontier() = default;
  explicit ScheduleFrontier(std::size_t num_qubits) : ready_(num_qubits, 0) {}

  /// Returns the start cycle assigned to the gate.
  Cycle push(std::span<const Qubit> qubits, unsigned latency) {
    Cycle start = 0;
    for (const auto q : qubits) {
      start = std::max(start, ready_[q]);
    }
    const Cycle finish = start + latency;
    for (const auto q : qubits) {
      ready_[q] = finish;
    }
    critical_path_ = std::max(critical_path_, finish);
    return start;
  }

  Cycle push(const Gate& gate) { return push(gate.qubits, gate.latency); }

  [[nodiscard]] Cycle critical_path() const noexcept { return critical_path_; }
  [[nodiscard]] Cycle ready(Qubit q) const { return ready_[q]; }

private:
  std::vector<Cycle> ready_;
  Cycle critical_path_ = 0;
};

} // namespace depthmap
