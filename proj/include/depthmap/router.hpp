#pragma once

#include "depthmap/architecture.hpp"
#include "depthmap/circuit.hpp"
#include "depthmap/dependency_graph.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"
#include "depthmap/mapping.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace depthmap {

enum class RoutingMode { DepthAware, GateCount };

[[nodiscard]] constexpr std::string_view to_string(RoutingMode mode) noexcept {
  return mode == RoutingMode::DepthAware ? "depth-aware" : "gate-count";
}

struct RoutingConfig {
  RoutingMode mode = RoutingMode::DepthAware;
  /// Open nodes expanded per A* step.
  std::size_t expand_width = 1;
  /// Extra SWAP levels searched past the first goal.
  std::size_t extra_depth = 0;
  /// Goal mappings collected for ranking.
  std::size_t max_candidates = 10;
  /// Remaining layers (counting the current one) merged into the score;
  /// nullopt merges the whole remaining circuit, 0 scores only the processed
  /// circuit plus the SWAPs.
  std::optional<std::size_t> lookahead_layers;
  std::uint64_t seed = 0;
  LatencyTable latencies;
  /// Safety valve on A* node expansions per layer.
  std::size_t max_expansions = 2'000'000;

  void validate() const {
    if (expand_width == 0) {
      throw Error("expand_width must be at least 1");
    }
    if (max_candidates == 0) {
      throw Error("max_candidates must be at least 1");
    }
    if (max_expansions == 0) {
      throw Error("max_expansions must be at least 1");
    }
  }
};

using SwapEdge = CouplingGraph::Edge;
using SwapSequence = std::vector<SwapEdge>;

struct Candidate {
  SwapSequence swaps;
  Mapping mapping;
};

/// Deterministic total order on SWAP sequences. Each coupling edge gets a
/// rank; seed 0 keeps the sorted edge order and any other seed shuffles it.
class SwapOrder {
public:
  SwapOrder(const CouplingGraph& graph, std::uint64_t seed)
      : edges_(graph.undirected_edges()) {
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      std::shuffle(edges_.begin(), edges_.end(), rng);
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      rank_[edges_[i]] = i;
    }
  }

  /// Edges in rank order.
  [[nodiscard]] const std::vector<SwapEdge>& edges() const noexcept {
    return edges_;
  }

  [[nodiscard]] std::size_t rank(SwapEdge edge) const {
    if (edge.first > edge.second) {
      std::swap(edge.first, edge.second);
    }
    return rank_.at(edge);
  }

  /// Fewer SWAPs first, then lexicographic by edge rank.
  [[nodiscard]] bool less(const SwapSequence& lhs, const SwapSequence& rhs) const {
    if (lhs.size() != rhs.size()) {
      return lhs.size() < rhs.size();
    }
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const auto l = rank(lhs[i]);
      const auto r = rank(rhs[i]);
      if (l != r) {
        return l < r;
      }
    }
    return false;
  }

private:
  std::vector<SwapEdge> edges_;
  std::map<SwapEdge, std::size_t> rank_;
};

[[nodiscard]] inline bool cnot_legal(const Mapping& mapping, Qubit control,
                                     Qubit target, const CouplingGraph& graph) {
  return graph.has_edge(mapping.physical(control), mapping.physical(target));
}

/// Two-qubit gates of a layer as logical operand pairs.
[[nodiscard]] inline std::vector<std::pair<Qubit, Qubit>>
interacting_pairs(std::span<const std::size_t> layer, const Circuit& circuit) {
  std::vector<std::pair<Qubit, Qubit>> pairs;
  for (const auto id : layer) {
    const auto& gate = circuit[id];
    if (is_two_qubit(gate.kind)) {
      pairs.emplace_back(gate.qubits[0], gate.qubits[1]);
    }
  }
  return pairs;
}

/// A reversed CNOT on a directed link counts as compliant; the rewrite adds
/// the Hadamard fixup.
[[nodiscard]] inline bool layer_compliant(std::span<const std::size_t> layer,
                                          const Circuit& circuit,
                                          const Mapping& mapping,
                                          const CouplingGraph& graph) {
  for (const auto& [a, b] : interacting_pairs(layer, circuit)) {
    if (!graph.adjacent(mapping.physical(a), mapping.physical(b))) {
      return false;
    }
  }
  return true;
}

namespace detail {

inline Gate with_latency(Gate gate, const LatencyTable& latencies) {
  gate.latency = latencies(gate.kind);
  return gate;
}

/// Physical gates for one logical gate under `mapping`. When `strict` is
/// false a two-qubit gate on non-adjacent qubits is relabelled as is, which
/// is how the lookahead treats gates that will need future SWAPs.
template <typename Sink>
void rewrite_gate(const Gate& gate, const Mapping& mapping,
                  const CouplingGraph& graph, const LatencyTable& latencies,
                  bool strict, Sink&& sink) {
  Gate physical = gate;
  for (auto& q : physical.qubits) {
    q = mapping.physical(q);
  }
  physical.latency = latencies(gate.kind);
  if (!is_two_qubit(gate.kind)) {
    sink(std::move(physical));
    return;
  }
  const auto a = physical.qubits[0];
  const auto b = physical.qubits[1];
  if (!graph.adjacent(a, b)) {
    if (strict) {
      throw Error("gate '" + to_string(gate) + "' is not hardware-compliant");
    }
    sink(std::move(physical));
    return;
  }
  if (gate.kind == GateKind::SWAP) {
    for (auto& part : decompose_swap(a, b, graph)) {
      sink(with_latency(std::move(part), latencies));
    }
    return;
  }
  if (graph.has_edge(a, b)) {
    sink(std::move(physical));
    return;
  }
  for (auto& part : reverse_cnot_fixup(a, b, graph)) {
    sink(with_latency(std::move(part), latencies));
  }
}

/// Consistent lower bound on the SWAPs still needed: a SWAP moves two
/// qubits by one hop each, so it shortens at most two pairs, each by one.
inline std::size_t swap_lower_bound(std::span<const std::pair<Qubit, Qubit>> pairs,
                                    const Mapping& mapping,
                                    const CouplingGraph& graph) {
  std::size_t sum = 0;
  std::size_t worst = 0;
  for (const auto& [a, b] : pairs) {
    const auto excess = graph.distance(mapping.physical(a), mapping.physical(b)) - 1;
    sum += excess;
    worst = std::max(worst, excess);
  }
  return std::max(worst, (sum + 1) / 2);
}

} // namespace detail

/// Physical gates for a compliant layer, in source order.
[[nodiscard]] inline std::vector<Gate>
rewrite_layer(std::span<const std::size_t> layer, const Circuit& circuit,
              const Mapping& mapping, const CouplingGraph& graph,
              const LatencyTable& latencies = {}) {
  std::vector<Gate> result;
  for (const auto id : layer) {
    detail::rewrite_gate(circuit[id], mapping, graph, latencies, true,
                         [&](Gate g) { result.push_back(std::move(g)); });
  }
  return result;
}

/// A* over mappings. Successors apply one SWAP on any coupling edge; cost is
/// the number of SWAPs. Goals are not expanded further. After the first goal
/// the search keeps going for goals up to `extra_depth` SWAPs deeper, until
/// `max_candidates` goals are collected. Candidates come back sorted by
/// `order.less`.
[[nodiscard]] inline std::vector<Candidate>
search_candidates(std::span<const std::size_t> layer, const Circuit& circuit,
                  const Mapping& mapping, const CouplingGraph& graph,
                  const RoutingConfig& config, const SwapOrder& order) {
  const auto pairs = interacting_pairs(layer, circuit);
  const auto is_goal = [&](const Mapping& m) {
    return std::all_of(pairs.begin(), pairs.end(), [&](const auto& pair) {
      return graph.adjacent(m.physical(pair.first), m.physical(pair.second));
    });
  };

  struct Node {
    Mapping mapping;
    SwapSequence swaps;
    std::size_t cost = 0;
    std::size_t estimate = 0;
  };
  std::vector<Node> nodes;
  // (f, insertion index) gives a deterministic min-heap.
  using Entry = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<Mapping, std::size_t, MappingHash> best_cost;
  std::unordered_set<Mapping, MappingHash> closed;

  const auto push = [&](Node node) {
    const auto f = node.cost + node.estimate;
    nodes.push_back(std::move(node));
    open.emplace(f, nodes.size() - 1);
  };
  push({mapping, {}, 0, detail::swap_lower_bound(pairs, mapping, graph)});
  best_cost[mapping] = 0;

  std::vector<Candidate> goals;
  std::vector<std::size_t> goal_costs;
  std::optional<std::size_t> bound;
  std::size_t expansions = 0;

  while (!open.empty() && goals.size() < config.max_candidates) {
    if (bound && open.top().first > *bound) {
      break;
    }
    if (expansions >= config.max_expansions) {
      if (goals.empty()) {
        throw SearchExhausted("A* expansion budget of " +
                              std::to_string(config.max_expansions) +
                              " exhausted");
      }
      break;
    }
    std::vector<std::size_t> batch;
    while (!open.empty() && batch.size() < config.expand_width) {
      const auto [f, index] = open.top();
      if (bound && f > *bound) {
        break;
      }
      open.pop();
      const auto& node = nodes[index];
      if (closed.contains(node.mapping) || node.cost > best_cost[node.mapping]) {
        continue;
      }
      closed.insert(node.mapping);
      batch.push_back(index);
    }
    for (const auto index : batch) {
      if (is_goal(nodes[index].mapping)) {
        const auto cost = nodes[index].cost;
        if (!bound || cost + config.extra_depth < *bound) {
          bound = cost + config.extra_depth;
        }
        if (cost <= *bound && goals.size() < config.max_candidates) {
          goals.push_back({nodes[index].swaps, nodes[index].mapping});
          goal_costs.push_back(cost);
        }
        continue;
      }
      ++expansions;
      for (const auto& edge : order.edges()) {
        const auto& parent = nodes[index];
        if (!parent.mapping.logical(edge.first) &&
            !parent.mapping.logical(edge.second)) {
          continue;
        }
        Mapping child = parent.mapping;
        child.swap_physical(edge.first, edge.second);
        const auto cost = parent.cost + 1;
        if (closed.contains(child)) {
          continue;
        }
        const auto it = best_cost.find(child);
        if (it != best_cost.end() && it->second <= cost) {
          continue;
        }
        best_cost[child] = cost;
        SwapSequence swaps = parent.swaps;
        swaps.push_back(edge);
        const auto estimate = detail::swap_lower_bound(pairs, child, graph);
        push({std::move(child), std::move(swaps), cost, estimate});
      }
    }
  }
  if (goals.empty()) {
    throw SearchExhausted("no compliant mapping reachable for layer");
  }
  std::vector<Candidate> result;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (goal_costs[i] <= *bound) {
      result.push_back(std::move(goals[i]));
    }
  }
  std::stable_sort(result.begin(), result.end(),
                   [&](const Candidate& lhs, const Candidate& rhs) {
                     return order.less(lhs.swaps, rhs.swaps);
                   });
  return result;
}

struct Ranking {
  std::size_t chosen = 0;
  /// Critical path of each candidate's trial circuit.
  std::vector<Cycle> scores;
};

/// Scores every candidate by the critical path of processed circuit +
/// decomposed SWAPs + remaining layers relabelled under the candidate's
/// mapping (no further SWAPs assumed). `processed` is the ASAP frontier of
/// the processed physical circuit. Lowest score wins; ties go to `order`.
[[nodiscard]] inline Ranking
rank_candidates(std::span<const Candidate> candidates,
                const ScheduleFrontier& processed, const Circuit& logical,
                std::span<const std::vector<std::size_t>> remaining,
                const CouplingGraph& graph, const RoutingConfig& config,
                const SwapOrder& order) {
  if (candidates.empty()) {
    throw Error("rank_candidates needs at least one candidate");
  }
  const auto window = config.lookahead_layers
                          ? std::min(*config.lookahead_layers, remaining.size())
                          : remaining.size();
  Ranking ranking;
  ranking.scores.reserve(candidates.size());
  for (const auto& candidate : candidates) {
    auto frontier = processed;
    for (const auto& [a, b] : candidate.swaps) {
      for (const auto& gate : decompose_swap(a, b, graph)) {
        frontier.push(gate.qubits, config.latencies(gate.kind));
      }
    }
    for (std::size_t l = 0; l < window; ++l) {
      for (const auto id : remaining[l]) {
        detail::rewrite_gate(logical[id], candidate.mapping, graph,
                             config.latencies, false,
                             [&](const Gate& g) { frontier.push(g); });
      }
    }
    ranking.scores.push_back(frontier.critical_path());
  }
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const auto best = ranking.chosen;
    if (ranking.scores[i] < ranking.scores[best] ||
        (ranking.scores[i] == ranking.scores[best] &&
         order.less(candidates[i].swaps, candidates[best].swaps))) {
      ranking.chosen = i;
    }
  }
  return ranking;
}

/// Same ranking starting from a processed physical circuit.
[[nodiscard]] inline Ranking
rank_candidates(std::span<const Candidate> candidates, const Circuit& processed,
                const Circuit& logical,
                std::span<const std::vector<std::size_t>> remaining,
                const CouplingGraph& graph, const RoutingConfig& config,
                const SwapOrder& order) {
  ScheduleFrontier frontier(graph.num_physical());
  for (const auto& gate : processed.gates()) {
    frontier.push(gate.qubits, config.latencies(gate.kind));
  }
  return rank_candidates(candidates, frontier, logical, remaining, graph,
                         config, order);
}

struct RoutingMetrics {
  std::size_t total_gates = 0;
  Cycle original_depth = 0;
  Cycle depth = 0;
  std::int64_t depth_delta = 0;
};

struct RoutingResult {
  /// Physical-qubit circuit with SWAPs decomposed.
  Circuit transformed;
  Mapping initial_mapping;
  Mapping final_mapping;
  std::size_t swaps_inserted = 0;
  RoutingMetrics metrics;
};

/// Snapshot handed to a RoutingObserver at each non-compliant layer.
struct RankingDecision {
  RoutingMode mode = RoutingMode::DepthAware;
  std::size_t layer_index = 0;
  std::span<const Candidate> candidates;
  /// Empty in GateCount mode, where ranking is bypassed.
  std::span<const Cycle> scores;
  std::size_t chosen = 0;
  /// Processed physical circuit before the SWAPs.
  const Circuit* processed = nullptr;
  const Circuit* logical = nullptr;
  std::span<const std::vector<std::size_t>> remaining;
};

using RoutingObserver = std::function<void(const RankingDecision&)>;

/// Gates that execute on hardware (barriers excluded).
[[nodiscard]] inline std::size_t executable_gate_count(const Circuit& circuit) {
  return circuit.size() - circuit.count(GateKind::Barrier);
}

/// Layer-by-layer routing: each layer that is not compliant under the
/// current mapping gets the SWAPs of the chosen candidate, then is rewritten
/// onto physical qubits.
[[nodiscard]] inline RoutingResult
route(const Circuit& circuit, const CouplingGraph& graph,
      const RoutingConfig& config,
      const std::optional<Mapping>& initial_mapping = std::nullopt,
      const RoutingObserver& observer = {}) {
  config.validate();
  if (circuit.num_qubits() > graph.num_physical()) {
    throw QubitCountExceeded(circuit.num_qubits(), graph.num_physical());
  }
  auto logical = circuit;
  logical.apply_latencies(config.latencies);
  const auto dag = build_dependency_graph(logical);
  const auto schedule = compute_schedule(dag, logical.latencies());
  const auto partition = partition_layers(dag, schedule);
  const std::span<const std::vector<std::size_t>> layers(partition.layers);

  RoutingResult result;
  result.initial_mapping =
      initial_mapping ? *initial_mapping
                      : Mapping::identity(circuit.num_qubits(), graph.num_physical());
  if (result.initial_mapping.num_logical() != circuit.num_qubits() ||
      result.initial_mapping.num_physical() != graph.num_physical()) {
    throw Error("initial mapping does not match circuit and architecture");
  }
  auto mapping = result.initial_mapping;
  const SwapOrder order(graph, config.seed);

  Circuit processed(graph.num_physical());
  ScheduleFrontier frontier(graph.num_physical());
  const auto emit = [&](Gate gate) {
    frontier.push(gate);
    processed.append(std::move(gate));
  };

  for (std::size_t index = 0; index < layers.size(); ++index) {
    const auto& layer = layers[index];
    if (!layer_compliant(layer, logical, mapping, graph)) {
      const auto candidates =
          search_candidates(layer, logical, mapping, graph, config, order);
      Ranking ranking;
      if (config.mode == RoutingMode::DepthAware) {
        ranking = rank_candidates(candidates, frontier, logical,
                                  layers.subspan(index), graph, config, order);
      }
      if (observer) {
        observer({config.mode, index, candidates, ranking.scores,
                  ranking.chosen, &processed, &logical, layers.subspan(index)});
      }
      const auto& chosen = candidates[ranking.chosen];
      for (const auto& [a, b] : chosen.swaps) {
        for (auto& gate : decompose_swap(a, b, graph)) {
          emit(detail::with_latency(std::move(gate), config.latencies));
        }
      }
      mapping = chosen.mapping;
      result.swaps_inserted += chosen.swaps.size();
    }
    for (auto& gate : rewrite_layer(layer, logical, mapping, graph, config.latencies)) {
      emit(std::move(gate));
    }
  }

  result.final_mapping = mapping;
  result.metrics.original_depth = schedule.critical_path;
  result.metrics.depth = circuit_depth(processed);
  result.metrics.depth_delta = static_cast<std::int64_t>(result.metrics.depth) -
                               static_cast<std::int64_t>(result.metrics.original_depth);
  result.metrics.total_gates = executable_gate_count(processed);
  result.transformed = std::move(processed);
  return result;
}

/// True when every two-qubit gate of `circuit` acts on a coupling edge with
/// an executable orientation.
[[nodiscard]] inline bool hardware_compliant(const Circuit& circuit,
                                             const CouplingGraph& graph) {
  return std::all_of(circuit.gates().begin(), circuit.gates().end(),
                     [&](const Gate& gate) {
                       if (gate.kind == GateKind::CNOT) {
                         return graph.has_edge(gate.qubits[0], gate.qubits[1]);
                       }
                       if (gate.kind == GateKind::SWAP) {
                         return graph.adjacent(gate.qubits[0], gate.qubits[1]);
                       }
                       return true;
                     });
}

} // namespace depthmap
