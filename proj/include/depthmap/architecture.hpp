#pragma once

#include "depthmap/circuit.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifndef DEPTHMAP_DATA_DIR
#define DEPTHMAP_DATA_DIR "data"
#endif

namespace depthmap {

enum class Directionality { Bidirectional, Directed };

/// Physical connectivity. An edge (control, target) means a CNOT with that
/// orientation is executable. `distance` is measured on the undirected
/// skeleton in both modes.
class CouplingGraph {
public:
  using Edge = std::pair<Qubit, Qubit>;

  CouplingGraph() = default;

  /// Builds the graph and its distance matrix. In Bidirectional mode every
  /// listed pair is added in both orientations.
  CouplingGraph(std::size_t num_physical, const std::vector<Edge>& edges,
                Directionality directionality, std::string name = {})
      : num_physical_(num_physical), directionality_(directionality),
        name_(std::move(name)),
        adjacent_(num_physical, std::vector<bool>(num_physical, false)),
        directed_(num_physical, std::vector<bool>(num_physical, false)),
        neighbours_(num_physical) {
    if (num_physical == 0) {
      throw Error("coupling graph needs at least one qubit");
    }
    for (const auto& [a, b] : edges) {
      if (a >= num_physical || b >= num_physical || a == b) {
        throw Error("invalid coupling edge (" + std::to_string(a) + "," +
                    std::to_string(b) + ")");
      }
      directed_[a][b] = true;
      if (directionality == Directionality::Bidirectional) {
        directed_[b][a] = true;
      }
      if (!adjacent_[a][b]) {
        adjacent_[a][b] = adjacent_[b][a] = true;
        undirected_edges_.emplace_back(std::min(a, b), std::max(a, b));
      }
    }
    std::sort(undirected_edges_.begin(), undirected_edges_.end());
    for (const auto& [a, b] : undirected_edges_) {
      neighbours_[a].push_back(b);
      neighbours_[b].push_back(a);
    }
    for (auto& list : neighbours_) {
      std::sort(list.begin(), list.end());
    }
    compute_distances();
  }

  [[nodiscard]] std::size_t num_physical() const noexcept {
    return num_physical_;
  }
  [[nodiscard]] Directionality directionality() const noexcept {
    return directionality_;
  }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  /// CNOT(control, target) directly executable.
  [[nodiscard]] bool has_edge(Qubit control, Qubit target) const {
    return directed_[control][target];
  }
  [[nodiscard]] bool adjacent(Qubit a, Qubit b) const {
    return adjacent_[a][b];
  }
  [[nodiscard]] std::size_t distance(Qubit a, Qubit b) const {
    return distance_[a][b];
  }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>&
  distances() const noexcept {
    return distance_;
  }
  /// Undirected skeleton edges as sorted (min, max) pairs.
  [[nodiscard]] const std::vector<Edge>& undirected_edges() const noexcept {
    return undirected_edges_;
  }
  /// All executable orientations, sorted.
  [[nodiscard]] std::vector<Edge> directed_edges() const {
    std::vector<Edge> result;
    for (Qubit a = 0; a < num_physical_; ++a) {
      for (Qubit b = 0; b < num_physical_; ++b) {
        if (directed_[a][b]) {
          result.emplace_back(a, b);
        }
      }
    }
    return result;
  }
  [[nodiscard]] const std::vector<Qubit>& neighbours(Qubit q) const {
    return neighbours_[q];
  }

  friend bool operator==(const CouplingGraph& lhs, const CouplingGraph& rhs) {
    return lhs.num_physical_ == rhs.num_physical_ &&
           lhs.directionality_ == rhs.directionality_ &&
           lhs.directed_ == rhs.directed_;
  }

private:
  void compute_distances() {
    constexpr auto unreachable = std::numeric_limits<std::size_t>::max();
    distance_.assign(num_physical_,
                     std::vector<std::size_t>(num_physical_, unreachable));
    for (Qubit source = 0; source < num_physical_; ++source) {
      auto& row = distance_[source];
      row[source] = 0;
      std::queue<Qubit> frontier;
      frontier.push(source);
      while (!frontier.empty()) {
        const auto q = frontier.front();
        frontier.pop();
        for (const auto next : neighbours_[q]) {
          if (row[next] == unreachable) {
            row[next] = row[q] + 1;
            frontier.push(next);
          }
        }
      }
      if (std::find(row.begin(), row.end(), unreachable) != row.end()) {
        throw DisconnectedGraph();
      }
    }
  }

  std::size_t num_physical_ = 0;
  Directionality directionality_ = Directionality::Bidirectional;
  std::string name_;
  std::vector<std::vector<bool>> adjacent_;
  std::vector<std::vector<bool>> directed_;
  std::vector<std::vector<Qubit>> neighbours_;
  std::vector<Edge> undirected_edges_;
  std::vector<std::vector<std::size_t>> distance_;
};

/// Parses the line-oriented topology format:
///
///     qubits N
///     directed          (optional, before any edge)
///     a b               (one edge per line)
///
/// `#` starts a comment.
[[nodiscard]] inline CouplingGraph parse_topology(std::istream& in,
                                                  std::string name = {}) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> num_qubits;
  auto directionality = Directionality::Bidirectional;
  std::vector<CouplingGraph::Edge> edges;
  std::set<CouplingGraph::Edge> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) {
      continue;
    }
    std::string trailing;
    if (!num_qubits) {
      long long n = 0;
      if (first != "qubits" || !(fields >> n) || n <= 0 || (fields >> trailing)) {
        throw MalformedTopologyFile(lineno, "expected 'qubits N'");
      }
      num_qubits = static_cast<std::size_t>(n);
      continue;
    }
    if (first == "directed") {
      if (!edges.empty() || (fields >> trailing)) {
        throw MalformedTopologyFile(lineno,
                                    "'directed' must precede all edges");
      }
      directionality = Directionality::Directed;
      continue;
    }
    std::istringstream pair(line);
    long long a = -1;
    long long b = -1;
    if (!(pair >> a >> b) || (pair >> trailing)) {
      throw MalformedTopologyFile(lineno, "expected 'a b'");
    }
    if (a < 0 || b < 0 || a == b ||
        static_cast<std::size_t>(a) >= *num_qubits ||
        static_cast<std::size_t>(b) >= *num_qubits) {
      throw MalformedTopologyFile(lineno, "edge endpoint out of range");
    }
    const CouplingGraph::Edge edge{static_cast<Qubit>(a), static_cast<Qubit>(b)};
    if (seen.insert(edge).second) {
      edges.push_back(edge);
    }
  }
  if (!num_qubits) {
    throw MalformedTopologyFile(lineno, "missing 'qubits N' header");
  }
  return CouplingGraph(*num_qubits, edges, directionality, std::move(name));
}

/// Directory holding the builtin topology files. The DEPTHMAP_DATA_DIR
/// environment variable takes precedence over the compiled-in path.
[[nodiscard]] inline std::filesystem::path data_directory() {
  if (const char* env = std::getenv("DEPTHMAP_DATA_DIR"); env && *env) {
    return env;
  }
  return DEPTHMAP_DATA_DIR;
}

[[nodiscard]] inline std::vector<std::string> builtin_architectures() {
  return {"qx2-bidirectional", "ibm-q20-tokyo"};
}

[[nodiscard]] inline CouplingGraph
load_coupling_file(const std::filesystem::path& path, std::string name = {}) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open topology file '" + path.string() + "'");
  }
  return parse_topology(in, name.empty() ? path.stem().string() : name);
}

/// Resolves a builtin name to its shipped data file, otherwise treats the
/// argument as a path to a topology file.
[[nodiscard]] inline CouplingGraph load_coupling(const std::string& source) {
  const auto builtins = builtin_architectures();
  if (std::find(builtins.begin(), builtins.end(), source) != builtins.end()) {
    return load_coupling_file(
        data_directory() / "architectures" / (source + ".topo"), source);
  }
  return load_coupling_file(source);
}

/// CNOT between physical qubits `a` (control) and `b` (target).
[[nodiscard]] inline Gate physical_cnot(Qubit a, Qubit b) {
  Gate gate;
  gate.kind = GateKind::CNOT;
  gate.qubits = {a, b};
  gate.latency = default_latency(GateKind::CNOT);
  return gate;
}

[[nodiscard]] inline Gate physical_h(Qubit q) {
  Gate gate;
  gate.kind = GateKind::H;
  gate.qubits = {q};
  gate.latency = default_latency(GateKind::H);
  return gate;
}

/// CNOT(a, b) on a link that may only offer the b->a orientation.
[[nodiscard]] inline std::vector<Gate>
reverse_cnot_fixup(Qubit a, Qubit b, const CouplingGraph& graph) {
  if (graph.has_edge(a, b)) {
    return {physical_cnot(a, b)};
  }
  if (!graph.has_edge(b, a)) {
    throw NoDirectionAvailable(a, b);
  }
  return {physical_h(a), physical_h(b), physical_cnot(b, a), physical_h(a),
          physical_h(b)};
}

/// SWAP on the link {a, b} as CNOTs: three alternating CNOTs when both
/// orientations exist, otherwise the middle CNOT is reversed with Hadamards.
[[nodiscard]] inline std::vector<Gate> decompose_swap(Qubit a, Qubit b,
                                                      const CouplingGraph& graph) {
  if (a >= graph.num_physical() || b >= graph.num_physical() ||
      !graph.adjacent(a, b)) {
    throw NotAnEdge(a, b);
  }
  if (graph.has_edge(a, b) && graph.has_edge(b, a)) {
    return {physical_cnot(a, b), physical_cnot(b, a), physical_cnot(a, b)};
  }
  const auto control = graph.has_edge(a, b) ? a : b;
  const auto target = graph.has_edge(a, b) ? b : a;
  return {physical_cnot(control, target), physical_h(control),
          physical_h(target),            physical_cnot(control, target),
          physical_h(control),           physical_h(target),
          physical_cnot(control, target)};
}

} // namespace depthmap
