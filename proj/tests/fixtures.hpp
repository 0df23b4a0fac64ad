#pragma once

// Scenario builders and brute-force oracles shared by the unit tests and the
// acceptance binary. The oracles deliberately avoid the library's own
// scheduling, search and simulation code.

#include "depthmap/depthmap.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace depthmap;

inline std::filesystem::path benchmark_dir() { return DEPTHMAP_BENCHMARK_DIR; }

/// Benchmark files sorted by name.
inline std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(benchmark_dir())) {
    if (entry.path().extension() == ".qasm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline CouplingGraph qx2() { return load_coupling("qx2-bidirectional"); }
inline CouplingGraph tokyo() { return load_coupling("ibm-q20-tokyo"); }

inline void repeat(Circuit& c, GateKind kind, Qubit q, std::size_t times) {
  for (std::size_t i = 0; i < times; ++i) {
    c.add(kind, {q});
  }
}

/// Motivation scenario on QX2 (0-indexed, identity mapping). q1 runs six H
/// gates, then needs CNOT(q1,q4), which has no link, then four more H gates.
/// q0 runs ten H gates and then CNOT(q0,q2). Unrouted depth is 11.
///
/// The cheapest fix is SWAP(1,2), but it has to wait for q1 and pushes the
/// CNOT to cycle 9. Moving q4 instead with SWAP(2,4) can start at cycle 0,
/// and the resulting conflict for CNOT(q0,q2) is fixed later with another
/// SWAP that hides under q1's tail.
inline Circuit motivation_circuit() {
  Circuit c(5);
  repeat(c, GateKind::H, 1, 6);
  c.add(GateKind::CNOT, {1, 4});
  repeat(c, GateKind::H, 1, 4);
  repeat(c, GateKind::H, 0, 10);
  c.add(GateKind::CNOT, {0, 2});
  return c;
}

/// Single blocked CNOT(q1,q4) after six H gates on q1, plus a short tail.
inline Circuit blocked_cnot_circuit() {
  Circuit c(5);
  repeat(c, GateKind::H, 1, 6);
  c.add(GateKind::CNOT, {1, 4});
  repeat(c, GateKind::H, 1, 2);
  return c;
}

/// 4-cycle 0-1-2-3-0.
inline CouplingGraph ring4() {
  return CouplingGraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                       Directionality::Bidirectional, "ring4");
}

/// Lookahead scenario on ring4: every qubit runs one H, then CNOT(q0,q2)
/// is blocked. q1 still has six H gates to go, q3 three.
inline Circuit lookahead_circuit() {
  Circuit c(4);
  for (Qubit q = 0; q < 4; ++q) {
    c.add(GateKind::H, {q});
  }
  c.add(GateKind::CNOT, {0, 2});
  repeat(c, GateKind::H, 1, 6);
  repeat(c, GateKind::H, 3, 3);
  return c;
}

// ---------------------------------------------------------------- oracles

/// Longest latency-weighted path, by memoised recursion over the full
/// "earlier gate shares a qubit" relation.
inline std::uint64_t brute_force_depth(const Circuit& c) {
  const auto n = c.size();
  std::vector<std::int64_t> finish(n, -1);
  std::function<std::uint64_t(std::size_t)> end_of = [&](std::size_t g) {
    if (finish[g] >= 0) {
      return static_cast<std::uint64_t>(finish[g]);
    }
    std::uint64_t start = 0;
    for (std::size_t p = 0; p < g; ++p) {
      const auto& a = c[p].qubits;
      const auto& b = c[g].qubits;
      const bool shares = std::any_of(a.begin(), a.end(), [&](Qubit q) {
        return std::find(b.begin(), b.end(), q) != b.end();
      });
      if (shares) {
        start = std::max(start, end_of(p));
      }
    }
    finish[g] = static_cast<std::int64_t>(start + c[g].latency);
    return start + c[g].latency;
  };
  std::uint64_t depth = 0;
  for (std::size_t g = 0; g < n; ++g) {
    depth = std::max(depth, end_of(g));
  }
  return depth;
}

/// Minimum SWAP count that makes every pair adjacent, by BFS over the
/// placements of all physical qubit contents.
inline std::size_t bfs_min_swaps(const std::vector<std::pair<Qubit, Qubit>>& pairs,
                                 const std::vector<Qubit>& log2phys,
                                 std::size_t num_physical,
                                 const std::vector<std::pair<Qubit, Qubit>>& edges) {
  // State: contents of each physical slot (logical index, or -1).
  std::vector<int> start(num_physical, -1);
  for (std::size_t l = 0; l < log2phys.size(); ++l) {
    start[log2phys[l]] = static_cast<int>(l);
  }
  std::set<std::pair<Qubit, Qubit>> links;
  for (auto [a, b] : edges) {
    links.insert({std::min(a, b), std::max(a, b)});
  }
  const auto done = [&](const std::vector<int>& state) {
    std::vector<Qubit> where(log2phys.size());
    for (std::size_t p = 0; p < state.size(); ++p) {
      if (state[p] >= 0) {
        where[static_cast<std::size_t>(state[p])] = p;
      }
    }
    for (auto [x, y] : pairs) {
      const auto a = std::min(where[x], where[y]);
      const auto b = std::max(where[x], where[y]);
      if (!links.contains({a, b})) {
        return false;
      }
    }
    return true;
  };
  std::map<std::vector<int>, std::size_t> seen{{start, 0}};
  std::deque<std::vector<int>> queue{start};
  while (!queue.empty()) {
    auto state = queue.front();
    queue.pop_front();
    const auto d = seen[state];
    if (done(state)) {
      return d;
    }
    for (auto [a, b] : links) {
      auto next = state;
      std::swap(next[a], next[b]);
      if (seen.emplace(next, d + 1).second) {
        queue.push_back(std::move(next));
      }
    }
  }
  return static_cast<std::size_t>(-1);
}

/// Random connected undirected graph: a random spanning tree plus extra
/// edges with probability `extra`.
template <typename Rng>
std::vector<std::pair<Qubit, Qubit>> random_connected_edges(std::size_t n, Rng& rng,
                                                            double extra = 0.3) {
  std::vector<Qubit> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  std::shuffle(order.begin(), order.end(), rng);
  std::set<std::pair<Qubit, Qubit>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    const auto a = order[i];
    const auto b = order[pick(rng)];
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  std::bernoulli_distribution coin(extra);
  for (Qubit a = 0; a < n; ++a) {
    for (Qubit b = a + 1; b < n; ++b) {
      if (coin(rng)) {
        edges.insert({a, b});
      }
    }
  }
  return {edges.begin(), edges.end()};
}

// ------------------------------------------------------- dense unitaries

using Dense = std::vector<std::vector<std::complex<double>>>;

inline Dense identity_matrix(std::size_t dim) {
  Dense m(dim, std::vector<std::complex<double>>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    m[i][i] = 1.0;
  }
  return m;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  const auto dim = a.size();
  Dense out(dim, std::vector<std::complex<double>>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

/// Permutation matrix of a classical reversible map on basis indices.
inline Dense permutation_matrix(std::size_t dim,
                                const std::function<std::size_t(std::size_t)>& f) {
  Dense m(dim, std::vector<std::complex<double>>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    m[f(x)][x] = 1.0;
  }
  return m;
}

/// Two-qubit operator for CNOT / H / SWAP, written out from their
/// textbook definitions. Qubit k is bit k of the basis index.
inline Dense gate_matrix(GateKind kind, const std::vector<Qubit>& q) {
  const std::size_t dim = 4;
  const auto bit = [](std::size_t x, Qubit k) { return (x >> k) & 1U; };
  switch (kind) {
  case GateKind::CNOT:
    return permutation_matrix(dim, [&](std::size_t x) {
      return bit(x, q[0]) ? x ^ (std::size_t{1} << q[1]) : x;
    });
  case GateKind::SWAP:
    return permutation_matrix(dim, [&](std::size_t x) {
      const auto a = bit(x, q[0]);
      const auto b = bit(x, q[1]);
      auto y = x & ~((std::size_t{1} << q[0]) | (std::size_t{1} << q[1]));
      return y | (b << q[0]) | (a << q[1]);
    });
  case GateKind::H: {
    Dense m(dim, std::vector<std::complex<double>>(dim));
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t x = 0; x < dim; ++x) {
      const auto flipped = x ^ (std::size_t{1} << q[0]);
      m[x][x] = bit(x, q[0]) ? -r : r;
      m[flipped][x] = r;
    }
    return m;
  }
  default: throw Error("gate_matrix: unsupported kind");
  }
}

/// Product of a gate list on qubits {0,1}; later gates multiply on the left.
inline Dense sequence_matrix(const std::vector<Gate>& gates) {
  auto m = identity_matrix(4);
  for (const auto& g : gates) {
    m = multiply(gate_matrix(g.kind, g.qubits), m);
  }
  return m;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    }
  }
  return worst;
}

/// Trial circuit for one ranking candidate, built as an explicit circuit:
/// processed gates, the decomposed SWAPs, then the lookahead window of the
/// remaining logical gates relabelled under the candidate's mapping.
inline Circuit trial_circuit(const Circuit& processed, const Candidate& candidate,
                             const Circuit& logical,
                             std::span<const std::vector<std::size_t>> remaining,
                             const CouplingGraph& graph, const RoutingConfig& config) {
  Circuit trial(graph.num_physical());
  for (auto g : processed.gates()) {
    g.latency = config.latencies(g.kind);
    trial.append(std::move(g));
  }
  for (const auto& [a, b] : candidate.swaps) {
    for (auto g : decompose_swap(a, b, graph)) {
      g.latency = config.latencies(g.kind);
      trial.append(std::move(g));
    }
  }
  const auto window = config.lookahead_layers
                          ? std::min(*config.lookahead_layers, remaining.size())
                          : remaining.size();
  for (std::size_t l = 0; l < window; ++l) {
    for (const auto id : remaining[l]) {
      Gate g = logical[id];
      for (auto& q : g.qubits) {
        q = candidate.mapping.physical(q);
      }
      if (g.kind == GateKind::SWAP && graph.adjacent(g.qubits[0], g.qubits[1])) {
        for (auto part : decompose_swap(g.qubits[0], g.qubits[1], graph)) {
          part.latency = config.latencies(part.kind);
          trial.append(std::move(part));
        }
        continue;
      }
      if (g.kind == GateKind::CNOT && graph.adjacent(g.qubits[0], g.qubits[1]) &&
          !graph.has_edge(g.qubits[0], g.qubits[1])) {
        for (auto part : reverse_cnot_fixup(g.qubits[0], g.qubits[1], graph)) {
          part.latency = config.latencies(part.kind);
          trial.append(std::move(part));
        }
        continue;
      }
      g.latency = config.latencies(g.kind);
      trial.append(std::move(g));
    }
  }
  return trial;
}

} // namespace fixtures
