#pragma once

#include "depthmap/circuit.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/mapping.hpp"
#include "depthmap/router.hpp"
#include "depthmap/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace depthmap {

/// Logical register limit for verification.
inline constexpr std::size_t kMaxVerifiedQubits = 14;

struct EquivalenceReport {
  bool equivalent = false;
  double min_fidelity = 0.0;
  /// Physical qubits simulated after dropping idle ones.
  std::size_t simulated_qubits = 0;
};

namespace detail {

/// Restricts a physical circuit to the qubits it touches plus the images of
/// the two mappings. Unused physical qubits stay in |0> and can be dropped.
struct CompressedPhysical {
  Circuit circuit;
  std::vector<std::size_t> position; // physical qubit -> compressed index
};

inline CompressedPhysical compress(const Circuit& physical, const Mapping& initial,
                                   const Mapping& final_mapping) {
  const auto num_physical = physical.num_qubits();
  std::vector<bool> active(num_physical, false);
  for (const auto& gate : physical.gates()) {
    for (const auto q : gate.qubits) {
      active[q] = true;
    }
  }
  for (const auto q : initial.log2phys()) {
    active[q] = true;
  }
  for (const auto q : final_mapping.log2phys()) {
    active[q] = true;
  }
  CompressedPhysical result;
  result.position.assign(num_physical, Mapping::kFree);
  std::size_t next = 0;
  for (std::size_t q = 0; q < num_physical; ++q) {
    if (active[q]) {
      result.position[q] = next++;
    }
  }
  result.circuit = Circuit(next);
  for (auto gate : physical.gates()) {
    for (auto& q : gate.qubits) {
      q = result.position[q];
    }
    result.circuit.append(std::move(gate));
  }
  return result;
}

/// Basis index of logical basis state `x` placed by `placement`.
inline std::size_t place(std::size_t x, std::size_t num_logical,
                         const std::vector<Qubit>& log2phys,
                         const std::vector<std::size_t>& position) {
  std::size_t y = 0;
  for (std::size_t i = 0; i < num_logical; ++i) {
    if ((x >> i) & 1U) {
      y |= std::size_t{1} << position[log2phys[i]];
    }
  }
  return y;
}

} // namespace detail

/// Runs `trials` seeded Haar-random logical states through the original
/// circuit and through the routed one (embedded via the initial mapping,
/// read back via the final mapping) and reports the worst fidelity.
[[nodiscard]] inline EquivalenceReport
check_equivalence(const Circuit& original, const RoutingResult& result,
                  std::size_t trials, double tol, std::uint64_t seed = 0) {
  const auto n = original.num_qubits();
  if (n > kMaxVerifiedQubits) {
    throw TooManyQubits(n, kMaxVerifiedQubits);
  }
  const auto logical = original.without_measures();
  const auto compressed =
      detail::compress(result.transformed.without_measures(),
                       result.initial_mapping, result.final_mapping);
  const auto m = compressed.circuit.num_qubits();
  if (m > kMaxStatevectorQubits) {
    throw TooManyQubits(m, kMaxStatevectorQubits);
  }
  std::mt19937_64 rng(seed);
  EquivalenceReport report;
  report.simulated_qubits = m;
  report.min_fidelity = 1.0;
  const auto& init = result.initial_mapping.log2phys();
  const auto& fin = result.final_mapping.log2phys();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto psi = Statevector::haar_random(n, rng);
    const auto expected = simulate(logical, psi);
    Statevector embedded(m);
    embedded.amplitudes()[0] = 0.0;
    for (std::size_t x = 0; x < psi.dimension(); ++x) {
      embedded.amplitudes()[detail::place(x, n, init, compressed.position)] = psi[x];
    }
    const auto actual = simulate(compressed.circuit, std::move(embedded));
    Amplitude overlap{};
    for (std::size_t x = 0; x < expected.dimension(); ++x) {
      overlap += std::conj(expected[x]) *
                 actual[detail::place(x, n, fin, compressed.position)];
    }
    report.min_fidelity = std::min(report.min_fidelity, std::norm(overlap));
  }
  report.equivalent = report.min_fidelity >= 1.0 - tol;
  return report;
}

[[nodiscard]] inline bool equivalent_up_to_mapping(const Circuit& original,
                                                   const RoutingResult& result,
                                                   std::size_t trials, double tol,
                                                   std::uint64_t seed = 0) {
  return check_equivalence(original, result, trials, tol, seed).equivalent;
}

/// Exhaustive variant for small registers: compares every column of the two
/// unitaries, requiring one common global phase.
inline constexpr std::size_t kMaxExhaustiveQubits = 6;

[[nodiscard]] inline bool equivalent_exhaustive(const Circuit& original,
                                                const RoutingResult& result,
                                                double tol) {
  const auto n = original.num_qubits();
  if (n > kMaxExhaustiveQubits) {
    throw TooManyQubits(n, kMaxExhaustiveQubits);
  }
  const auto logical = original.without_measures();
  const auto compressed =
      detail::compress(result.transformed.without_measures(),
                       result.initial_mapping, result.final_mapping);
  const auto m = compressed.circuit.num_qubits();
  if (m > kMaxStatevectorQubits) {
    throw TooManyQubits(m, kMaxStatevectorQubits);
  }
  const auto& init = result.initial_mapping.log2phys();
  const auto& fin = result.final_mapping.log2phys();
  const std::size_t dim = std::size_t{1} << n;
  std::optional<Amplitude> phase;
  for (std::size_t column = 0; column < dim; ++column) {
    const auto expected = simulate(logical, Statevector::basis(n, column));
    const auto actual = simulate(
        compressed.circuit,
        Statevector::basis(m, detail::place(column, n, init, compressed.position)));
    double leaked = 1.0;
    for (std::size_t row = 0; row < dim; ++row) {
      const auto a = actual[detail::place(row, n, fin, compressed.position)];
      const auto e = expected[row];
      leaked -= std::norm(a);
      if (!phase && std::abs(e) > 0.5 / std::sqrt(static_cast<double>(dim))) {
        phase = a / e;
      }
      if (phase && std::abs(a - *phase * e) > tol) {
        return false;
      }
    }
    if (std::abs(leaked) > tol) {
      return false;
    }
  }
  return phase && std::abs(std::abs(*phase) - 1.0) <= tol;
}

} // namespace depthmap
