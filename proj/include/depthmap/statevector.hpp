#pragma once

#include "depthmap/circuit.hpp"
#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace depthmap {

using Amplitude = std::complex<double>;
/// Row-major 2x2 unitary.
using Matrix2 = std::array<Amplitude, 4>;

/// Largest register a Statevector may hold.
inline constexpr std::size_t kMaxStatevectorQubits = 24;

/// Dense state of n qubits. Qubit k is bit k of the basis index.
class Statevector {
public:
  Statevector() = default;

  /// |0...0> on `num_qubits` qubits.
  explicit Statevector(std::size_t num_qubits,
                       std::size_t limit = kMaxStatevectorQubits)
      : num_qubits_(num_qubits) {
    if (num_qubits > limit) {
      throw TooManyQubits(num_qubits, limit);
    }
    amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{});
    amplitudes_[0] = 1.0;
  }

  static Statevector basis(std::size_t num_qubits, std::size_t index) {
    Statevector state(num_qubits);
    state.amplitudes_[0] = 0.0;
    state.amplitudes_.at(index) = 1.0;
    return state;
  }

  /// Haar-distributed pure state: normalised i.i.d. complex Gaussians.
  template <typename Rng>
  static Statevector haar_random(std::size_t num_qubits, Rng& rng) {
    Statevector state(num_qubits);
    std::normal_distribution<double> normal;
    for (auto& amp : state.amplitudes_) {
      amp = {normal(rng), normal(rng)};
    }
    state.normalise();
    return state;
  }

  [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const noexcept {
    return amplitudes_.size();
  }
  [[nodiscard]] const std::vector<Amplitude>& amplitudes() const noexcept {
    return amplitudes_;
  }
  [[nodiscard]] std::vector<Amplitude>& amplitudes() noexcept {
    return amplitudes_;
  }
  [[nodiscard]] Amplitude operator[](std::size_t index) const {
    return amplitudes_[index];
  }

  [[nodiscard]] double norm() const {
    double sum = 0.0;
    for (const auto& amp : amplitudes_) {
      sum += std::norm(amp);
    }
    return std::sqrt(sum);
  }

  void normalise() {
    const double n = norm();
    for (auto& amp : amplitudes_) {
      amp /= n;
    }
  }

  void apply(const Matrix2& m, Qubit q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < amplitudes_.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const auto a0 = amplitudes_[i];
        const auto a1 = amplitudes_[i + stride];
        amplitudes_[i] = m[0] * a0 + m[1] * a1;
        amplitudes_[i + stride] = m[2] * a0 + m[3] * a1;
      }
    }
  }

  void apply_cnot(Qubit control, Qubit target) {
    const std::size_t c = std::size_t{1} << control;
    const std::size_t t = std::size_t{1} << target;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      if ((i & c) != 0 && (i & t) == 0) {
        std::swap(amplitudes_[i], amplitudes_[i | t]);
      }
    }
  }

  void apply_swap(Qubit a, Qubit b) {
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
      if ((i & ma) != 0 && (i & mb) == 0) {
        std::swap(amplitudes_[i], amplitudes_[(i & ~ma) | mb]);
      }
    }
  }

private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// <lhs|rhs>
[[nodiscard]] inline Amplitude inner_product(const Statevector& lhs,
                                             const Statevector& rhs) {
  Amplitude sum{};
  for (std::size_t i = 0; i < lhs.dimension(); ++i) {
    sum += std::conj(lhs[i]) * rhs[i];
  }
  return sum;
}

/// qelib1 unitary of a single-qubit gate.
[[nodiscard]] inline Matrix2 single_qubit_matrix(const Gate& gate) {
  using namespace std::complex_literals;
  constexpr double r = std::numbers::sqrt2 / 2.0;
  const auto u3 = [](double theta, double phi, double lambda) -> Matrix2 {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {c, -std::exp(1i * lambda) * s, std::exp(1i * phi) * s,
            std::exp(1i * (phi + lambda)) * c};
  };
  switch (gate.kind) {
  case GateKind::H: return {r, r, r, -r};
  case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
  case GateKind::Y: return {0.0, -1i, 1i, 0.0};
  case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
  case GateKind::S: return {1.0, 0.0, 0.0, 1i};
  case GateKind::Sdg: return {1.0, 0.0, 0.0, -1i};
  case GateKind::T: return {1.0, 0.0, 0.0, std::exp(1i * (std::numbers::pi / 4))};
  case GateKind::Tdg: return {1.0, 0.0, 0.0, std::exp(-1i * (std::numbers::pi / 4))};
  case GateKind::RX: {
    const double c = std::cos(gate.params[0] / 2.0);
    const double s = std::sin(gate.params[0] / 2.0);
    return {c, -1i * s, -1i * s, c};
  }
  case GateKind::RY: {
    const double c = std::cos(gate.params[0] / 2.0);
    const double s = std::sin(gate.params[0] / 2.0);
    return {c, -s, s, c};
  }
  case GateKind::RZ:
    return {std::exp(-0.5i * gate.params[0]), 0.0, 0.0,
            std::exp(0.5i * gate.params[0])};
  case GateKind::U1: return {1.0, 0.0, 0.0, std::exp(1i * gate.params[0])};
  case GateKind::U2:
    return u3(std::numbers::pi / 2, gate.params[0], gate.params[1]);
  case GateKind::U3: return u3(gate.params[0], gate.params[1], gate.params[2]);
  default: throw Error("'" + std::string(qasm_name(gate.kind)) +
                       "' is not a single-qubit unitary");
  }
}

inline void apply_gate(Statevector& state, const Gate& gate) {
  switch (gate.kind) {
  case GateKind::CNOT: state.apply_cnot(gate.qubits[0], gate.qubits[1]); return;
  case GateKind::SWAP: state.apply_swap(gate.qubits[0], gate.qubits[1]); return;
  case GateKind::Barrier: return;
  case GateKind::Measure: throw MeasureInVerification();
  default: state.apply(single_qubit_matrix(gate), gate.qubits[0]);
  }
}

/// Applies the circuit's gates in order to `input`.
[[nodiscard]] inline Statevector simulate(const Circuit& circuit,
                                          Statevector input) {
  if (circuit.num_qubits() != input.num_qubits()) {
    throw Error("circuit has " + std::to_string(circuit.num_qubits()) +
                " qubits but the state has " +
                std::to_string(input.num_qubits()));
  }
  for (const auto& gate : circuit.gates()) {
    apply_gate(input, gate);
  }
  return input;
}

} // namespace depthmap
