#pragma once

#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace depthmap {

/// Ordered gate list over a register of `num_qubits` qubits. Gate ids are
/// always dense and equal to the gate's position.
class Circuit {
public:
  Circuit() = default;
  explicit Circuit(std::size_t num_qubits) : num_qubits_(num_qubits) {}

  [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
  [[nodiscard]] const std::vector<Gate>& gates() const noexcept {
    return gates_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }
  [[nodiscard]] bool empty() const noexcept { return gates_.empty(); }
  [[nodiscard]] const Gate& operator[](std::size_t id) const {
    return gates_[id];
  }

  const Gate& add(GateKind kind, std::vector<Qubit> qubits,
                  std::vector<double> params = {},
                  std::optional<std::size_t> clbit = std::nullopt) {
    Gate gate;
    gate.kind = kind;
    gate.qubits = std::move(qubits);
    gate.params = std::move(params);
    gate.clbit = clbit;
    gate.latency = default_latency(kind);
    return append(std::move(gate));
  }

  /// Appends a copy of `gate` with a fresh id; its latency is kept.
  const Gate& append(Gate gate) {
    check_gate(gate, num_qubits_);
    gate.id = gates_.size();
    gates_.push_back(std::move(gate));
    return gates_.back();
  }

  void append(const Circuit& other) {
    for (const auto& gate : other.gates()) {
      append(gate);
    }
  }

  void apply_latencies(const LatencyTable& table) {
    for (auto& gate : gates_) {
      gate.latency = table(gate.kind);
    }
  }

  [[nodiscard]] std::vector<unsigned> latencies() const {
    std::vector<unsigned> result;
    result.reserve(gates_.size());
    for (const auto& gate : gates_) {
      result.push_back(gate.latency);
    }
    return result;
  }

  [[nodiscard]] std::size_t count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(),
                      [kind](const Gate& g) { return g.kind == kind; }));
  }

  /// Copy with every Measure removed (ids renumbered).
  [[nodiscard]] Circuit without_measures() const {
    Circuit result(num_qubits_);
    for (const auto& gate : gates_) {
      if (gate.kind != GateKind::Measure) {
        result.append(gate);
      }
    }
    return result;
  }

  /// Throws InvalidCircuit when `gate` breaks an arity, operand-range,
  /// distinctness, parameter-count or latency invariant.
  static void check_gate(const Gate& gate, std::size_t num_qubits) {
    const auto name = std::string(qasm_name(gate.kind));
    if (const auto arity = fixed_arity(gate.kind)) {
      if (gate.qubits.size() != *arity) {
        throw InvalidCircuit("'" + name + "' expects " +
                             std::to_string(*arity) + " operand(s)");
      }
    } else if (gate.qubits.empty()) {
      throw InvalidCircuit("'" + name + "' needs at least one operand");
    }
    if (gate.params.size() != param_count(gate.kind)) {
      throw InvalidCircuit("'" + name + "' expects " +
                           std::to_string(param_count(gate.kind)) +
                           " parameter(s)");
    }
    for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
      if (gate.qubits[i] >= num_qubits) {
        throw InvalidCircuit("operand q" + std::to_string(gate.qubits[i]) +
                             " outside register of " +
                             std::to_string(num_qubits));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (gate.qubits[i] == gate.qubits[j]) {
          throw InvalidCircuit("repeated operand q" +
                               std::to_string(gate.qubits[i]) + " in '" +
                               name + "'");
        }
      }
    }
    if (gate.kind == GateKind::Barrier ? gate.latency != 0
                                       : gate.latency == 0) {
      throw InvalidCircuit("invalid latency for '" + name + "'");
    }
    if (gate.clbit.has_value() != (gate.kind == GateKind::Measure)) {
      throw InvalidCircuit("classical target only allowed on measure");
    }
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

private:
  std::size_t num_qubits_ = 0;
  std::vector<Gate> gates_;
};

} // namespace depthmap
