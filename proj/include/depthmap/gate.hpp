#pragma once

#include "depthmap/errors.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace depthmap {

using Qubit = std::size_t;

enum class GateKind : std::uint8_t {
  H,
  X,
  Y,
  Z,
  S,
  Sdg,
  T,
  Tdg,
  RX,
  RY,
  RZ,
  U1,
  U2,
  U3,
  CNOT,
  SWAP,
  Barrier,
  Measure,
};

inline constexpr std::array<GateKind, 18> kAllGateKinds = {
    GateKind::H,   GateKind::X,    GateKind::Y,       GateKind::Z,
    GateKind::S,   GateKind::Sdg,  GateKind::T,       GateKind::Tdg,
    GateKind::RX,  GateKind::RY,   GateKind::RZ,      GateKind::U1,
    GateKind::U2,  GateKind::U3,   GateKind::CNOT,    GateKind::SWAP,
    GateKind::Barrier, GateKind::Measure};

/// OpenQASM 2.0 (qelib1) spelling of a gate kind.
[[nodiscard]] constexpr std::string_view qasm_name(GateKind kind) noexcept {
  switch (kind) {
  case GateKind::H: return "h";
  case GateKind::X: return "x";
  case GateKind::Y: return "y";
  case GateKind::Z: return "z";
  case GateKind::S: return "s";
  case GateKind::Sdg: return "sdg";
  case GateKind::T: return "t";
  case GateKind::Tdg: return "tdg";
  case GateKind::RX: return "rx";
  case GateKind::RY: return "ry";
  case GateKind::RZ: return "rz";
  case GateKind::U1: return "u1";
  case GateKind::U2: return "u2";
  case GateKind::U3: return "u3";
  case GateKind::CNOT: return "cx";
  case GateKind::SWAP: return "swap";
  case GateKind::Barrier: return "barrier";
  case GateKind::Measure: return "measure";
  }
  return "?";
}

[[nodiscard]] inline std::optional<GateKind>
gate_kind_from_name(std::string_view name) noexcept {
  for (const auto kind : kAllGateKinds) {
    if (qasm_name(kind) == name) {
      return kind;
    }
  }
  if (name == "CX") {
    return GateKind::CNOT;
  }
  if (name == "U") {
    return GateKind::U3;
  }
  return std::nullopt;
}

/// Number of angle parameters the kind takes.
[[nodiscard]] constexpr std::size_t param_count(GateKind kind) noexcept {
  switch (kind) {
  case GateKind::RX:
  case GateKind::RY:
  case GateKind::RZ:
  case GateKind::U1: return 1;
  case GateKind::U2: return 2;
  case GateKind::U3: return 3;
  default: return 0;
  }
}

/// Fixed operand count, or nullopt for the variadic Barrier.
[[nodiscard]] constexpr std::optional<std::size_t>
fixed_arity(GateKind kind) noexcept {
  switch (kind) {
  case GateKind::CNOT:
  case GateKind::SWAP: return 2;
  case GateKind::Barrier: return std::nullopt;
  default: return 1;
  }
}

[[nodiscard]] constexpr bool is_two_qubit(GateKind kind) noexcept {
  return kind == GateKind::CNOT || kind == GateKind::SWAP;
}

/// Default cycle model: every executable gate takes one cycle, a symbolic
/// SWAP costs its three-CNOT decomposition and a barrier is free.
[[nodiscard]] constexpr unsigned default_latency(GateKind kind) noexcept {
  switch (kind) {
  case GateKind::Barrier: return 0;
  case GateKind::SWAP: return 3;
  default: return 1;
  }
}

/// Per-kind latency overrides on top of `default_latency`.
class LatencyTable {
public:
  LatencyTable() = default;

  [[nodiscard]] unsigned operator()(GateKind kind) const {
    const auto it = overrides_.find(kind);
    return it == overrides_.end() ? default_latency(kind) : it->second;
  }

  /// Barrier must stay at 0; everything else must be at least 1.
  void set(GateKind kind, unsigned cycles) {
    if (kind == GateKind::Barrier ? cycles != 0 : cycles == 0) {
      throw Error("invalid latency " + std::to_string(cycles) + " for '" +
                  std::string(qasm_name(kind)) + "'");
    }
    overrides_[kind] = cycles;
  }

  [[nodiscard]] bool is_default() const noexcept { return overrides_.empty(); }

  /// Line format: `<qasm gate name> <cycles>`, `#` starts a comment.
  static LatencyTable parse(std::istream& in) {
    LatencyTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      std::istringstream fields(line);
      std::string name;
      if (!(fields >> name)) {
        continue;
      }
      long long cycles = 0;
      std::string trailing;
      const auto kind = gate_kind_from_name(name);
      if (!kind || !(fields >> cycles) || (fields >> trailing) || cycles < 0) {
        throw Error("latency table line " + std::to_string(lineno) +
                    ": expected '<gate> <cycles>'");
      }
      table.set(*kind, static_cast<unsigned>(cycles));
    }
    return table;
  }

private:
  std::map<GateKind, unsigned> overrides_;
};

struct Gate {
  std::size_t id = 0;
  GateKind kind = GateKind::H;
  std::vector<Qubit> qubits;
  std::vector<double> params;
  /// Classical bit written by a Measure (flattened creg index).
  std::optional<std::size_t> clbit;
  unsigned latency = 1;

  /// Same operation regardless of id and latency.
  [[nodiscard]] bool same_operation(const Gate& other) const {
    return kind == other.kind && qubits == other.qubits &&
           params == other.params && clbit == other.clbit;
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

[[nodiscard]] inline std::string to_string(const Gate& gate) {
  std::ostringstream out;
  out << qasm_name(gate.kind);
  if (!gate.params.empty()) {
    out << '(';
    for (std::size_t i = 0; i < gate.params.size(); ++i) {
      out << (i ? "," : "") << gate.params[i];
    }
    out << ')';
  }
  for (std::size_t i = 0; i < gate.qubits.size(); ++i) {
    out << (i ? "," : " ") << 'q' << gate.qubits[i];
  }
  return out.str();
}

} // namespace depthmap
