#pragma once

#include "depthmap/errors.hpp"
#include "depthmap/gate.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace depthmap {

/// Injective placement of logical qubits onto physical qubits. Physical
/// qubits that hold no logical qubit are "free" and may still take part in
/// SWAPs.
class Mapping {
public:
  static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

  Mapping() = default;

  /// q_i -> Q_i.
  static Mapping identity(std::size_t num_logical, std::size_t num_physical) {
    if (num_logical > num_physical) {
      throw QubitCountExceeded(num_logical, num_physical);
    }
    std::vector<Qubit> placement(num_logical);
    for (std::size_t i = 0; i < num_logical; ++i) {
      placement[i] = i;
    }
    return Mapping(std::move(placement), num_physical);
  }

  Mapping(std::vector<Qubit> log2phys, std::size_t num_physical)
      : log2phys_(std::move(log2phys)), phys2log_(num_physical, kFree) {
    if (log2phys_.size() > num_physical) {
      throw QubitCountExceeded(log2phys_.size(), num_physical);
    }
    for (std::size_t logical = 0; logical < log2phys_.size(); ++logical) {
      const auto physical = log2phys_[logical];
      if (physical >= num_physical || phys2log_[physical] != kFree) {
        throw Error("mapping is not injective onto " +
                    std::to_string(num_physical) + " physical qubits");
      }
      phys2log_[physical] = logical;
    }
  }

  [[nodiscard]] std::size_t num_logical() const noexcept {
    return log2phys_.size();
  }
  [[nodiscard]] std::size_t num_physical() const noexcept {
    return phys2log_.size();
  }
  [[nodiscard]] Qubit physical(Qubit logical) const {
    return log2phys_[logical];
  }
  [[nodiscard]] std::optional<Qubit> logical(Qubit physical) const {
    const auto value = phys2log_[physical];
    return value == kFree ? std::nullopt : std::optional<Qubit>(value);
  }
  [[nodiscard]] const std::vector<Qubit>& log2phys() const noexcept {
    return log2phys_;
  }
  [[nodiscard]] const std::vector<std::size_t>& phys2log() const noexcept {
    return phys2log_;
  }

  /// Exchanges whatever the two physical qubits hold.
  void swap_physical(Qubit a, Qubit b) {
    std::swap(phys2log_[a], phys2log_[b]);
    if (phys2log_[a] != kFree) {
      log2phys_[phys2log_[a]] = a;
    }
    if (phys2log_[b] != kFree) {
      log2phys_[phys2log_[b]] = b;
    }
  }

  friend bool operator==(const Mapping&, const Mapping&) = default;

private:
  std::vector<Qubit> log2phys_;
  std::vector<std::size_t> phys2log_;
};

struct MappingHash {
  std::size_t operator()(const Mapping& mapping) const noexcept {
    std::size_t seed = mapping.num_physical();
    for (const auto value : mapping.phys2log()) {
      seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

} // namespace depthmap
