#pragma once

#include "depthmap/router.hpp"

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace depthmap::report {

/// Outcome of routing one circuit in one mode.
struct ModeResult {
  std::size_t total_gates = 0;
  Cycle depth = 0;
  std::int64_t depth_delta = 0;
  std::size_t swaps_inserted = 0;
  double wall_time_ms = 0.0;
  /// Set only when verification ran.
  std::optional<bool> verified;
};

struct Row {
  std::string name;
  std::size_t qubits = 0;
  Cycle original_depth = 0;
  std::optional<ModeResult> gate_count;
  std::optional<ModeResult> depth_aware;

  /// Baseline delta over depth-aware delta. Infinity when only the baseline
  /// grew, 1 when neither did. Needs both modes.
  [[nodiscard]] std::optional<double> improvement() const {
    if (!gate_count || !depth_aware) {
      return std::nullopt;
    }
    return improvement_ratio(gate_count->depth_delta, depth_aware->depth_delta);
  }

  static double improvement_ratio(std::int64_t baseline, std::int64_t depth_aware) {
    if (depth_aware == 0) {
      return baseline == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(baseline) / static_cast<double>(depth_aware);
  }
};

struct Aggregate {
  /// Geometric mean over the finite ratios; null when there are none.
  std::optional<double> geo_mean_improvement;
  std::size_t finite_ratios = 0;
  std::size_t infinite_ratios = 0;
  /// Mean over circuits of 100 * (depth-aware gates / gate-count gates - 1).
  std::optional<double> mean_added_gate_percent;
};

[[nodiscard]] inline Aggregate aggregate(const std::vector<Row>& rows) {
  Aggregate result;
  double log_sum = 0.0;
  double added_sum = 0.0;
  std::size_t added_count = 0;
  for (const auto& row : rows) {
    if (const auto ratio = row.improvement()) {
      if (std::isinf(*ratio)) {
        ++result.infinite_ratios;
      } else {
        log_sum += std::log(*ratio);
        ++result.finite_ratios;
      }
    }
    if (row.gate_count && row.depth_aware && row.gate_count->total_gates > 0) {
      added_sum += 100.0 * (static_cast<double>(row.depth_aware->total_gates) /
                                static_cast<double>(row.gate_count->total_gates) -
                            1.0);
      ++added_count;
    }
  }
  if (result.finite_ratios > 0) {
    result.geo_mean_improvement =
        std::exp(log_sum / static_cast<double>(result.finite_ratios));
  }
  if (added_count > 0) {
    result.mean_added_gate_percent = added_sum / static_cast<double>(added_count);
  }
  return result;
}

struct Report {
  std::string architecture;
  RoutingConfig config;
  std::vector<Row> rows;
};

namespace detail {

inline nlohmann::ordered_json ratio_json(double value) {
  if (std::isinf(value)) {
    return "inf";
  }
  return value;
}

inline nlohmann::ordered_json mode_json(const ModeResult& mode) {
  nlohmann::ordered_json out;
  out["total_gates"] = mode.total_gates;
  out["depth"] = mode.depth;
  out["depth_delta"] = mode.depth_delta;
  out["swaps_inserted"] = mode.swaps_inserted;
  out["wall_time_ms"] = mode.wall_time_ms;
  out["verified"] = mode.verified ? nlohmann::ordered_json(*mode.verified)
                                  : nlohmann::ordered_json(nullptr);
  return out;
}

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& value) {
  return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json(nullptr);
}

} // namespace detail

inline constexpr const char* kSchema = "depthmap-report/1";

[[nodiscard]] inline nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json out;
  out["schema"] = kSchema;
  auto& config = out["config"];
  config["architecture"] = report.architecture;
  config["expand_width"] = report.config.expand_width;
  config["extra_depth"] = report.config.extra_depth;
  config["max_candidates"] = report.config.max_candidates;
  config["lookahead"] = report.config.lookahead_layers
                            ? nlohmann::ordered_json(*report.config.lookahead_layers)
                            : nlohmann::ordered_json("all");
  config["seed"] = report.config.seed;
  config["default_latencies"] = report.config.latencies.is_default();
  auto circuits = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    entry["name"] = row.name;
    entry["qubits"] = row.qubits;
    entry["original_depth"] = row.original_depth;
    entry["gate_count"] = row.gate_count ? detail::mode_json(*row.gate_count)
                                         : nlohmann::ordered_json(nullptr);
    entry["depth_aware"] = row.depth_aware ? detail::mode_json(*row.depth_aware)
                                           : nlohmann::ordered_json(nullptr);
    const auto ratio = row.improvement();
    entry["improvement"] =
        ratio ? detail::ratio_json(*ratio) : nlohmann::ordered_json(nullptr);
    circuits.push_back(std::move(entry));
  }
  out["circuits"] = std::move(circuits);
  const auto totals = aggregate(report.rows);
  auto& agg = out["aggregate"];
  agg["circuits"] = report.rows.size();
  agg["geo_mean_improvement"] = detail::optional_json(totals.geo_mean_improvement);
  agg["finite_ratios"] = totals.finite_ratios;
  agg["infinite_ratios"] = totals.infinite_ratios;
  agg["mean_added_gate_percent"] =
      detail::optional_json(totals.mean_added_gate_percent);
  return out;
}

[[nodiscard]] inline std::string to_json_text(const Report& report) {
  return to_json(report).dump(2) + "\n";
}

/// Fixed column order; columns of a mode that did not run are left empty.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "name",          "qubits",        "original_depth",
      "gc_total_gates", "gc_depth",     "gc_depth_delta",
      "gc_swaps",      "gc_wall_time_ms", "gc_verified",
      "da_total_gates", "da_depth",     "da_depth_delta",
      "da_swaps",      "da_wall_time_ms", "da_verified",
      "improvement"};
  return columns;
}

[[nodiscard]] inline std::string to_csv(const Report& report) {
  std::ostringstream out;
  const auto& columns = csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  const auto mode_cells = [&](const std::optional<ModeResult>& mode) {
    if (!mode) {
      out << ",,,,,,";
      return;
    }
    out << ',' << mode->total_gates << ',' << mode->depth << ','
        << mode->depth_delta << ',' << mode->swaps_inserted << ','
        << nlohmann::json(mode->wall_time_ms).dump() << ',';
    if (mode->verified) {
      out << (*mode->verified ? "true" : "false");
    }
  };
  for (const auto& row : report.rows) {
    // Circuit names come from file stems; quote them if they need it.
    if (row.name.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted;
      for (const char c : row.name) {
        quoted += c;
        if (c == '"') {
          quoted += '"';
        }
      }
      out << '"' << quoted << '"';
    } else {
      out << row.name;
    }
    out << ',' << row.qubits << ',' << row.original_depth;
    mode_cells(row.gate_count);
    mode_cells(row.depth_aware);
    out << ',';
    if (const auto ratio = row.improvement()) {
      out << (std::isinf(*ratio) ? std::string("inf")
                                 : nlohmann::json(*ratio).dump());
    }
    out << '\n';
  }
  return out.str();
}

} // namespace depthmap::report
