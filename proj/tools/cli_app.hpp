#pragma once

#include "depthmap/depthmap.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace depthmap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerificationFailed = 2;

/// Verification settings used by --verify.
inline constexpr std::size_t kVerifyTrials = 5;
inline constexpr double kVerifyTolerance = 1e-9;

namespace detail {

inline std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input) {
  namespace fs = std::filesystem;
  if (!fs::exists(input)) {
    throw Error("input '" + input.string() + "' does not exist");
  }
  if (!fs::is_directory(input)) {
    return {input};
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) {
    throw Error("no .qasm files in '" + input.string() + "'");
  }
  return files;
}

inline std::optional<std::size_t> parse_lookahead(const std::string& text) {
  if (text == "all") {
    return std::nullopt;
  }
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text.front() == '-') {
    throw Error("--lookahead expects a layer count or 'all', got '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

inline Mapping parse_mapping(const std::string& text, std::size_t num_logical,
                             std::size_t num_physical) {
  std::vector<Qubit> placement;
  std::stringstream fields(text);
  std::string field;
  while (std::getline(fields, field, ',')) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size()) {
      throw Error("--initial-mapping expects comma-separated physical qubits");
    }
    placement.push_back(static_cast<Qubit>(value));
  }
  if (placement.size() < num_logical) {
    throw Error("--initial-mapping places " + std::to_string(placement.size()) +
                " qubits but the circuit has " + std::to_string(num_logical));
  }
  placement.resize(num_logical);
  return Mapping(std::move(placement), num_physical);
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error("cannot write '" + path.string() + "'");
  }
}

inline std::string delta_cell(const std::optional<report::ModeResult>& mode) {
  return mode ? std::to_string(mode->depth_delta) : "-";
}

inline std::string cell(const std::optional<report::ModeResult>& mode,
                        std::size_t report::ModeResult::*field) {
  return mode ? std::to_string((*mode).*field) : "-";
}

inline void print_table(std::ostream& out, const report::Report& rep) {
  out << std::left << std::setw(20) << "circuit" << std::right << std::setw(4)
      << "n" << std::setw(7) << "orig" << std::setw(9) << "gc_gates"
      << std::setw(8) << "gc_dd" << std::setw(8) << "gc_swp" << std::setw(9)
      << "da_gates" << std::setw(8) << "da_dd" << std::setw(8) << "da_swp"
      << std::setw(9) << "ratio" << '\n';
  for (const auto& row : rep.rows) {
    std::string ratio = "-";
    if (const auto value = row.improvement()) {
      std::ostringstream text;
      if (std::isinf(*value)) {
        text << "inf";
      } else {
        text << std::fixed << std::setprecision(2) << *value;
      }
      ratio = text.str();
    }
    out << std::left << std::setw(20) << row.name << std::right << std::setw(4)
        << row.qubits << std::setw(7) << row.original_depth << std::setw(9)
        << cell(row.gate_count, &report::ModeResult::total_gates) << std::setw(8)
        << delta_cell(row.gate_count) << std::setw(8)
        << cell(row.gate_count, &report::ModeResult::swaps_inserted)
        << std::setw(9) << cell(row.depth_aware, &report::ModeResult::total_gates)
        << std::setw(8) << delta_cell(row.depth_aware) << std::setw(8)
        << cell(row.depth_aware, &report::ModeResult::swaps_inserted)
        << std::setw(9) << ratio << '\n';
  }
  const auto totals = report::aggregate(rep.rows);
  if (totals.geo_mean_improvement || totals.infinite_ratios > 0) {
    out << "geo-mean improvement: ";
    if (totals.geo_mean_improvement) {
      out << std::fixed << std::setprecision(3) << *totals.geo_mean_improvement;
    } else {
      out << "-";
    }
    out << " over " << totals.finite_ratios << " finite ratios, "
        << totals.infinite_ratios << " infinite\n";
  }
  if (totals.mean_added_gate_percent) {
    out << "mean added gates: " << std::fixed << std::setprecision(2)
        << *totals.mean_added_gate_percent << "%\n";
  }
}

} // namespace detail

/// Command-line driver. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Depth-aware SWAP insertion for qubit routing"};
  std::string input;
  std::string arch = "ibm-q20-tokyo";
  std::string mode = "both";
  std::size_t expand = 1;
  std::size_t extra_depth = 1;
  std::size_t max_candidates = 10;
  std::string lookahead = "all";
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string report_path;
  bool verify = false;
  std::string latency_path;
  std::string initial_mapping;
  bool quiet = false;

  app.add_option("--input", input, "QASM file or directory of .qasm files")->required();
  app.add_option("--arch", arch, "builtin architecture name or topology file")
      ->capture_default_str();
  app.add_option("--mode", mode, "routing mode")
      ->check(CLI::IsMember({"depth-aware", "gate-count", "both"}))
      ->capture_default_str();
  app.add_option("--expand", expand, "A* nodes expanded per step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--extra-depth", extra_depth, "extra SWAP levels searched past the first goal")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--max-candidates", max_candidates, "candidate cap per layer")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--lookahead", lookahead, "remaining layers scored, or 'all'")
      ->capture_default_str();
  app.add_option("--seed", seed, "tie-break seed")->capture_default_str();
  app.add_option("--out", out_dir, "directory for transformed QASM");
  app.add_option("--report", report_path, "report file (.json or .csv)");
  app.add_flag("--verify", verify, "check equivalence on circuits up to 14 qubits");
  app.add_option("--latency", latency_path, "latency table file");
  app.add_option("--initial-mapping", initial_mapping,
                 "comma-separated physical qubit of each logical qubit");
  app.add_flag("--quiet", quiet, "suppress the summary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const auto code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  std::string current;
  try {
    RoutingConfig config;
    config.expand_width = expand;
    config.extra_depth = extra_depth;
    config.max_candidates = max_candidates;
    config.lookahead_layers = detail::parse_lookahead(lookahead);
    config.seed = seed;
    if (!latency_path.empty()) {
      std::ifstream in(latency_path);
      if (!in) {
        throw Error("cannot open latency table '" + latency_path + "'");
      }
      current = latency_path;
      config.latencies = LatencyTable::parse(in);
    }
    config.validate();
    current = arch;
    const auto graph = load_coupling(arch);

    std::string report_format;
    if (!report_path.empty()) {
      const auto ext = std::filesystem::path(report_path).extension().string();
      if (ext != ".json" && ext != ".csv") {
        throw Error("--report must end in .json or .csv");
      }
      report_format = ext;
    }
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
    }

    std::vector<RoutingMode> modes;
    if (mode != "depth-aware") {
      modes.push_back(RoutingMode::GateCount);
    }
    if (mode != "gate-count") {
      modes.push_back(RoutingMode::DepthAware);
    }

    report::Report rep;
    rep.architecture = graph.name();
    rep.config = config;
    bool verification_failed = false;
    current = input;
    for (const auto& path : detail::collect_inputs(input)) {
      current = path.string();
      const auto program = read_qasm_file(path.string());
      const auto& circuit = program.circuit;
      std::optional<Mapping> initial;
      if (!initial_mapping.empty()) {
        initial = detail::parse_mapping(initial_mapping, circuit.num_qubits(),
                                        graph.num_physical());
      }
      report::Row row;
      row.name = path.stem().string();
      row.qubits = circuit.num_qubits();
      for (const auto routing_mode : modes) {
        auto mode_config = config;
        mode_config.mode = routing_mode;
        const auto start = std::chrono::steady_clock::now();
        const auto result = route(circuit, graph, mode_config, initial);
        const auto stop = std::chrono::steady_clock::now();
        row.original_depth = result.metrics.original_depth;
        report::ModeResult entry;
        entry.total_gates = result.metrics.total_gates;
        entry.depth = result.metrics.depth;
        entry.depth_delta = result.metrics.depth_delta;
        entry.swaps_inserted = result.swaps_inserted;
        entry.wall_time_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
        if (verify && circuit.num_qubits() <= kMaxVerifiedQubits) {
          entry.verified = equivalent_up_to_mapping(circuit, result, kVerifyTrials,
                                                    kVerifyTolerance, seed);
          if (!*entry.verified) {
            verification_failed = true;
            err << path.string() << ": " << to_string(routing_mode)
                << " output failed verification\n";
          }
        }
        if (!out_dir.empty()) {
          auto physical =
              QasmProgram::from_circuit(result.transformed, program.cregs);
          detail::write_file(std::filesystem::path(out_dir) /
                                 (row.name + "." + std::string(to_string(routing_mode)) +
                                  ".qasm"),
                             emit_qasm(physical));
        }
        (routing_mode == RoutingMode::GateCount ? row.gate_count : row.depth_aware) =
            entry;
      }
      rep.rows.push_back(std::move(row));
    }
    current.clear();

    if (report_format == ".json") {
      detail::write_file(report_path, report::to_json_text(rep));
    } else if (report_format == ".csv") {
      detail::write_file(report_path, report::to_csv(rep));
    }
    if (!quiet) {
      detail::print_table(out, rep);
    }
    return verification_failed ? kExitVerificationFailed : kExitOk;
  } catch (const std::exception& e) {
    err << "error: ";
    if (!current.empty()) {
      err << current << ": ";
    }
    err << e.what() << '\n';
    return kExitError;
  }
}

} // namespace depthmap::cli
