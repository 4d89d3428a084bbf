#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "amodes/distance_system.hpp"

namespace amodes {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of run_command.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitSolver = 2 };

/// Runs one command line (without the program name). Text or JSON goes to
/// `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lengths from JSON text: {"edges": {"1-2": 180, ...}} (bar lengths) with
/// optional {"squared": {"1-2": "2"}} entries for exact squares, or a
/// parameter vector (bare array or {"vector": [...], "units": ...}) listed in
/// the graph's lexicographic edge order. Vector entries are squared distances
/// unless "units" is "plain", the same reading the optimizer uses, so a
/// best vector can be fed back unchanged. For V17 the order is l_0..l_9 on
/// (1,2),(1,3),(1,4),(1,7),(2,3),(2,5),(3,6),(4,6),(4,7),(5,6) and l_10 on (5,7).
/// Throws std::invalid_argument on missing edges or non-positive lengths.
DistanceAssignment parse_lengths(const nlohmann::json& j, const LinkageGraph& g);
DistanceAssignment read_lengths(const std::string& path, const LinkageGraph& g);

}  // namespace amodes
