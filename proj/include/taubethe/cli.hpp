#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "taubethe/error.hpp"

namespace taubethe::cli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum ExitCode : int { kPass = 0, kMathFailure = 1, kInputError = 2, kNoConvergence = 3 };

enum class Command { BetheSolve, ScalarProduct, TauCheck, Dwpf, FermionVev, GrassmannPoint, IdentityCheck };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);
std::vector<std::string> command_names();

struct RunConfig {
  int M = 0;
  int N = 0;
  std::string q;
  std::vector<std::string> z;
  int precision_bits = 128;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::vector<std::string> x;
  int num_solutions = 1;
  json raw;

  double tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

/// Throws Error(InvalidInput) on malformed or out-of-range fields.
RunConfig parse_config(const json& doc);

struct RunOptions {
  std::optional<double> perturb;
  std::optional<int> precision_bits;
  std::optional<std::uint64_t> seed;
};

struct RunResult {
  json report;
  int exit_code = kPass;
};

int exit_code_for(ErrorKind kind);

/// Executes one command; never throws for mathematical or input failures,
/// which are reported through the exit code and the report's "error" object.
RunResult run(Command command, const json& config_doc, const RunOptions& options = {});

/// Canonical textual form of a report (sorted keys, two-space indent).
std::string dump_report(const json& report);

}  // namespace taubethe::cli
