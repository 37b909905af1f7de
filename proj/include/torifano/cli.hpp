#pragma once

#include "torifano/problem.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace torifano {

inline constexpr const char* kVersion = "torifano 0.1.0";

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalidInput = 2, kExitNoConvergence = 3 };

std::vector<std::string> command_names();

struct RunOutput {
    nlohmann::json report;
    int exit_code = kExitOk;
    /// ma-solve only: one record per completed t.
    std::vector<nlohmann::json> snapshots;
};

/// Dispatches one command. Verdicts (NotExists, Obstructed) are results with
/// exit code 0; a soliton-solve that does not converge yields exit code 3.
/// Library errors propagate; exit_code_for() maps them.
RunOutput run_command(const std::string& command, const ProblemDocument& doc);

/// Report without the wall-time field, for determinism checks.
nlohmann::json strip_wall_time(nlohmann::json report);

/// Exit code for an exception escaping run_command or problem loading.
int exit_code_for(const std::exception& e);

}  // namespace torifano
