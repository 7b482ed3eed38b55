#pragma once

#include <filesystem>
#include <string>

#include "ldslab/lp_model.hpp"

namespace ldslab {

// Runs an external LP solver through a shell command. `command_template` must
// contain the placeholders {mps} and {sol}; the model is written as free-format
// MPS to {mps} and the command is expected to leave a solution file at {sol}
// using the grammar:
//
//   status <optimal|infeasible|unbounded|limit|error>
//   objective <float>
//   <variable-name> <value>
//   ...
//
// Variables absent from the file default to 0. A shim for a concrete solver is
// a thin conversion script; see tools/mps_solve.cpp for a reference shim.
Solution solve_external(const LpModel& model, const std::string& command_template,
                        const std::filesystem::path& workdir, double time_limit_s = 0.0);

// Parses the solution-file grammar against a model's variable set.
Solution parse_solution_file(const LpModel& model, const std::filesystem::path& path);

}  // namespace ldslab
