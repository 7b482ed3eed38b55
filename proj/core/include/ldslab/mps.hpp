#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ldslab/lp_model.hpp"

namespace ldslab {

// Free-format MPS with sections NAME, ROWS, COLUMNS, RHS, BOUNDS, ENDATA.
// The objective row is named OBJ (type N). Every variable appears in COLUMNS
// with its objective coefficient so that parsing recovers the exact variable
// set and ordering; bound lines are emitted only when a bound differs from
// the default [0, +inf).
std::string write_mps_string(const LpModel& model);
void write_mps(const LpModel& model, const std::filesystem::path& path);

LpModel parse_mps_string(std::string_view text);
LpModel parse_mps(const std::filesystem::path& path);

}  // namespace ldslab
