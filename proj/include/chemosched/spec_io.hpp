#pragma once

// JSON form of ProblemSpec.
//
//   {
//     "K": 52, "s_init": 50, "s_min": 10, "s_tol": 500,
//     "growth": {"alpha": 1.5, "beta": 1}
//            | {"exponential": {"phi0": 50, "b": 4.4817}}
//            | {"gompertz": {"phi0": 50, "a": 0.72, "b": 0.18}},
//     "treatments": [{"id": 1, "cost": 10, "reduction": 0.6}],
//     "spacing_delta": 0,          optional, default 0
//     "forced_periods": [],        optional
//     "floor_mode": false,         optional
//     "include_terminal": true     optional
//   }
//
// Parameter blocks are converted to (alpha, beta) on load; saving always
// writes the raw coefficients.  Unknown keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "chemosched/model.hpp"

namespace chemosched {

// kParse on malformed JSON or schema mismatch; growth errors propagate.
ProblemSpec spec_from_json(std::string_view text);
std::string spec_to_json(const ProblemSpec& spec);

// kIo when the file cannot be read or written.
ProblemSpec load_spec(const std::filesystem::path& path);
void save_spec(const std::filesystem::path& path, const ProblemSpec& spec);

// Whole-file helpers shared by the report writers.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace chemosched
