#pragma once

#include "config.hpp"
#include "report.hpp"

namespace zrange::cli {

/// Runs the study named by `c.command`.  Numerical trouble inside a row
/// marks that row flagged or error; precondition violations propagate as
/// zrange::InvalidArgument or ConfigError.
Report run(const RunConfig& c);

}  // namespace zrange::cli
