#pragma once

#include "susy/config.hpp"

namespace susy {

/// Executes one configured run, writing `report` and `*.table` artifacts
/// into config.output_dir.
/// Exit status: 0 success, 1 validation error, 2 some residual exceeded its
/// configured tolerance, 3 solver failure.
int run(const RunConfig& config);

}  // namespace susy
