#pragma once

#include <iosfwd>

#include "cli/output.hpp"

namespace tcgm::cli {

CommandResult cmd_simulate(const RunConfig& config);
CommandResult cmd_cov_table(const RunConfig& config);
CommandResult cmd_lrd(const RunConfig& config);
CommandResult cmd_moments(const RunConfig& config);

/// Fast verification subset; one line per check on `os`. Returns kExitOk or kExitVerify.
int cmd_selftest(const RunConfig& config, std::ostream& os);

/// Largest allowed |oracle slope - predicted exponent| for the lrd command.
inline constexpr double kSlopeTolerance = 0.05;

}  // namespace tcgm::cli
