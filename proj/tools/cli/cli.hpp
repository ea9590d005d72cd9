#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tcgm/gmfbm.hpp"

namespace tcgm::cli {

/// Process exit codes, shared by every command.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,      // bad flags, bad config file, parameters out of domain
    kExitIo = 2,         // output could not be written
    kExitVerify = 3,     // a verification check failed, or a numerical routine gave up
};

enum class Format { csv, json };

struct RunConfig {
    std::string subordinator = "tss";
    double alpha = 0.7;
    double lambda = 1.0;
    double nu = 1.0;
    double a = 1.0;
    double b = 1.0;
    double h1 = 0.55;
    double h2 = 0.8;
    double s = 1.0;
    double t_min = 100.0;
    double t_max = 1e4;
    std::size_t t_count = 12;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;
    Format format = Format::csv;
    std::string out = "-";  // "-" is standard output
    std::vector<double> q;  // moments: orders; empty means {2 H1, 2 H2}
    std::optional<double> debug_predicted_exponent;

    TimeChangedSpec spec() const;
    /// Geometric grid from t_min to t_max with t_count points.
    std::vector<double> t_grid() const;
};

/// Parses argv, runs one command and returns its exit code. Data goes to the
/// --out path, or to `out` when that is "-"; human-readable notes go to `out`
/// when data is written to a file and to `err` otherwise.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tcgm::cli
