#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "cli/cli.hpp"
#include "cli/commands.hpp"
#include "cli/output.hpp"
#include "tcgm/errors.hpp"
#include "tcgm/mclab.hpp"

namespace tcgm::cli {

namespace {

void bind_options(CLI::App& app, RunConfig& c, std::string& format) {
    app.add_option("--subordinator", c.subordinator, "Random clock")->check(CLI::IsMember({"tss", "gamma"}));
    app.add_option("--alpha", c.alpha, "TSS stability index in (0,1)");
    app.add_option("--lambda", c.lambda, "TSS tempering parameter > 0");
    app.add_option("--nu", c.nu, "Gamma process parameter > 0");
    app.add_option("--a", c.a, "Weight of the first fBm");
    app.add_option("--b", c.b, "Weight of the second fBm");
    app.add_option("--h1", c.h1, "First Hurst index in (0,1)");
    app.add_option("--h2", c.h2, "Second Hurst index in (0,1)");
    app.add_option("--s", c.s, "Fixed earlier time s > 0");
    app.add_option("--t-min", c.t_min, "First point of the geometric t grid");
    app.add_option("--t-max", c.t_max, "Last point of the geometric t grid");
    app.add_option("--t-count", c.t_count, "Number of grid points");
    app.add_option("--paths", c.paths, "Monte Carlo paths (0 skips Monte Carlo where optional)");
    app.add_option("--seed", c.seed, "Master seed");
    app.add_option("--q", c.q, "Moment orders for the moments command")->delimiter(',');
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", c.out, "Output path, '-' for standard output");
    app.add_option("--debug-predicted-exponent", c.debug_predicted_exponent)->group("");
}

void validate(const RunConfig& c, const std::string& command) {
    (void)c.spec();
    detail::require(c.t_min > 0.0 && c.t_max > c.t_min, "--t-min must be positive and below --t-max");
    detail::require(c.t_count >= 2, "--t-count must be at least 2");
    if (command == "cov-table" || command == "lrd") {
        detail::require(c.s > 0.0 && c.t_min > c.s, "--t-min must exceed --s > 0");
        detail::require(c.paths == 0 || c.paths >= kMinPaths, "--paths must be 0 or at least 100");
    }
    if (command == "lrd") detail::require(c.t_count >= 5, "--t-count must be at least 5 for a decay fit");
    if (command == "simulate") detail::require(c.paths >= 1, "--paths must be at least 1");
    if (command == "moments") {
        const double q_max = c.subordinator == "tss" ? 2.0 : std::numeric_limits<double>::infinity();
        for (double q : c.q) detail::require(q > 0.0 && q <= q_max, "--q out of range");
    }
}

// Writes the result to the configured destination.
int emit(const RunConfig& c, const std::string& command, const CommandResult& result, std::ostream& out,
         std::ostream& err) {
    const bool to_stdout = c.out == "-";
    std::ofstream file;
    if (!to_stdout) {
        file.open(c.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open output file '" << c.out << "'\n";
            return kExitIo;
        }
    }
    std::ostream& data = to_stdout ? out : file;
    if (c.format == Format::csv) {
        write_csv(data, result.table);
    } else {
        write_json(data, result.table, config_json(c, command), result.summary);
    }
    data.flush();
    if (!data) {
        err << "error: failed writing output to '" << c.out << "'\n";
        return kExitIo;
    }
    std::ostream& notes = to_stdout ? err : out;
    for (const auto& line : result.notes) notes << line << '\n';
    return result.status;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and verification toolkit for time-changed generalized mixed fractional Brownian motion",
                 "tcgm"};
    app.set_config("--config", "", "INI file of key=value pairs; command-line flags take precedence");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig config;
    std::string format = "csv";
    bind_options(app, config, format);

    const std::map<std::string, std::function<CommandResult(const RunConfig&)>> commands{
        {"simulate", cmd_simulate}, {"cov-table", cmd_cov_table}, {"lrd", cmd_lrd}, {"moments", cmd_moments}};
    app.add_subcommand("simulate", "Sample paths of the clock and of the time-changed process");
    app.add_subcommand("cov-table", "Exact, asymptotic and Monte Carlo covariance over the t grid");
    app.add_subcommand("lrd", "Correlation decay fit against the predicted exponent; exit 3 on mismatch");
    app.add_subcommand("moments", "Exact and asymptotic subordinator moments over the t grid");
    app.add_subcommand("selftest", "Fast verification checks; exit 3 if any fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    config.format = format == "json" ? Format::json : Format::csv;
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        validate(config, command);
        if (command == "selftest") return cmd_selftest(config, out);
        return emit(config, command, commands.at(command)(config), out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitVerify;
    }
}

}  // namespace tcgm::cli
