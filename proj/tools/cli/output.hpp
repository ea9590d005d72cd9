#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "json.hpp"

namespace tcgm::cli {

/// Numeric table; NaN marks a value that was not computed.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct CommandResult {
    Table table;
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> notes;  // human-readable lines
    int status = kExitOk;
};

nlohmann::json config_json(const RunConfig& config, const std::string& command);

/// 17 significant digits; NaN as "nan".
std::string format_number(double x);

void write_csv(std::ostream& os, const Table& table);
/// {"config", "columns", "rows", "summary"}; NaN becomes null.
void write_json(std::ostream& os, const Table& table, const nlohmann::json& config, const nlohmann::json& summary);

}  // namespace tcgm::cli
