#include "cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace tcgm::cli {

nlohmann::json config_json(const RunConfig& c, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["subordinator"] = c.subordinator;
    if (c.subordinator == "tss") {
        j["alpha"] = c.alpha;
        j["lambda"] = c.lambda;
    } else {
        j["nu"] = c.nu;
    }
    j["a"] = c.a;
    j["b"] = c.b;
    j["h1"] = c.h1;
    j["h2"] = c.h2;
    j["s"] = c.s;
    j["t_min"] = c.t_min;
    j["t_max"] = c.t_max;
    j["t_count"] = c.t_count;
    j["paths"] = c.paths;
    j["seed"] = c.seed;
    return j;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table, const nlohmann::json& config, const nlohmann::json& summary) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double x : row) r.push_back(std::isnan(x) ? nlohmann::json(nullptr) : nlohmann::json(x));
        rows.push_back(std::move(r));
    }
    nlohmann::json doc;
    doc["config"] = config;
    doc["columns"] = table.columns;
    doc["rows"] = std::move(rows);
    doc["summary"] = summary;
    os << doc.dump(2) << '\n';
}

}  // namespace tcgm::cli
