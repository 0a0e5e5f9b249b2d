#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace wpl {

using Cell = std::variant<long, double, std::string>;

std::string format_cell(const Cell& c);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    std::string to_csv() const;
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string threshold;
};

struct ScalingReport {
    std::string experiment;
    Table table;
    nlohmann::json summary;
    std::vector<CheckResult> checks;

    bool checks_passed() const;
};

std::uint64_t fnv1a_hash(const std::string& s);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace wpl
