#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qram {

// Labeled table of sweep rows. Every experiment emits one of these per CSV
// file: a `#`-prefixed metadata comment line, a header row, then data rows.
struct SweepResult {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_metadata(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
    void write_csv(std::ostream& os) const;
    // writes <dir>/<name>.csv
    std::filesystem::path save(const std::filesystem::path& dir) const;
};

std::string format_double(double v);

}  // namespace qram
