#include "qram/sweep.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qram {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

void SweepResult::write_csv(std::ostream& os) const {
    os << "#";
    for (const auto& [k, v] : metadata) os << " " << k << "=" << v;
    os << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ",";
        os << columns[i];
    }
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw std::runtime_error("SweepResult: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << format_double(row[i]);
        }
        os << "\n";
    }
}

std::filesystem::path SweepResult::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto path = dir / (name + ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("SweepResult: cannot open " + path.string() + " for writing");
    write_csv(f);
    if (!f) throw std::runtime_error("SweepResult: write failed for " + path.string());
    return path;
}

}  // namespace qram
