#include "sideband/table.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "sideband/version.hpp"

namespace sideband {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string render_csv(const ResultTable& t, const std::string& config_hash_hex,
                       bool deterministic)
{
    std::ostringstream o;
    o << "# scenario: " << t.scenario << "\n";
    o << "# version: " << kVersion << "\n";
    o << "# config: " << config_hash_hex << "\n";
    if (!deterministic) {
        const std::time_t now = std::time(nullptr);
        char stamp[64];
        std::tm parts{};
        gmtime_r(&now, &parts);
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &parts);
        o << "# generated: " << stamp << "\n";
    }
    for (size_t k = 0; k < t.columns.size(); ++k) {
        o << (k ? "," : "") << t.columns[k];
    }
    o << "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) {
            throw std::runtime_error("result table is ragged, refusing to render");
        }
        for (size_t k = 0; k < row.size(); ++k) {
            if (!std::isfinite(row[k])) {
                throw std::runtime_error("result table holds a non-finite value in column '" +
                                         t.columns[k] + "'");
            }
            o << (k ? "," : "") << format_double(row[k]);
        }
        o << "\n";
    }
    return o.str();
}

void write_csv(const ResultTable& t, const std::string& path,
               const std::string& config_hash_hex, bool deterministic)
{
    const std::string body = render_csv(t, config_hash_hex, deterministic);
    if (path == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << body;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for output file: " + path);
    }
}

} // namespace sideband
