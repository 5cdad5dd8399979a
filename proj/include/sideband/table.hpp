#pragma once

// Rectangular numeric result tables and their CSV rendering.

#include <string>
#include <vector>

namespace sideband {

struct ResultTable {
    std::string scenario;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

// '#'-prefixed provenance comments (scenario, version, config hash, and a
// generation timestamp unless deterministic), then the header row, then data.
// Throws on ragged rows or non-finite values.
std::string render_csv(const ResultTable& t, const std::string& config_hash_hex,
                       bool deterministic);

// path "-" writes to stdout. Unwritable destination throws std::runtime_error
// naming the path.
void write_csv(const ResultTable& t, const std::string& path,
               const std::string& config_hash_hex, bool deterministic);

} // namespace sideband
