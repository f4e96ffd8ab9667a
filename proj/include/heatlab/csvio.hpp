/// @file csvio.hpp
/// @brief Deterministic CSV documents with a config-echo header.
///
/// Every table the lab emits has the same shape: a "# config: ..." line that
/// echoes the generating configuration verbatim, an optional "# generated:"
/// timestamp (only when stamping is requested, so unstamped reruns stay
/// byte-identical), a column header, rows printed with "%.12e", and trailing
/// "# key: value" lines for fitted slopes and other scalar summaries.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace heatlab {

/// Fixed-width scientific rendering used for every numeric cell ("%.12e").
std::string format_sci(double x);

struct CsvDoc {
    std::string config_json = "{}";
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> trailing;

    /// Appends one row; must match the column count.
    void add_row(std::vector<double> xs);
    void add_trailing(std::string key, double value) {
        trailing.emplace_back(std::move(key), value);
    }
};

/// Renders the whole document, "\n" line endings throughout.
std::string render_csv(const CsvDoc& doc, bool stamp = false);

/// Renders and writes atomically enough for our purposes (single ofstream).
void write_csv(const std::string& path, const CsvDoc& doc, bool stamp = false);

}  // namespace heatlab
