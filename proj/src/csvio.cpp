#include "heatlab/csvio.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace heatlab {

std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

void CsvDoc::add_row(std::vector<double> xs) {
    if (xs.size() != columns.size())
        throw std::invalid_argument("CsvDoc::add_row: cell count does not match the header");
    rows.push_back(std::move(xs));
}

std::string render_csv(const CsvDoc& doc, bool stamp) {
    std::string out;
    out.reserve(64 + doc.rows.size() * (doc.columns.size() + 1) * 20);
    out += "# config: ";
    out += doc.config_json;
    out += '\n';
    if (stamp) {
        const std::time_t now =
            std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char ts[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm);
        out += "# generated: ";
        out += ts;
        out += '\n';
    }
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
        if (i) out += ',';
        out += doc.columns[i];
    }
    out += '\n';
    for (const auto& row : doc.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_sci(row[i]);
        }
        out += '\n';
    }
    for (const auto& [key, value] : doc.trailing) {
        out += "# ";
        out += key;
        out += ": ";
        out += format_sci(value);
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const CsvDoc& doc, bool stamp) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    f << render_csv(doc, stamp);
    if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

}  // namespace heatlab
