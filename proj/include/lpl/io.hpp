#pragma once

// Output formatting shared by the CLI: fixed 15-significant-digit floats so
// identical runs produce byte-identical files.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpl {

inline constexpr const char* version_string = "0.1.0";

using ordered_json = nlohmann::ordered_json;

inline std::string format_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

struct output_table {
    ordered_json meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(std::ostream& os, const output_table& t) {
    os << "# meta " << t.meta.dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
}

inline void write_json(std::ostream& os, const output_table& t) {
    ordered_json doc;
    doc["meta"] = t.meta;
    doc["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json r = ordered_json::array();
        for (const auto& cell : row) {
            // numeric cells stay numbers in JSON; everything else is a string
            try {
                std::size_t pos = 0;
                const double v = std::stod(cell, &pos);
                if (pos == cell.size())
                    r.push_back(ordered_json::parse(cell));
                else
                    r.push_back(cell);
                (void)v;
            } catch (...) {
                r.push_back(cell);
            }
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << "\n";
}

inline void write_table(std::ostream& os, const output_table& t, const std::string& format) {
    if (format == "json")
        write_json(os, t);
    else
        write_csv(os, t);
}

} // namespace lpl
