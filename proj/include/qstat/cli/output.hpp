#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qstat/cli/config.hpp"

namespace qstat::cli {

using Cell = std::variant<double, std::string>;

/// A table plus the metadata that produced it.
struct Dataset {
    std::string kind; // the command that produced it
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> notes;

    std::size_t column(const std::string& name) const
    {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) {
            throw std::invalid_argument("dataset has no column '" + name + "'");
        }
        return static_cast<std::size_t>(it - columns.begin());
    }

    double number(std::size_t row, std::size_t col) const
    {
        if (const auto* v = std::get_if<double>(&rows.at(row).at(col))) {
            return *v;
        }
        throw std::invalid_argument("column '" + columns.at(col) + "' is not numeric");
    }
};

inline std::string format_number(double v, int precision = 15)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline std::string format_cell(const Cell& c, int precision)
{
    if (const auto* v = std::get_if<double>(&c)) {
        return format_number(*v, precision);
    }
    return std::get<std::string>(c);
}

namespace detail {

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch;
        if (ch == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

} // namespace detail

/// `# key = value` metadata lines, `# note: ...` lines, header, rows.
inline void write_csv(const Dataset& d, int precision, std::ostream& out)
{
    out << "# schema_version = " << schema_version << '\n';
    for (const auto& [k, v] : d.metadata) {
        out << "# " << k << " = " << v << '\n';
    }
    for (const auto& n : d.notes) {
        out << "# note: " << n << '\n';
    }
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        out << (i ? "," : "") << d.columns[i];
    }
    out << '\n';
    for (const auto& row : d.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << detail::csv_escape(format_cell(row[i], precision));
        }
        out << '\n';
    }
}

/// {schema_version, config, notes, data}. Numbers are rounded to
/// `precision` significant digits first, then written in shortest
/// round-trip form, so CSV and JSON carry the same values.
inline void write_json(const Dataset& d, int precision, std::ostream& out)
{
    nlohmann::ordered_json doc;
    doc["schema_version"] = schema_version;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.metadata) {
        config[k] = v;
    }
    doc["config"] = config;
    doc["notes"] = d.notes;
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const auto& row : d.rows) {
        nlohmann::ordered_json rec = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const auto* v = std::get_if<double>(&row[i])) {
                if (std::isfinite(*v)) {
                    rec[d.columns[i]] = std::stod(format_number(*v, precision));
                } else {
                    rec[d.columns[i]] = nullptr;
                }
            } else {
                rec[d.columns[i]] = std::get<std::string>(row[i]);
            }
        }
        data.push_back(std::move(rec));
    }
    doc["data"] = std::move(data);
    out << doc.dump(2) << '\n';
}

inline void write_dataset(const Dataset& d, const std::string& format, int precision, std::ostream& out)
{
    if (format == "csv") {
        write_csv(d, precision, out);
    } else if (format == "json") {
        write_json(d, precision, out);
    } else {
        throw UsageError("unknown output format '" + format + "' (expected csv or json)");
    }
}

// ------------------------------------------------------------ plot scripts

namespace detail {

inline void data_block(std::ostream& s, const std::string& name, const Dataset& d,
                       const std::vector<std::size_t>& cols, int precision,
                       const std::vector<std::size_t>& rows)
{
    s << '$' << name << " << EOD\n";
    for (std::size_t r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            s << (i ? " " : "") << format_number(d.number(r, cols[i]), precision);
        }
        s << '\n';
    }
    s << "EOD\n";
}

inline std::vector<std::size_t> all_rows(const Dataset& d)
{
    std::vector<std::size_t> r(d.rows.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = i;
    }
    return r;
}

/// Row indices grouped by the value in column `col`, in first-seen order.
inline std::vector<std::pair<double, std::vector<std::size_t>>> group_rows(const Dataset& d, std::size_t col)
{
    std::vector<std::pair<double, std::vector<std::size_t>>> groups;
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        const double key = d.number(r, col);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
        if (it == groups.end()) {
            groups.push_back({key, {r}});
        } else {
            it->second.push_back(r);
        }
    }
    return groups;
}

inline void header(std::ostream& s, const Dataset& d, const std::string& title)
{
    s << "# gnuplot script\n";
    for (const auto& [k, v] : d.metadata) {
        s << "# " << k << " = " << v << '\n';
    }
    s << "set title \"" << title << "\"\n";
    s << "set key top right\n";
    s << "set grid\n";
}

} // namespace detail

/// Self-contained gnuplot script with the data inlined.
///
/// kinds: "occupation" (every column against eta; convergents shaded when
/// present), "bounds" (shaded n_lower..n_upper with the exact curve),
/// "eos" (P lambda^3/kT against z, one curve per q), "virial" (bar chart
/// of b_2..b_K per q).
inline std::string emit_plot_script(const Dataset& d, const std::string& kind, int precision = 15)
{
    std::ostringstream s;
    if (kind == "occupation" || kind == "bounds") {
        const std::size_t eta = d.column("eta");
        std::vector<std::size_t> cols{eta};
        std::vector<std::string> names;
        for (std::size_t c = 0; c < d.columns.size(); ++c) {
            if (c != eta && !d.rows.empty() && std::holds_alternative<double>(d.rows.front()[c])) {
                cols.push_back(c);
                names.push_back(d.columns[c]);
            }
        }
        detail::header(s, d, kind == "bounds" ? "occupation and convergent bounds" : "occupation");
        s << "set xlabel \"eta\"\nset ylabel \"n\"\nset logscale y\n";
        detail::data_block(s, "data", d, cols, precision, detail::all_rows(d));
        const auto lo = std::find(names.begin(), names.end(), "n_lower");
        const auto hi = std::find(names.begin(), names.end(), "n_upper");
        const bool shade = lo != names.end() && hi != names.end();
        if (kind == "bounds" && !shade) {
            throw std::invalid_argument("bounds plot needs n_lower and n_upper columns");
        }
        s << "plot ";
        bool first = true;
        if (shade) {
            s << "$data using 1:" << (lo - names.begin()) + 2 << ':' << (hi - names.begin()) + 2
              << " with filledcurves fs transparent solid 0.25 title \"n_lower..n_upper\"";
            first = false;
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            s << (first ? "" : ", \\\n     ") << "$data using 1:" << i + 2 << " with lines title \"" << names[i] << '"';
            first = false;
        }
        s << '\n';
        return s.str();
    }
    if (kind == "eos") {
        const std::size_t q = d.column("q");
        const std::size_t z = d.column("z");
        const std::size_t p = d.column("P_lambda3_over_kT");
        detail::header(s, d, "equation of state");
        s << "set xlabel \"z\"\nset ylabel \"P lambda^3 / kT\"\n";
        const auto groups = detail::group_rows(d, q);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            detail::data_block(s, "q" + std::to_string(g), d, {z, p}, precision, groups[g].second);
        }
        s << "plot ";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            s << (g ? ", \\\n     " : "") << "$q" << g << " using 1:2 with linespoints title \"q = "
              << format_number(groups[g].first, precision) << '"';
        }
        s << '\n';
        return s.str();
    }
    if (kind == "virial") {
        const std::size_t q = d.column("q");
        const std::size_t k = d.column("k");
        const std::size_t b = d.column("b_k");
        detail::header(s, d, "virial coefficients");
        s << "set xlabel \"k\"\nset ylabel \"b_k\"\n";
        s << "set style data histograms\nset style histogram clustered gap 1\nset style fill solid 0.6 border -1\n";
        const auto groups = detail::group_rows(d, q);
        // Pivot: one row per k >= 2, one column per q.
        std::map<double, std::vector<double>> table;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (std::size_t r : groups[g].second) {
                const double kk = d.number(r, k);
                if (kk < 2.0) {
                    continue;
                }
                auto& row = table[kk];
                row.resize(groups.size(), std::nan(""));
                row[g] = d.number(r, b);
            }
        }
        s << "$data << EOD\n";
        for (const auto& [kk, row] : table) {
            s << format_number(kk, precision);
            for (double v : row) {
                s << ' ' << format_number(v, precision);
            }
            s << '\n';
        }
        s << "EOD\nplot ";
        for (std::size_t g = 0; g < groups.size(); ++g) {
            s << (g ? ", \\\n     " : "") << "$data using " << g + 2 << ":xtic(1) title \"q = "
              << format_number(groups[g].first, precision) << '"';
        }
        s << '\n';
        return s.str();
    }
    throw std::invalid_argument("unknown plot kind '" + kind + "' (expected occupation, bounds, eos or virial)");
}

} // namespace qstat::cli
