#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "sar2d/asymptotics.hpp"
#include "sar2d/error.hpp"

namespace sar2d {

/// Shortest decimal string that parses back to the same double.
inline std::string format_real(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_real(std::string_view text) {
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw invalid_parameter("not a real number: '" + std::string(text) + "'");
    }
    return out;
}

inline long long parse_integer(std::string_view text) {
    long long out = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw invalid_parameter("not an integer: '" + std::string(text) + "'");
    }
    return out;
}

constexpr std::string_view convergence_csv_header = "n,var_exact,scaled,limit,abs_err,rel_err";

/// Header row plus one LF-terminated line per row.
inline void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep) {
    os << convergence_csv_header << '\n';
    for (const auto& r : rep.rows) {
        os << r.n << ',' << format_real(r.var_exact) << ',' << format_real(r.scaled) << ','
           << format_real(r.limit) << ',' << format_real(r.abs_err) << ',' << format_real(r.rel_err) << '\n';
    }
}

inline std::vector<ConvergenceRow> read_convergence_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != convergence_csv_header) {
        throw invalid_parameter("convergence CSV: missing or unexpected header");
    }
    std::vector<ConvergenceRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
            cells.push_back(rest.substr(0, pos));
        }
        cells.push_back(rest);
        if (cells.size() != 6) throw invalid_parameter("convergence CSV: expected 6 columns");
        ConvergenceRow r;
        r.n = parse_integer(cells[0]);
        r.var_exact = parse_real(cells[1]);
        r.scaled = parse_real(cells[2]);
        r.limit = parse_real(cells[3]);
        r.abs_err = parse_real(cells[4]);
        r.rel_err = parse_real(cells[5]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace sar2d
