#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace randsum {

/// One row per n of the convergence sweep. NaN marks metrics a row-level
/// failure prevented from being computed.
struct ReportRow {
    std::int64_t n = 0;
    double mean_index = std::numeric_limits<double>::quiet_NaN();
    double levy = std::numeric_limits<double>::quiet_NaN();
    double weak2d = std::numeric_limits<double>::quiet_NaN();
    double coherency_gap = std::numeric_limits<double>::quiet_NaN();
    double lemma1_gap = std::numeric_limits<double>::quiet_NaN();
    double lindeberg_05 = std::numeric_limits<double>::quiet_NaN();
    double lyapunov = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;
    std::uint64_t seed = 0;
    std::string error;  // empty when the row completed
};

struct ConvergenceReport {
    std::string name;
    std::vector<ReportRow> rows;
};

inline constexpr const char* kReportCsvHeader =
    "n,mean_index,levy,weak2d,coherency_gap,lemma1_gap,lindeberg_0.05,lyapunov,seconds,seed";

namespace detail {

/// Fixed 12-significant-digit rendering; stable under parse + re-render.
inline std::string num12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

/// Zero the wall-clock column (timing is the one physically nondeterministic
/// field; clearing it makes reports byte-comparable across runs).
inline void clear_timings(ConvergenceReport& rep) {
    for (auto& r : rep.rows) r.seconds = 0.0;
}

inline std::string to_csv(const ConvergenceReport& rep) {
    std::string out = kReportCsvHeader;
    out += '\n';
    for (const auto& r : rep.rows) {
        out += std::to_string(r.n);
        for (double v : {r.mean_index, r.levy, r.weak2d, r.coherency_gap, r.lemma1_gap,
                         r.lindeberg_05, r.lyapunov, r.seconds}) {
            out += ',';
            out += detail::num12(v);
        }
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

/// Hand-rolled JSON writer: fixed key order and 12-significant-digit
/// numbers keep the bytes stable; rows carry the error annotation.
inline std::string to_json(const ConvergenceReport& rep) {
    std::string out = "{\n  \"name\": \"" + rep.name + "\",\n  \"rows\": [";
    bool first = true;
    for (const auto& r : rep.rows) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "    {\"n\": " + std::to_string(r.n);
        const char* keys[] = {"mean_index", "levy",           "weak2d",  "coherency_gap",
                              "lemma1_gap", "lindeberg_0.05", "lyapunov", "seconds"};
        const double vals[] = {r.mean_index, r.levy,          r.weak2d,  r.coherency_gap,
                               r.lemma1_gap, r.lindeberg_05,  r.lyapunov, r.seconds};
        for (int i = 0; i < 8; ++i) {
            out += ", \"";
            out += keys[i];
            out += "\": ";
            if (std::isnan(vals[i]))
                out += "null";
            else
                out += detail::num12(vals[i]);
        }
        out += ", \"seed\": " + std::to_string(r.seed);
        if (!r.error.empty()) out += ", \"error\": \"" + r.error + "\"";
        out += "}";
    }
    out += "\n  ]\n}\n";
    return out;
}

namespace detail {

inline double parse_num(const std::string& s) {
    if (s == "null" || s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(s);
}

}  // namespace detail

inline ConvergenceReport read_csv(std::istream& in) {
    ConvergenceReport rep;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("report CSV: empty input");
    if (line != kReportCsvHeader) throw std::runtime_error("report CSV: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) throw std::runtime_error("report CSV: bad row: " + line);
        ReportRow r;
        r.n = std::stoll(cells[0]);
        r.mean_index = detail::parse_num(cells[1]);
        r.levy = detail::parse_num(cells[2]);
        r.weak2d = detail::parse_num(cells[3]);
        r.coherency_gap = detail::parse_num(cells[4]);
        r.lemma1_gap = detail::parse_num(cells[5]);
        r.lindeberg_05 = detail::parse_num(cells[6]);
        r.lyapunov = detail::parse_num(cells[7]);
        r.seconds = detail::parse_num(cells[8]);
        r.seed = std::stoull(cells[9]);
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

inline ConvergenceReport read_json(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    ConvergenceReport rep;
    rep.name = doc.value("name", "");
    for (const auto& jr : doc.at("rows")) {
        ReportRow r;
        r.n = jr.at("n").get<std::int64_t>();
        auto num = [&](const char* key) -> double {
            const auto& v = jr.at(key);
            return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
        };
        r.mean_index = num("mean_index");
        r.levy = num("levy");
        r.weak2d = num("weak2d");
        r.coherency_gap = num("coherency_gap");
        r.lemma1_gap = num("lemma1_gap");
        r.lindeberg_05 = num("lindeberg_0.05");
        r.lyapunov = num("lyapunov");
        r.seconds = num("seconds");
        r.seed = jr.at("seed").get<std::uint64_t>();
        if (jr.contains("error")) r.error = jr.at("error").get<std::string>();
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace randsum
