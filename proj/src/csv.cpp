#include "herd/csv.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace herd {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_series_csv(const std::string& path, const UniformSeries& series,
                      bool with_sidecar) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << "t,value\n";
    for (Eigen::Index k = 0; k < series.size(); ++k)
        out << format_double(series.time_at(k)) << ','
            << format_double(series.values(k)) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path);

    if (with_sidecar) {
        nlohmann::json meta(series.meta);
        meta["t0"] = series.t0;
        meta["dt"] = series.dt;
        meta["samples"] = series.size();
        std::ofstream side(path + ".meta.json");
        side << meta.dump(2) << '\n';
    }
}

UniformSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");

    std::vector<double> t, v;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected `t,value` row");
        char* end = nullptr;
        const double tv = std::strtod(line.c_str(), &end);
        const double vv = std::strtod(line.c_str() + comma + 1, &end);
        if (!std::isfinite(tv))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": bad time value");
        t.push_back(tv);
        v.push_back(vv);
    }
    if (t.size() < 2)
        throw std::runtime_error(path + ": fewer than two samples");

    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (dt <= 0.0)
        throw std::runtime_error(path + ": non-increasing time column");
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double expected = t.front() + static_cast<double>(k) * dt;
        if (std::abs(t[k] - expected) > 1e-6 * std::max(1.0, std::abs(expected)) + 1e-9)
            throw std::runtime_error(path + ": time column is not uniformly spaced (row " +
                                     std::to_string(k + 2) + ")");
    }

    UniformSeries s;
    s.t0 = t.front();
    s.dt = dt;
    s.values = Eigen::Map<Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));

    std::ifstream side(path + ".meta.json");
    if (side) {
        nlohmann::json meta = nlohmann::json::parse(side, nullptr, false);
        if (!meta.is_discarded() && meta.is_object())
            for (const auto& [key, val] : meta.items())
                if (val.is_string())
                    s.meta[key] = val.get<std::string>();
    }
    return s;
}

void write_table_csv(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

Table read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open: " + path);

    Table table;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path + ": empty file");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ','))
        table.columns.push_back(cell);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": non-numeric cell `" + cell + "`");
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in)
            break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

} // namespace herd
