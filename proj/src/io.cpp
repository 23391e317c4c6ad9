#include "zd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zd {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    double lo = 0.0, hi = 0.0;
    long n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
        !(in >> std::ws).eof())
        throw std::invalid_argument("grid spec must be lo:hi:n, got '" + spec + "'");
    std::vector<double> grid(static_cast<std::size_t>(n));
    if (n == 1) {
        grid[0] = lo;
        return grid;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (long i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}
}  // namespace

void write_field_csv(const ZDField& field, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,value,ell,caustic_flag\n";
    for (std::size_t i = 0; i < field.grid.size(); ++i)
        out << format_g17(field.grid[i]) << ',' << format_g17(field.values[i]) << ','
            << field.ell[i] << ',' << int(field.caustic[i]) << '\n';
}

void write_snapshot_csv(const std::vector<double>& x, const std::vector<double>& u,
                        const std::string& path) {
    if (x.size() != u.size())
        throw std::invalid_argument("snapshot columns differ in length");
    std::ofstream out = open_out(path);
    out << "x,u\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        out << format_g17(x[i]) << ',' << format_g17(u[i]) << '\n';
}

void write_spectrum_csv(const HalfLineSpectrum& f, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "xi,re,im\n";
    for (std::size_t i = 0; i < f.xi_grid.size(); ++i)
        out << format_g17(f.xi_grid[i]) << ',' << format_g17(f.values[i].real()) << ','
            << format_g17(f.values[i].imag()) << '\n';
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
    std::vector<std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(row, cell, ',')) {
            if (cols.size() <= c) cols.emplace_back();
            cols[c].push_back(std::stod(cell));
            ++c;
        }
    }
    return cols;
}

nlohmann::json caustics_to_json(const CausticSet& ks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CausticComponent& comp : ks.components) {
        nlohmann::json obj;
        obj["lo"] = std::isfinite(comp.lo) ? nlohmann::json(comp.lo) : nlohmann::json();
        obj["hi"] = std::isfinite(comp.hi) ? nlohmann::json(comp.hi) : nlohmann::json();
        obj["ell"] = comp.ell;
        arr.push_back(obj);
    }
    return arr;
}

void write_manifest(const RunManifest& m, const std::string& path) {
    nlohmann::json j;
    j["command"] = m.command;
    j["datum"] = m.datum;
    j["backends"] = m.backends;
    j["grid"] = m.grid_spec;
    j["tolerances"] = m.tolerances;
    j["outputs"] = m.outputs;
    j["wall_clock_seconds"] = m.wall_clock_seconds;
    j["suites"] = m.suites;
    if (!m.extra.empty()) j["extra"] = m.extra;
    std::ofstream out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace zd
