#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "zd/characteristics.hpp"
#include "zd/hardy.hpp"

namespace zd {

// Shortest round-trippable decimal form (printf %.17g).
std::string format_g17(double v);

// "lo:hi:n" -> n equally spaced points from lo to hi inclusive.
std::vector<double> parse_grid_spec(const std::string& spec);

// CSV emitters; all columns use format_g17 so repeated runs are byte-identical.
void write_field_csv(const ZDField& field, const std::string& path);      // x,value,ell,caustic_flag
void write_snapshot_csv(const std::vector<double>& x,
                        const std::vector<double>& u, const std::string& path);  // x,u
void write_spectrum_csv(const HalfLineSpectrum& f, const std::string& path);     // xi,re,im

// Numeric columns of a CSV written by the emitters above (header skipped).
std::vector<std::vector<double>> read_csv_columns(const std::string& path);

// Caustic components as [{lo, hi, ell}]; unbounded endpoints become null.
nlohmann::json caustics_to_json(const CausticSet& ks);

struct RunManifest {
    std::string command;
    nlohmann::json datum;
    std::vector<std::string> backends;
    std::string grid_spec;
    nlohmann::json tolerances = nlohmann::json::object();
    std::vector<std::string> outputs;
    double wall_clock_seconds = 0.0;
    nlohmann::json suites = nlohmann::json::object();  // per-suite pass/fail
    nlohmann::json extra = nlohmann::json::object();   // backend-specific info
};

void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace zd
