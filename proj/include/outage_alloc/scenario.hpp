#pragma once

// CLI-facing plumbing: scenario config files (flat key=value with one
// [user] section per user), dB conversions, grid specs, and the CSV
// formats emitted by the command-line tool.

#include <Eigen/Core>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "outage_alloc/baselines.hpp"
#include "outage_alloc/fading.hpp"
#include "outage_alloc/policy.hpp"

namespace outage_alloc::cli {

// Config parse failure; message carries "<origin>:<line>".
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UserSpec {
    std::string law;         // "exponential" | "table"
    double omega = 0.0;      // exponential mean gain
    std::string table_path;  // tabulated-law file
};

struct Scenario {
    std::vector<UserSpec> users;
    double sigma2 = 1.0;
    double r0 = 0.0;
    double eps = 0.0;
    std::optional<double> p_av;  // linear; parsed from p_av or p_av_db
    std::string label;
};

Scenario parse_scenario_text(const std::string& text, const std::string& origin);
Scenario parse_scenario_file(const std::string& path);

// Table paths in the config resolve relative to the config file's directory.
fading::MinGainDistribution build_min_gain(const Scenario& sc);
std::vector<fading::GainDistribution> build_users(const Scenario& sc);

// p_av is required for solve/simulate-style commands.
SystemParams system_params(const Scenario& sc);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double p) { return 10.0 * std::log10(p); }

// Numbers render with 12 significant digits everywhere.
std::string format_value(double v);

struct GridSpec {
    double start_db;
    double stop_db;
    int points;
};

// "start:stop:points" in dB.
GridSpec parse_grid(const std::string& text);
std::vector<double> grid_points_db(const GridSpec& g);

void write_sweep_csv(std::ostream& os, const Scenario& sc, const std::vector<double>& grid_db,
                     const baselines::SweepResult& result);
void write_scaling_csv(std::ostream& os, double omega, double r0,
                       const std::vector<std::pair<int, double>>& rows);
void write_oracle_csv(std::ostream& os, const Eigen::ArrayXd& gains, const Eigen::ArrayXd& probs,
                      const Eigen::ArrayXd& alloc, const std::vector<int>& outage_set);

}  // namespace outage_alloc::cli
