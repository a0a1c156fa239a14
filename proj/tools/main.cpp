// Command-line front end: solve / sweep / scaling / simulate / oracle.
// Exit codes: 0 success, 1 usage or config error, 2 infeasible budget,
// 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "outage_alloc/baselines.hpp"
#include "outage_alloc/montecarlo.hpp"
#include "outage_alloc/oracle.hpp"
#include "outage_alloc/policy.hpp"
#include "outage_alloc/scenario.hpp"

namespace oa = outage_alloc;
using oa::cli::format_value;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw oa::cli::ConfigError("cannot open output file '" + path + "'");
    return out;
}

std::vector<double> parse_r0_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw oa::cli::ConfigError("bad r0 list entry '" + item + "'");
        }
    }
    if (out.empty()) throw oa::cli::ConfigError("empty r0 list");
    return out;
}

int cmd_solve(const std::string& config) {
    const auto sc = oa::cli::parse_scenario_file(config);
    const auto d = oa::cli::build_min_gain(sc);
    const auto params = oa::cli::system_params(sc);

    std::cout << "scenario: " << (sc.label.empty() ? config : sc.label) << "\n";
    std::cout << "users: " << sc.users.size() << "\n";
    std::cout << "p_av: " << format_value(params.p_av) << " ("
              << format_value(oa::cli::linear_to_db(params.p_av)) << " dB)\n";

    const double p_min = oa::min_power(d, params);
    std::cout << "h_thresh: " << format_value(oa::fading::quantile_of_min(d, params.eps)) << "\n";
    std::cout << "p_min: " << format_value(p_min) << "\n";
    try {
        const auto pol = oa::solve(d, params);
        std::cout << "feasible: true\n";
        std::cout << "lambda: " << format_value(pol.lambda) << "\n";
        std::cout << "capacity: " << format_value(oa::expected_capacity(pol, d)) << "\n";
        std::cout << "expected_power: " << format_value(oa::expected_power(pol, d)) << "\n";
        std::cout << "outage_probability: " << format_value(oa::outage_probability(pol, d))
                  << "\n";
    } catch (const oa::InfeasiblePower& e) {
        std::cout << "feasible: false\n";
        std::cerr << "infeasible: p_av = " << format_value(e.p_av)
                  << " below p_min = " << format_value(e.p_min) << "\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_sweep(const std::string& config, const std::string& grid_spec, const std::string& out) {
    const auto sc = oa::cli::parse_scenario_file(config);
    const auto d = oa::cli::build_min_gain(sc);
    oa::SystemParams params{sc.sigma2, sc.r0, sc.eps, 0.0};
    params.validate();

    const auto grid_db = oa::cli::grid_points_db(oa::cli::parse_grid(grid_spec));
    std::vector<double> grid_lin;
    grid_lin.reserve(grid_db.size());
    for (double db : grid_db) grid_lin.push_back(oa::cli::db_to_linear(db));

    const auto result = oa::baselines::sweep(d, params, grid_lin);
    if (out.empty()) {
        oa::cli::write_sweep_csv(std::cout, sc, grid_db, result);
    } else {
        auto os = open_out(out);
        oa::cli::write_sweep_csv(os, sc, grid_db, result);
        std::cout << "wrote " << result.points.size() << " rows to " << out << "\n";
    }
    return kExitOk;
}

int cmd_scaling(const std::string& config, double omega, int n_max, const std::string& r0_list,
                const std::string& out) {
    const auto sc = oa::cli::parse_scenario_file(config);
    if (n_max < 1) throw oa::cli::ConfigError("--n-max must be >= 1");

    std::vector<double> r0s;
    if (r0_list.empty())
        r0s.push_back(sc.r0);
    else
        r0s = parse_r0_list(r0_list);

    std::vector<int> n_list;
    for (int n = 1; n <= n_max; ++n) n_list.push_back(n);

    for (const double r0 : r0s) {
        oa::SystemParams params{sc.sigma2, r0, sc.eps, 0.0};
        params.validate();
        const auto rows = oa::mc::scaling_experiment(omega, params, n_list);
        if (out.empty()) {
            oa::cli::write_scaling_csv(std::cout, omega, r0, rows);
        } else {
            std::string path = out;
            if (r0s.size() > 1) {
                const auto dot = path.rfind('.');
                const std::string suffix = "_r0_" + format_value(r0);
                if (dot == std::string::npos)
                    path += suffix;
                else
                    path.insert(dot, suffix);
            }
            auto os = open_out(path);
            oa::cli::write_scaling_csv(os, omega, r0, rows);
            std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
        }
    }
    return kExitOk;
}

class CsvTrace final : public oa::mc::TraceSink {
public:
    explicit CsvTrace(std::ofstream os) : os_(std::move(os)) {
        os_ << "block,h_min,power,rate,outage\n";
    }
    void row(long long block, double h_min, double power, double rate, bool outage) override {
        os_ << block << ',' << format_value(h_min) << ',' << format_value(power) << ','
            << format_value(rate) << ',' << (outage ? 1 : 0) << "\n";
    }

private:
    std::ofstream os_;
};

int cmd_simulate(const std::string& config, long long blocks, std::uint64_t seed,
                 const std::string& trace_path) {
    const auto sc = oa::cli::parse_scenario_file(config);
    const auto users = oa::cli::build_users(sc);
    const auto d = oa::fading::min_gain(users);
    const auto params = oa::cli::system_params(sc);

    oa::Policy pol;
    try {
        pol = oa::solve(d, params);
    } catch (const oa::InfeasiblePower& e) {
        std::cerr << "infeasible: p_av = " << format_value(e.p_av)
                  << " below p_min = " << format_value(e.p_min) << "\n";
        return kExitInfeasible;
    }

    oa::mc::SimConfig cfg;
    cfg.n_blocks = blocks;
    cfg.seed = seed;

    std::unique_ptr<CsvTrace> trace;
    if (!trace_path.empty()) trace = std::make_unique<CsvTrace>(open_out(trace_path));
    const auto stats = oa::mc::simulate(pol, users, cfg, trace.get());

    const double analytic_capacity = oa::expected_capacity(pol, d);
    const double analytic_outage = oa::outage_probability(pol, d);

    std::cout << "blocks: " << stats.n_blocks << "\n";
    std::cout << "seed: " << seed << "\n";
    std::cout << "outage_rate: " << format_value(stats.outage_rate) << " (se "
              << format_value(stats.se_outage) << ")\n";
    std::cout << "mean_power: " << format_value(stats.mean_power) << " (se "
              << format_value(stats.se_power) << ")\n";
    std::cout << "mean_rate: " << format_value(stats.mean_rate) << " (se "
              << format_value(stats.se_rate) << ")\n";
    std::cout << "analytic_outage: " << format_value(analytic_outage) << "\n";
    std::cout << "analytic_capacity: " << format_value(analytic_capacity) << "\n";
    const bool rate_ok = std::abs(stats.mean_rate - analytic_capacity) <= 3.0 * stats.se_rate;
    std::cout << "rate_check: " << (rate_ok ? "ok" : "DISAGREES (|diff| > 3 se)") << "\n";
    return kExitOk;
}

int cmd_oracle(const std::string& config, int bins, const std::string& grid, double mass_cut,
               const std::string& out) {
    const auto sc = oa::cli::parse_scenario_file(config);
    const auto d = oa::cli::build_min_gain(sc);
    const auto params = oa::cli::system_params(sc);

    if (!grid.empty()) {
        int b1 = 0, b2 = 0;
        char extra = 0;
        if (std::sscanf(grid.c_str(), "%dx%d%c", &b1, &b2, &extra) != 2 || b1 < 2 || b2 < 2)
            throw oa::cli::ConfigError("--grid must be AxB with A,B >= 2, got '" + grid + "'");
        if (sc.users.size() != 2)
            throw oa::cli::ConfigError("2-user oracle check needs exactly two [user] sections");
        const auto users = oa::cli::build_users(sc);
        const auto inst = oa::oracle::joint_grid(users[0], users[1], b1, b2, mass_cut, params);
        const auto res = oa::oracle::brute_force_2user(inst);
        const auto ms = oa::oracle::min_sufficiency(inst, res.alloc);

        const double w1 = res.cut1 > 0 && res.cut1 < inst.axis1.size()
                              ? inst.axis1[res.cut1] - inst.axis1[res.cut1 - 1]
                              : inst.axis1[1] - inst.axis1[0];
        const double w2 = res.cut2 > 0 && res.cut2 < inst.axis2.size()
                              ? inst.axis2[res.cut2] - inst.axis2[res.cut2 - 1]
                              : inst.axis2[1] - inst.axis2[0];
        const double thresh_gap = std::abs(res.thresh1 - res.thresh2);
        const bool thresh_ok = thresh_gap <= std::max(w1, w2);
        const bool minsuff_ok = ms.dev_in_units <= 2.0;

        std::cout << "grid: " << b1 << "x" << b2 << "\n";
        std::cout << "oracle_capacity: " << format_value(res.capacity)
                  << " (search " << format_value(res.capacity_search) << ")\n";
        std::cout << "outage_cuts: " << res.cut1 << " " << res.cut2 << " (mass "
                  << format_value(res.outage_mass) << ")\n";
        std::cout << "thresholds: " << format_value(res.thresh1) << " "
                  << format_value(res.thresh2) << " (gap " << format_value(thresh_gap)
                  << ", bin width " << format_value(std::max(w1, w2)) << ")\n";
        std::cout << "equal_threshold: " << (thresh_ok ? "pass" : "fail") << "\n";
        std::cout << "min_sufficiency_dev: " << format_value(ms.max_abs_dev) << " ("
                  << format_value(ms.dev_in_units) << " bin-resolution units)\n";
        std::cout << "min_sufficiency: " << (minsuff_ok ? "pass" : "fail") << "\n";
        std::cout << "ascent: step c = " << format_value(res.step_scale) << ", iterations "
                  << res.iterations << "\n";
        return thresh_ok && minsuff_ok ? kExitOk : kExitNumerical;
    }

    if (bins < 2) throw oa::cli::ConfigError("--bins must be >= 2");
    const double eps_bins = params.eps * bins;
    if (std::abs(eps_bins - std::round(eps_bins)) > 1e-9)
        std::cout << "note: eps*bins = " << format_value(eps_bins)
                  << " is fractional; the discrete outage budget rounds down to "
                  << std::floor(eps_bins) << "/" << bins
                  << " of mass and can dominate the gap\n";
    const auto inst = oa::oracle::discretize(d, bins, mass_cut, params);
    const auto res = oa::oracle::brute_force_1d(inst);
    const auto pol = oa::solve(d, params);
    const double analytic = oa::expected_capacity(pol, d);
    const double gap = std::abs(analytic - res.capacity);
    const bool pass = gap <= 1e-3;

    std::cout << "bins: " << bins << "\n";
    std::cout << "analytic_capacity: " << format_value(analytic) << "\n";
    std::cout << "oracle_capacity: " << format_value(res.capacity) << "\n";
    std::cout << "gap_bits: " << format_value(gap) << "\n";
    std::cout << "check: " << (pass ? "pass" : "fail") << " (tolerance 0.001)\n";
    if (!out.empty()) {
        auto os = open_out(out);
        oa::cli::write_oracle_csv(os, inst.gains, inst.probs, res.alloc, res.outage_set);
        std::cout << "wrote bin table to " << out << "\n";
    }
    return pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"service-outage constrained power allocation over fading channels"};
    app.require_subcommand(1);

    std::string config, out, grid, trace_path, r0_list;
    std::uint64_t seed = 12345;
    long long blocks = 1'000'000;
    int bins = 200;
    int n_max = 64;
    double omega = 1.0;
    double mass_cut = 1e-6;

    auto* solve_cmd = app.add_subcommand("solve", "solve one scenario and report the policy");
    solve_cmd->add_option("--config", config, "scenario file")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "capacity curves over a power grid (CSV)");
    sweep_cmd->add_option("--config", config, "scenario file")->required();
    sweep_cmd->add_option("--grid", grid, "start_dB:stop_dB:points")->required();
    sweep_cmd->add_option("--out", out, "output CSV path (default stdout)");

    auto* scaling_cmd = app.add_subcommand("scaling", "minimum power versus user count (CSV)");
    scaling_cmd->add_option("--config", config, "scenario file (sigma2, eps, r0)")->required();
    scaling_cmd->add_option("--omega", omega, "per-user mean gain");
    scaling_cmd->add_option("--n-max", n_max, "largest user count");
    scaling_cmd->add_option("--r0-list", r0_list, "comma-separated r0 values (one CSV each)");
    scaling_cmd->add_option("--out", out, "output CSV path (default stdout)");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of a solved scenario");
    sim_cmd->add_option("--config", config, "scenario file")->required();
    sim_cmd->add_option("--blocks", blocks, "number of fading blocks");
    sim_cmd->add_option("--seed", seed, "RNG seed");
    sim_cmd->add_option("--trace", trace_path, "per-block CSV dump (debug)");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force validation of the policy");
    oracle_cmd->add_option("--config", config, "scenario file")->required();
    oracle_cmd->add_option("--bins", bins, "1-D discretization size");
    oracle_cmd->add_option("--grid", grid, "2-user joint grid AxB");
    oracle_cmd->add_option("--mass-cut", mass_cut, "tail mass trimmed before binning");
    oracle_cmd->add_option("--out", out, "bin table CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(config);
        if (sweep_cmd->parsed()) return cmd_sweep(config, grid, out);
        if (scaling_cmd->parsed()) return cmd_scaling(config, omega, n_max, r0_list, out);
        if (sim_cmd->parsed()) return cmd_simulate(config, blocks, seed, trace_path);
        if (oracle_cmd->parsed()) return cmd_oracle(config, bins, grid, mass_cut, out);
    } catch (const oa::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oa::InvalidParam& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oa::EmptyList& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oa::InfeasiblePower& e) {
        std::cerr << "infeasible: p_av = " << format_value(e.p_av)
                  << " below p_min = " << format_value(e.p_min) << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
