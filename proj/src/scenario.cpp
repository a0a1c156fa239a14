#include "outage_alloc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace outage_alloc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& origin, int line, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) fail(origin, line, "trailing characters in number '" + value + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(origin, line, "expected a number, got '" + value + "'");
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Scenario sc;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool in_user = false;
    bool saw_linear = false, saw_db = false;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s == "[user]") {
            in_user = true;
            sc.users.push_back(UserSpec{});
            continue;
        }
        if (s.front() == '[') fail(origin, line, "unknown section '" + s + "'");
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) fail(origin, line, "empty value for '" + key + "'");

        if (in_user) {
            UserSpec& u = sc.users.back();
            if (key == "law") {
                if (value != "exponential" && value != "table")
                    fail(origin, line, "law must be 'exponential' or 'table'");
                u.law = value;
            } else if (key == "omega") {
                u.omega = parse_number(origin, line, value);
            } else if (key == "path") {
                u.table_path = value;
            } else {
                fail(origin, line, "unknown user key '" + key + "'");
            }
            continue;
        }

        if (key == "sigma2") {
            sc.sigma2 = parse_number(origin, line, value);
        } else if (key == "r0") {
            sc.r0 = parse_number(origin, line, value);
        } else if (key == "eps") {
            sc.eps = parse_number(origin, line, value);
        } else if (key == "p_av") {
            sc.p_av = parse_number(origin, line, value);
            saw_linear = true;
        } else if (key == "p_av_db") {
            sc.p_av = db_to_linear(parse_number(origin, line, value));
            saw_db = true;
        } else if (key == "label") {
            sc.label = value;
        } else {
            fail(origin, line, "unknown key '" + key + "'");
        }
    }
    if (saw_linear && saw_db) fail(origin, line, "give p_av or p_av_db, not both");
    if (sc.users.empty()) fail(origin, line, "at least one [user] section required");
    for (std::size_t i = 0; i < sc.users.size(); ++i) {
        const UserSpec& u = sc.users[i];
        const std::string who = "[user] #" + std::to_string(i + 1);
        if (u.law.empty()) fail(origin, line, who + ": missing 'law'");
        if (u.law == "exponential" && !(u.omega > 0.0))
            fail(origin, line, who + ": exponential law needs omega > 0");
        if (u.law == "table" && u.table_path.empty())
            fail(origin, line, who + ": table law needs 'path'");
    }
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    Scenario sc = parse_scenario_text(text.str(), path);
    // resolve table paths against the config directory
    const auto dir = std::filesystem::path(path).parent_path();
    for (auto& u : sc.users) {
        if (u.law == "table" && !u.table_path.empty() &&
            std::filesystem::path(u.table_path).is_relative())
            u.table_path = (dir / u.table_path).string();
    }
    return sc;
}

std::vector<fading::GainDistribution> build_users(const Scenario& sc) {
    std::vector<fading::GainDistribution> users;
    users.reserve(sc.users.size());
    for (const auto& u : sc.users) {
        if (u.law == "exponential")
            users.push_back(fading::exponential_gain(u.omega));
        else
            users.push_back(fading::load_tabulated_gain(u.table_path));
    }
    return users;
}

fading::MinGainDistribution build_min_gain(const Scenario& sc) {
    return fading::min_gain(build_users(sc));
}

SystemParams system_params(const Scenario& sc) {
    if (!sc.p_av) throw ConfigError(sc.label + ": p_av (or p_av_db) required");
    SystemParams p{sc.sigma2, sc.r0, sc.eps, *sc.p_av};
    p.validate();
    return p;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g{};
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.start_db, &g.stop_db, &g.points, &extra) !=
            3 ||
        g.points < 1)
        throw ConfigError("grid spec must be start_dB:stop_dB:points, got '" + text + "'");
    return g;
}

std::vector<double> grid_points_db(const GridSpec& g) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.points));
    if (g.points == 1) {
        out.push_back(g.start_db);
        return out;
    }
    const double step = (g.stop_db - g.start_db) / (g.points - 1);
    for (int i = 0; i < g.points; ++i) out.push_back(g.start_db + step * i);
    return out;
}

void write_sweep_csv(std::ostream& os, const Scenario& sc, const std::vector<double>& grid_db,
                     const baselines::SweepResult& result) {
    os << "# scenario: " << (sc.label.empty() ? "(unnamed)" : sc.label) << "\n";
    os << "# c_outage: expected rate (1-eps)*r of fixed-rate truncated inversion;"
          " face rate r = c_outage/(1-eps)\n";
    os << "p_av_db,p_av_linear,c_service,c_ergodic,c_outage,p_min,feasible\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& pt = result.points[i];
        const bool feasible = !std::isnan(pt.c_service);
        os << format_value(grid_db[i]) << ',' << format_value(pt.p_av) << ','
           << (feasible ? format_value(pt.c_service) : std::string{}) << ','
           << format_value(pt.c_ergodic) << ',' << format_value(pt.c_outage) << ','
           << format_value(result.p_min) << ',' << (feasible ? "true" : "false") << "\n";
    }
}

void write_scaling_csv(std::ostream& os, double omega, double r0,
                       const std::vector<std::pair<int, double>>& rows) {
    os << "# iid exponential users, omega = " << format_value(omega)
       << ", r0 = " << format_value(r0) << "\n";
    os << "n_users,p_min,ratio_to_single\n";
    if (rows.empty()) return;
    const double single = rows.front().second;
    for (const auto& [n, p_min] : rows)
        os << n << ',' << format_value(p_min) << ',' << format_value(p_min / single) << "\n";
}

void write_oracle_csv(std::ostream& os, const Eigen::ArrayXd& gains, const Eigen::ArrayXd& probs,
                      const Eigen::ArrayXd& alloc, const std::vector<int>& outage_set) {
    os << "bin,gain,mass,power,in_outage_set\n";
    std::vector<char> flag(static_cast<std::size_t>(gains.size()), 0);
    for (int i : outage_set) flag[static_cast<std::size_t>(i)] = 1;
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        os << i << ',' << format_value(gains[i]) << ',' << format_value(probs[i]) << ','
           << format_value(alloc[i]) << ',' << (flag[static_cast<std::size_t>(i)] ? 1 : 0)
           << "\n";
}

}  // namespace outage_alloc::cli
