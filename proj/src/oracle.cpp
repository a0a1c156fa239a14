#include "outage_alloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

#include "outage_alloc/numerics.hpp"

namespace outage_alloc::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassSlack = 1e-15;

double rate_sum(const Eigen::ArrayXd& gains, const Eigen::ArrayXd& probs,
                const Eigen::ArrayXd& alloc, double sigma2) {
    const Eigen::ArrayXd snr = gains * alloc / sigma2;
    const double inv2ln2 = 0.5 / M_LN2;
    return (probs * snr.unaryExpr([](double v) { return std::log1p(v); })).sum() * inv2ln2;
}

struct FloorsSolution {
    double lambda;
    Eigen::ArrayXd alloc;
    double capacity;
};

// Discrete water-filling with per-bin lower bounds: a single level lambda
// with alloc_i = max(lambda - sigma2/g_i, floor_i), level found by bisection
// on the total power. Shares no code with the analytic policy path.
std::optional<FloorsSolution> water_fill_with_floors(const Eigen::ArrayXd& gains,
                                                     const Eigen::ArrayXd& probs,
                                                     const Eigen::ArrayXd& floors,
                                                     double sigma2, double budget) {
    const double base = (probs * floors).sum();
    if (base > budget * (1.0 + 1e-12) + 1e-300) return std::nullopt;

    const Eigen::ArrayXd inv_g = sigma2 * gains.inverse();
    const auto total_at = [&](double lambda) {
        return (probs * (lambda - inv_g).max(floors)).sum();
    };

    double lo = 0.0, hi = 1.0;
    while (total_at(hi) < budget) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (total_at(mid) < budget)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
    }
    const double lambda = 0.5 * (lo + hi);

    FloorsSolution sol;
    sol.lambda = lambda;
    sol.alloc = (lambda - inv_g).max(floors);
    // spend the bisection residue on the largest bin so the budget is tight
    const double residue = budget - (probs * sol.alloc).sum();
    if (residue > 0.0) {
        Eigen::Index top = 0;
        gains.maxCoeff(&top);
        sol.alloc[top] += residue / probs[top];
    }
    sol.capacity = rate_sum(gains, probs, sol.alloc, sigma2);
    return sol;
}

Eigen::ArrayXd floors_for(const Eigen::ArrayXd& gains, const std::vector<char>& in_outage,
                          const SystemParams& p) {
    const double cinv = (std::exp2(2.0 * p.r0) - 1.0) * p.sigma2;
    Eigen::ArrayXd floors = Eigen::ArrayXd::Zero(gains.size());
    for (Eigen::Index i = 0; i < gains.size(); ++i)
        if (!in_outage[static_cast<std::size_t>(i)]) floors[i] = cinv / gains[i];
    return floors;
}

// Visit every subset with mass <= eps; bins pre-sorted by descending mass so
// infeasible branches die early.
template <typename Visit>
void enumerate_subsets(const Eigen::ArrayXd& probs, double eps, Visit&& visit) {
    const Eigen::Index n = probs.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return probs[a] > probs[b]; });

    std::vector<int> chosen;
    const auto recurse = [&](auto&& self, std::size_t pos, double mass) -> void {
        if (pos == order.size()) {
            visit(chosen);
            return;
        }
        self(self, pos + 1, mass);
        const double next = mass + probs[order[pos]];
        if (next <= eps + kMassSlack) {
            chosen.push_back(order[pos]);
            self(self, pos + 1, next);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0, 0.0);
}

double conditional_mean(const fading::GainDistribution& d, double lo, double hi) {
    const double mass = d.sf(lo) - d.sf(hi);
    const double num =
        numerics::integrate([&](double x) { return x * d.pdf(x); }, lo, hi);
    return num / mass;
}

Eigen::ArrayXd axis_bins(const fading::GainDistribution& d, int bins, double mass_cut) {
    Eigen::ArrayXd values(bins);
    for (int k = 0; k < bins; ++k) {
        const double p_lo = mass_cut / 2.0 + (1.0 - mass_cut) * k / bins;
        const double p_hi = mass_cut / 2.0 + (1.0 - mass_cut) * (k + 1) / bins;
        values[k] = conditional_mean(d, d.quantile(p_lo), d.quantile(p_hi));
    }
    return values;
}

}  // namespace

void DiscreteInstance::validate() const {
    if (gains.size() != probs.size() || gains.size() < 1)
        throw InvalidParam("DiscreteInstance: gains/probs size mismatch");
    for (Eigen::Index i = 0; i < gains.size(); ++i) {
        if (!(gains[i] > 0.0)) throw InvalidParam("DiscreteInstance: gains must be > 0");
        if (i > 0 && !(gains[i] > gains[i - 1]))
            throw InvalidParam("DiscreteInstance: gains must be strictly increasing");
        if (!(probs[i] >= 0.0)) throw InvalidParam("DiscreteInstance: probs must be >= 0");
    }
    if (std::abs(probs.sum() - 1.0) > 1e-12)
        throw InvalidParam("DiscreteInstance: probs must sum to 1");
    params.validate();
}

BruteForce1DResult brute_force_1d(const DiscreteInstance& inst, OutageSearch mode) {
    inst.validate();
    const Eigen::Index n = inst.gains.size();
    if (mode == OutageSearch::automatic)
        mode = n <= 20 ? OutageSearch::exhaustive : OutageSearch::threshold;
    if (mode == OutageSearch::exhaustive && n > 20)
        throw InvalidParam("brute_force_1d: exhaustive mode limited to 20 bins");

    std::optional<BruteForce1DResult> best;
    const auto consider = [&](const std::vector<int>& outage) {
        std::vector<char> flag(static_cast<std::size_t>(n), 0);
        for (int i : outage) flag[static_cast<std::size_t>(i)] = 1;
        const auto sol = water_fill_with_floors(inst.gains, inst.probs,
                                                floors_for(inst.gains, flag, inst.params),
                                                inst.params.sigma2, inst.params.p_av);
        if (!sol) return;
        if (!best || sol->capacity > best->capacity) {
            best = BruteForce1DResult{sol->capacity, sol->alloc, outage};
            std::sort(best->outage_set.begin(), best->outage_set.end());
        }
    };

    if (mode == OutageSearch::exhaustive) {
        enumerate_subsets(inst.probs, inst.params.eps, consider);
    } else {
        std::vector<int> prefix;
        double mass = 0.0;
        consider(prefix);
        for (Eigen::Index i = 0; i < n; ++i) {
            mass += inst.probs[i];
            if (mass > inst.params.eps + kMassSlack) break;
            prefix.push_back(static_cast<int>(i));
            consider(prefix);
        }
    }
    if (!best)
        throw InfeasibleDiscrete("brute_force_1d: no outage set satisfies the power budget");
    return *best;
}

DiscreteInstance discretize(const fading::MinGainDistribution& d, int n_bins, double mass_cut,
                            const SystemParams& params) {
    if (n_bins < 2) throw InvalidParam("discretize: n_bins must be >= 2");
    if (!(mass_cut > 0.0) || !(mass_cut < 0.01))
        throw InvalidParam("discretize: need 0 < mass_cut < 0.01");
    DiscreteInstance inst;
    inst.params = params;
    inst.gains = axis_bins(d, n_bins, mass_cut);
    inst.probs = Eigen::ArrayXd::Constant(n_bins, 1.0 / n_bins);
    inst.probs /= inst.probs.sum();
    return inst;
}

void JointDiscreteInstance::validate() const {
    if (axis1.size() < 1 || axis2.size() < 1)
        throw InvalidParam("JointDiscreteInstance: empty axis");
    if (mass.rows() != axis1.size() || mass.cols() != axis2.size())
        throw InvalidParam("JointDiscreteInstance: mass shape mismatch");
    if (std::abs(mass.sum() - 1.0) > 1e-12)
        throw InvalidParam("JointDiscreteInstance: masses must sum to 1");
    params.validate();
}

JointDiscreteInstance joint_grid(const fading::GainDistribution& u1,
                                 const fading::GainDistribution& u2, int bins1, int bins2,
                                 double mass_cut, const SystemParams& params) {
    if (bins1 < 2 || bins2 < 2) throw InvalidParam("joint_grid: bins must be >= 2");
    JointDiscreteInstance inst;
    inst.params = params;
    inst.axis1 = axis_bins(u1, bins1, mass_cut);
    inst.axis2 = axis_bins(u2, bins2, mass_cut);
    inst.mass = Eigen::ArrayXXd::Constant(bins1, bins2, 1.0 / (bins1 * bins2));
    inst.mass /= inst.mass.sum();
    return inst;
}

namespace {

struct FlatCells {
    Eigen::ArrayXd min_gain;
    Eigen::ArrayXd mass;
    std::vector<char> in_h1;  // h1 <= h2 (row gain is the min)
};

FlatCells flatten(const JointDiscreteInstance& inst) {
    const Eigen::Index n1 = inst.axis1.size(), n2 = inst.axis2.size();
    FlatCells cells;
    cells.min_gain.resize(n1 * n2);
    cells.mass.resize(n1 * n2);
    cells.in_h1.resize(static_cast<std::size_t>(n1 * n2));
    for (Eigen::Index i = 0; i < n1; ++i)
        for (Eigen::Index j = 0; j < n2; ++j) {
            const Eigen::Index k = i * n2 + j;
            cells.min_gain[k] = inst.min_gain_at(i, j);
            cells.mass[k] = inst.mass(i, j);
            cells.in_h1[static_cast<std::size_t>(k)] = inst.axis1[i] <= inst.axis2[j];
        }
    return cells;
}

std::vector<char> outage_flags(const JointDiscreteInstance& inst, const FlatCells& cells,
                               int cut1, int cut2) {
    const Eigen::Index n1 = inst.axis1.size(), n2 = inst.axis2.size();
    std::vector<char> flag(static_cast<std::size_t>(n1 * n2), 0);
    for (Eigen::Index i = 0; i < n1; ++i)
        for (Eigen::Index j = 0; j < n2; ++j) {
            const std::size_t k = static_cast<std::size_t>(i * n2 + j);
            flag[k] = cells.in_h1[k] ? (i < cut1) : (j < cut2);
        }
    return flag;
}

double outage_mass_of(const FlatCells& cells, const std::vector<char>& flag) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < cells.mass.size(); ++k)
        if (flag[static_cast<std::size_t>(k)]) m += cells.mass[k];
    return m;
}

}  // namespace

BruteForce2UserResult brute_force_2user(const JointDiscreteInstance& inst) {
    inst.validate();
    if (inst.axis1.size() > 50 || inst.axis2.size() > 50)
        throw InvalidParam("brute_force_2user: grid limited to 50x50");
    const FlatCells cells = flatten(inst);
    const SystemParams& p = inst.params;

    // Structured search: outage sets are per-axis prefixes within the
    // subspace where that axis is the minimum.
    std::optional<BruteForce2UserResult> best;
    std::vector<char> best_flag;
    for (int cut1 = 0; cut1 <= static_cast<int>(inst.axis1.size()); ++cut1) {
        bool any_feasible_cut2 = false;
        for (int cut2 = 0; cut2 <= static_cast<int>(inst.axis2.size()); ++cut2) {
            const auto flag = outage_flags(inst, cells, cut1, cut2);
            const double om = outage_mass_of(cells, flag);
            if (om > p.eps + kMassSlack) break;  // larger cut2 only grows the mass
            any_feasible_cut2 = true;
            const auto sol = water_fill_with_floors(cells.min_gain, cells.mass,
                                                    floors_for(cells.min_gain, flag, p),
                                                    p.sigma2, p.p_av);
            if (!sol) continue;
            if (!best || sol->capacity > best->capacity_search) {
                BruteForce2UserResult r;
                r.capacity_search = sol->capacity;
                r.cut1 = cut1;
                r.cut2 = cut2;
                r.thresh1 = cut1 < inst.axis1.size() ? inst.axis1[cut1] : kInf;
                r.thresh2 = cut2 < inst.axis2.size() ? inst.axis2[cut2] : kInf;
                r.outage_mass = om;
                best = r;
                best_flag = flag;
            }
        }
        if (!any_feasible_cut2 && cut1 > 0) break;
    }
    if (!best)
        throw InfeasibleDiscrete("brute_force_2user: no threshold split satisfies the budget");

    // Projected subgradient ascent on the best split, step c/sqrt(t). The
    // projection is the exact Euclidean one onto {gamma >= floors,
    // sum m gamma <= p_av}: clip to the floors after a mass-weighted level
    // shift found by bisection. Rescaling the excess instead converges to
    // excess proportional to the gradient, not to the optimum.
    const Eigen::ArrayXd floors = floors_for(cells.min_gain, best_flag, p);
    const double base = (cells.mass * floors).sum();
    const double excess = p.p_av - base;
    Eigen::ArrayXd gamma = floors + excess;
    const Eigen::Index ncell = gamma.size();

    const auto project = [&](Eigen::ArrayXd& x) {
        double spent = (cells.mass * x.max(floors)).sum();
        if (spent <= p.p_av) {
            x = x.max(floors);
            return;
        }
        double tau_lo = 0.0, tau_hi = 1.0;
        const auto spent_at = [&](double tau) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < ncell; ++k)
                s += cells.mass[k] * std::max(floors[k], x[k] - tau * cells.mass[k]);
            return s;
        };
        while (spent_at(tau_hi) > p.p_av) tau_hi *= 2.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (tau_lo + tau_hi);
            if (spent_at(mid) > p.p_av)
                tau_lo = mid;
            else
                tau_hi = mid;
        }
        const double tau = 0.5 * (tau_lo + tau_hi);
        for (Eigen::Index k = 0; k < ncell; ++k)
            x[k] = std::max(floors[k], x[k] - tau * cells.mass[k]);
    };

    const int iterations = 10'000;
    const double inv2ln2 = 0.5 / M_LN2;
    Eigen::ArrayXd grad0 =
        cells.mass * cells.min_gain / (p.sigma2 + cells.min_gain * gamma) * inv2ln2;
    const double c = 0.25 * std::max(excess, 1.0) / grad0.maxCoeff();

    project(gamma);
    Eigen::ArrayXd best_gamma = gamma;
    double best_obj = rate_sum(cells.min_gain, cells.mass, gamma, p.sigma2);
    for (int t = 1; t <= iterations; ++t) {
        const Eigen::ArrayXd grad =
            cells.mass * cells.min_gain / (p.sigma2 + cells.min_gain * gamma) * inv2ln2;
        gamma += (c / std::sqrt(static_cast<double>(t))) * grad;
        project(gamma);
        const double obj = rate_sum(cells.min_gain, cells.mass, gamma, p.sigma2);
        if (obj > best_obj) {
            best_obj = obj;
            best_gamma = gamma;
        }
    }

    best->capacity = best_obj;
    best->step_scale = c;
    best->iterations = iterations;
    best->alloc.resize(inst.axis1.size(), inst.axis2.size());
    for (Eigen::Index i = 0; i < inst.axis1.size(); ++i)
        for (Eigen::Index j = 0; j < inst.axis2.size(); ++j)
            best->alloc(i, j) = best_gamma[i * inst.axis2.size() + j];
    return *best;
}

Enumerate2UserResult brute_force_2user_enumerate(const JointDiscreteInstance& inst) {
    inst.validate();
    const Eigen::Index ncells = inst.axis1.size() * inst.axis2.size();
    if (ncells > 25)
        throw InvalidParam("brute_force_2user_enumerate: limited to 25 cells");
    const FlatCells cells = flatten(inst);
    const SystemParams& p = inst.params;

    Enumerate2UserResult best{-kInf, {}};
    enumerate_subsets(cells.mass, p.eps, [&](const std::vector<int>& outage) {
        std::vector<char> flag(static_cast<std::size_t>(ncells), 0);
        for (int k : outage) flag[static_cast<std::size_t>(k)] = 1;
        const auto sol = water_fill_with_floors(cells.min_gain, cells.mass,
                                                floors_for(cells.min_gain, flag, p),
                                                p.sigma2, p.p_av);
        if (sol && sol->capacity > best.capacity) best = {sol->capacity, std::move(flag)};
    });
    if (best.capacity == -kInf)
        throw InfeasibleDiscrete("brute_force_2user_enumerate: no feasible outage set");
    return best;
}

MinSufficiency min_sufficiency(const JointDiscreteInstance& inst, const Eigen::ArrayXXd& alloc) {
    std::map<double, std::pair<double, double>> spread;  // min gain -> (lo, hi) power
    std::map<double, std::pair<double, int>> mean_acc;   // min gain -> (sum, count)
    for (Eigen::Index i = 0; i < inst.axis1.size(); ++i)
        for (Eigen::Index j = 0; j < inst.axis2.size(); ++j) {
            const double m = inst.min_gain_at(i, j);
            const double a = alloc(i, j);
            auto [it, fresh] = spread.try_emplace(m, std::pair<double, double>{a, a});
            if (!fresh) {
                it->second.first = std::min(it->second.first, a);
                it->second.second = std::max(it->second.second, a);
            }
            auto& acc = mean_acc[m];
            acc.first += a;
            acc.second += 1;
        }

    std::vector<double> mins, means, spreads;
    for (const auto& [m, lohi] : spread) {
        mins.push_back(m);
        spreads.push_back(lohi.second - lohi.first);
        const auto& acc = mean_acc[m];
        means.push_back(acc.first / acc.second);
    }

    MinSufficiency out{0.0, 0.0};
    for (std::size_t g = 0; g < mins.size(); ++g) {
        double unit = 0.0;
        if (g > 0) unit = std::max(unit, std::abs(means[g] - means[g - 1]));
        if (g + 1 < mins.size()) unit = std::max(unit, std::abs(means[g + 1] - means[g]));
        const double floor_unit = 1e-9 * (1.0 + std::abs(means[g]));
        out.max_abs_dev = std::max(out.max_abs_dev, spreads[g]);
        out.dev_in_units = std::max(out.dev_in_units, spreads[g] / std::max(unit, floor_unit));
    }
    return out;
}

}  // namespace outage_alloc::oracle
