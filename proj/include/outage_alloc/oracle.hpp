#pragma once

// Brute-force solvers on discretized instances, used to validate the
// analytic policy against an independent route: outage-set enumeration plus
// discrete water-filling with per-bin rate floors (1-D), and a joint 2-user
// grid solved by threshold-pair search with projected subgradient ascent.
// Nothing here calls into the policy module's allocation path.

#include <Eigen/Core>
#include <vector>

#include "outage_alloc/fading.hpp"
#include "outage_alloc/policy.hpp"

namespace outage_alloc::oracle {

struct DiscreteInstance {
    Eigen::ArrayXd gains;  // bin centers, ascending, all > 0
    Eigen::ArrayXd probs;  // masses, sum 1
    SystemParams params;

    void validate() const;
};

enum class OutageSearch {
    automatic,   // exhaustive up to 20 bins, threshold form beyond
    exhaustive,  // every mass-feasible subset (<= 20 bins)
    threshold    // prefix sets {bins below a cut} only
};

struct BruteForce1DResult {
    double capacity;
    Eigen::ArrayXd alloc;
    std::vector<int> outage_set;  // ascending bin indices
};

BruteForce1DResult brute_force_1d(const DiscreteInstance& inst,
                                  OutageSearch mode = OutageSearch::automatic);

// Equiprobable binning of the min-gain law truncated to
// [quantile(mass_cut/2), quantile(1 - mass_cut/2)]; bin value is the
// conditional mean gain within the bin.
DiscreteInstance discretize(const fading::MinGainDistribution& d, int n_bins, double mass_cut,
                            const SystemParams& params);

struct JointDiscreteInstance {
    Eigen::ArrayXd axis1, axis2;  // ascending per-user gain values
    Eigen::ArrayXXd mass;         // mass(i, j) over (h1 = axis1[i], h2 = axis2[j])
    SystemParams params;

    void validate() const;
    double min_gain_at(Eigen::Index i, Eigen::Index j) const {
        return std::min(axis1[i], axis2[j]);
    }
};

// Independent product grid from per-user laws (equiprobable per-axis bins).
JointDiscreteInstance joint_grid(const fading::GainDistribution& u1,
                                 const fading::GainDistribution& u2, int bins1, int bins2,
                                 double mass_cut, const SystemParams& params);

struct BruteForce2UserResult {
    double capacity;          // subgradient-ascent objective on the best split
    double capacity_search;   // exact with-floors solve on the best split
    Eigen::ArrayXXd alloc;    // ascent allocation per joint bin
    int cut1, cut2;           // outage prefix lengths per axis
    double thresh1, thresh2;  // first service gain value per axis
    double outage_mass;
    double step_scale;        // c in the c/sqrt(t) schedule
    int iterations;
};

BruteForce2UserResult brute_force_2user(const JointDiscreteInstance& inst);

// Exhaustive outage-subset cross-check for tiny grids (cells <= 25).
struct Enumerate2UserResult {
    double capacity;
    std::vector<char> outage;  // flat row-major flags over (i, j)
};
Enumerate2UserResult brute_force_2user_enumerate(const JointDiscreteInstance& inst);

// Largest spread of the allocation across bins sharing the same min gain,
// and that spread expressed in local bin-resolution units (the allocation
// change across one neighbouring min-gain step).
struct MinSufficiency {
    double max_abs_dev;
    double dev_in_units;
};

MinSufficiency min_sufficiency(const JointDiscreteInstance& inst, const Eigen::ArrayXXd& alloc);

}  // namespace outage_alloc::oracle
