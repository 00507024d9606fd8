#pragma once

#include <string>
#include <utility>
#include <vector>

namespace freeconv {

struct SupportReport {
    std::vector<std::pair<double, double>> components;
    std::vector<double> interior_zeros;
    std::vector<double> divergence_points;
    int I = 0;
    int C0 = 0;
    int Cinf = 0;
    /// Detected edges with no edge-equation candidate within 1e-6 (semigroup only).
    std::vector<double> edge_mismatches;
    double threshold = 0.0;
};

enum class BoundsKind { Semigroup, Pair };

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct BoundsReport {
    BoundsKind kind = BoundsKind::Pair;
    std::string theorem;
    int I = 0;
    int C0 = 0;
    int Cinf = 0;
    // semigroup
    double t = 0.0;
    std::vector<double> zero_set;
    int expected_cinf = 0;
    // pair
    bool swapped = false; // roles of the inputs exchanged so that n_alpha >= n_beta
    std::vector<double> E_alpha, E_beta, P_alpha, P_beta;
    std::vector<int> N_alpha;
    std::vector<int> decomposition; // per consecutive P^alpha pair, sums to the upper bound
    int lower = 0;
    int upper = 0;
    int coarse_upper = 0;
    std::vector<Verdict> verdicts;
    bool all_pass() const
    {
        for (const auto& v : verdicts) {
            if (!v.pass) {
                return false;
            }
        }
        return true;
    }
};

} // namespace freeconv
