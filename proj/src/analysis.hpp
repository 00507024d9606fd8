#pragma once

#include "measure.hpp"
#include "reports.hpp"

#include <optional>
#include <vector>

namespace freeconv {

/// Zeros of m in the bounded gaps between support pieces, at most one per gap.
std::vector<double> gap_zeros(const MultiCutMeasure& mu);

/// Index of the gap (1-based, between pieces i and i+1) containing x, or 0.
int gap_index(const MultiCutMeasure& mu, double x);

struct PClassification {
    double E = 0.0;
    int gap = 0;
    double criterion = 0.0;  // Var(other) * m'(E)
    double hat_mass = 0.0;   // 1 / m'(E)
    double other_mass = 0.0; // total mass of the other hat measure, Var(other)
    bool member = false;
    bool criteria_agree = true;
};

struct PSets {
    std::vector<PClassification> alpha;
    std::vector<PClassification> beta;
    std::vector<double> P_alpha() const;
    std::vector<double> P_beta() const;
};

PSets classify_p_sets(const MultiCutMeasure& alpha, const MultiCutMeasure& beta);

/// Indices i (1-based) with Re m < 0 on gap i and Re m > 0 on gap i+1.
std::vector<int> n_set(const MultiCutMeasure& mu);

struct EdgeCandidate {
    double omega;
    double E;
};

/// F'(w) - 1, real w off the support of mu-hat.
double hat_derivative(const MultiCutMeasure& mu, double w);

/// Real solutions of F'(w) - 1 = 1/(t-1) off supp(mu-hat) and their images.
std::vector<EdgeCandidate> semigroup_edges(const MultiCutMeasure& mu, double t);

/// Atoms whose mass equals 1 - 1/t within 1e-9.
std::vector<double> critical_atoms(const MultiCutMeasure& mu, double t);

BoundsReport bounds_report_semigroup(const MultiCutMeasure& mu, double t, const SupportReport& support);

/// `theorem` is "1.3", "1.4" or empty for automatic selection.
BoundsReport bounds_report_pair(const MultiCutMeasure& alpha, const MultiCutMeasure& beta,
                                const SupportReport& support, const std::string& theorem = "");

} // namespace freeconv
