#pragma once

#include "measure.hpp"
#include "reports.hpp"
#include "subordination.hpp"

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace freeconv {

constexpr double kDensityCap = 1e6;
constexpr double kSupportThreshold = 1e-7;
constexpr double kEdgeResolution = 1e-9;

enum class PointFlag { Ok, Divergent, Atom, LadderFailed };

const char* flag_name(PointFlag flag);

struct ResultAtom {
    double location;
    double mass;
};

/// Either mu_alpha boxplus mu_beta or mu^{boxplus t}. Holds references to the
/// measures, which must outlive it.
class SpectralProblem {
public:
    static SpectralProblem pair(const MultiCutMeasure& alpha, const MultiCutMeasure& beta,
                                LadderOptions ladder = {});
    static SpectralProblem semigroup(const MultiCutMeasure& mu, double t, LadderOptions ladder = {});

    bool is_pair() const { return beta_ != nullptr; }
    double t() const { return t_; }
    const MultiCutMeasure& alpha() const { return *alpha_; }
    const MultiCutMeasure& beta() const { return *beta_; }
    const MultiCutMeasure& measure() const { return *alpha_; }
    const LadderOptions& ladder() const { return ladder_; }
    const std::vector<double>& alpha_zeros() const { return alpha_zeros_; }
    const std::vector<double>& beta_zeros() const { return beta_zeros_; }

    BoundaryValue boundary(double E) const;
    std::pair<double, double> default_window() const;
    /// Images t*x of atoms with mass 1 - 1/t (semigroup only).
    std::vector<double> divergence_candidates() const;
    /// Atoms of mu^{boxplus t} (semigroup only).
    std::vector<ResultAtom> result_atoms() const;
    /// Points inserted into every grid: divergence candidates, result atoms, gap zeros.
    std::vector<double> special_points() const;

private:
    const MultiCutMeasure* alpha_ = nullptr;
    const MultiCutMeasure* beta_ = nullptr;
    double t_ = 0.0;
    LadderOptions ladder_;
    std::vector<double> alpha_zeros_;
    std::vector<double> beta_zeros_;
};

struct DensityGrid {
    bool pair = true;
    double t = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    std::vector<double> grid;
    std::vector<double> density;
    std::vector<double> im_omega;       // support indicator
    std::vector<double> im_omega_alpha; // pair only
    std::vector<double> im_omega_beta;  // omega_beta, or omega_t for the semigroup
    std::vector<double> boundary_error;
    std::vector<PointFlag> flags;
    // Last ladder level per point (z, omega_alpha, omega_beta/omega_t, residual).
    std::vector<cplx> z_last;
    std::vector<cplx> omega_alpha_last;
    std::vector<cplx> omega_beta_last;
    std::vector<double> residual_last;
    std::vector<double> diverged_near; // NaN when the point did not diverge
    std::vector<ResultAtom> atoms;
    int failed = 0;

    std::size_t size() const { return grid.size(); }
};

struct GridOptions {
    std::optional<std::pair<double, double>> window;
    int n_points = 2001;
    int threads = 1;
};

DensityGrid density_grid(const SpectralProblem& problem, const GridOptions& options = {});

/// Trapezoid integral of x^k rho over the unflagged points.
double grid_moment(const DensityGrid& dg, int k);

SupportReport detect_support(const SpectralProblem& problem, const DensityGrid& dg);

void write_csv(std::ostream& out, const DensityGrid& dg);

} // namespace freeconv
