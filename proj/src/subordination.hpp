#pragma once

#include "transform.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace freeconv {

constexpr double kPairTolerance = 1e-10;
constexpr double kSemigroupTolerance = 1e-12;
constexpr int kPairMaxIterations = 100000;
constexpr int kSemigroupMaxIterations = 10000;
constexpr double kDivergenceThreshold = 1e8;
constexpr double kDivergenceProximity = 1e-4;

struct SemigroupPoint {
    cplx z;
    cplx omega_t;
    double residual = 0.0;
    int iterations = 0;
};

struct SubordinationPair {
    cplx z;
    cplx omega_alpha;
    cplx omega_beta;
    double residual = 0.0;
    int iterations = 0;
};

/// Residual  |t w - z - (t-1) F(w)|  scaled by max(1, |w|).
double semigroup_residual(const TransformSource& mu, double t, cplx z, cplx omega);
/// |w_a + w_b - z - F_a(w_b)| + |F_a(w_b) - F_b(w_a)|  scaled by max(1, |w_a|, |w_b|).
double pair_residual(const TransformSource& alpha, const TransformSource& beta, cplx z,
                     cplx omega_alpha, cplx omega_beta);

SemigroupPoint solve_semigroup(const TransformSource& mu, double t, cplx z,
                               std::optional<cplx> start = std::nullopt);
SubordinationPair solve_pair(const TransformSource& alpha, const TransformSource& beta, cplx z,
                             std::optional<SubordinationPair> start = std::nullopt);

SemigroupPoint solve_semigroup(const MultiCutMeasure& mu, double t, cplx z);
SubordinationPair solve_pair(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, cplx z);

/// mu^{boxplus t} exposed as a transform source through its subordination function.
class SemigroupSource final : public TransformSource {
public:
    SemigroupSource(const TransformSource& mu, double t) : mu_(mu), t_(t) {}
    TransformValue eval(cplx w) const override;

private:
    const TransformSource& mu_;
    double t_;
};

/// mu_alpha boxplus mu_beta exposed as a transform source.
class PairSource final : public TransformSource {
public:
    PairSource(const TransformSource& alpha, const TransformSource& beta) : alpha_(alpha), beta_(beta) {}
    TransformValue eval(cplx w) const override;

private:
    const TransformSource& alpha_;
    const TransformSource& beta_;
};

struct LadderOptions {
    double eta_top = 1e-2;
    double ratio = 0.5;
    int levels = 25;
};

std::vector<double> eta_levels(const LadderOptions& options);

/// Boundary value at a real point obtained by continuation down the eta ladder.
struct BoundaryValue {
    double E = 0.0;
    cplx m;                  // extrapolated m of the convolution
    double density = 0.0;    // max(0, Im m) / pi
    double im_omega = 0.0;   // support indicator: Im omega_t, or the smaller of the pair's
    double im_omega_alpha = 0.0;
    double im_omega_beta = 0.0;
    double boundary_error = 0.0;
    bool alpha_infinite = false;
    bool beta_infinite = false;
    std::optional<double> diverged_near;
    int levels_completed = 0;
    bool ok = false;
    std::string failure;
    // Final ladder level, kept for diagnostics.
    cplx z_last;
    cplx omega_alpha_last;
    cplx omega_beta_last; // omega_t for the semigroup
    double residual_last = 0.0;
    int iterations_total = 0;
};

/// Richardson combination over levels h, 2h, 4h (values passed finest first).
cplx richardson3(cplx fine, cplx mid, cplx coarse);
cplx richardson2(cplx fine, cplx mid);

BoundaryValue semigroup_boundary(const MultiCutMeasure& mu, double t, double E,
                                 const LadderOptions& options = {});
/// The gap-zero lists name divergence locations; pass gap_zeros() of each input.
BoundaryValue pair_boundary(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, double E,
                            const std::vector<double>& alpha_gap_zeros,
                            const std::vector<double>& beta_gap_zeros, const LadderOptions& options = {});

} // namespace freeconv
