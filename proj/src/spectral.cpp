#include "spectral.hpp"

#include "analysis.hpp"
#include "errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

namespace freeconv {

namespace {

constexpr double kWindowMargin = 0.02;
constexpr int kRefineFactor = 100;
constexpr double kFailureFraction = 0.01;
constexpr double kAmbiguityFraction = 0.01;
constexpr int kCuspGapPoints = 20;
constexpr double kCuspWidth = 1e-6;
constexpr double kMinimumCandidate = 0.2;
constexpr double kEdgeMatch = 1e-6;
constexpr double kGrowthFactor = 3.0;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

const char* flag_name(PointFlag flag)
{
    switch (flag) {
    case PointFlag::Ok:
        return "ok";
    case PointFlag::Divergent:
        return "divergent";
    case PointFlag::Atom:
        return "atom";
    case PointFlag::LadderFailed:
        return "ladder_failed";
    }
    return "unknown";
}

SpectralProblem SpectralProblem::pair(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, LadderOptions ladder)
{
    if (!alpha.atoms().empty() || !beta.atoms().empty()) {
        throw InvalidInput("pair convolution accepts absolutely continuous inputs only");
    }
    SpectralProblem p;
    p.alpha_ = &alpha;
    p.beta_ = &beta;
    p.ladder_ = ladder;
    p.alpha_zeros_ = gap_zeros(alpha);
    p.beta_zeros_ = gap_zeros(beta);
    return p;
}

SpectralProblem SpectralProblem::semigroup(const MultiCutMeasure& mu, double t, LadderOptions ladder)
{
    if (!(t > 1.0) || !std::isfinite(t)) {
        throw InvalidInput("semigroup parameter t must exceed 1");
    }
    SpectralProblem p;
    p.alpha_ = &mu;
    p.t_ = t;
    p.ladder_ = ladder;
    p.alpha_zeros_ = gap_zeros(mu);
    return p;
}

BoundaryValue SpectralProblem::boundary(double E) const
{
    if (is_pair()) {
        return pair_boundary(*alpha_, *beta_, E, alpha_zeros_, beta_zeros_, ladder_);
    }
    return semigroup_boundary(*alpha_, t_, E, ladder_);
}

std::pair<double, double> SpectralProblem::default_window() const
{
    double lo, hi;
    if (is_pair()) {
        lo = alpha_->hull_left() + beta_->hull_left();
        hi = alpha_->hull_right() + beta_->hull_right();
    } else {
        lo = t_ * alpha_->hull_left();
        hi = t_ * alpha_->hull_right();
        for (const auto& e : semigroup_edges(*alpha_, t_)) {
            lo = std::min(lo, e.E);
            hi = std::max(hi, e.E);
        }
    }
    const double pad = kWindowMargin * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> SpectralProblem::divergence_candidates() const
{
    std::vector<double> out;
    if (!is_pair()) {
        for (double x : critical_atoms(*alpha_, t_)) {
            out.push_back(t_ * x);
        }
    }
    return out;
}

std::vector<ResultAtom> SpectralProblem::result_atoms() const
{
    std::vector<ResultAtom> out;
    if (!is_pair()) {
        const double critical = 1.0 - 1.0 / t_;
        for (const auto& a : alpha_->atoms()) {
            if (a.mass > critical + 1e-9) {
                out.push_back({t_ * a.location, t_ * a.mass - (t_ - 1.0)});
            }
        }
    }
    return out;
}

std::vector<double> SpectralProblem::special_points() const
{
    std::vector<double> out = divergence_candidates();
    for (const auto& a : result_atoms()) {
        out.push_back(a.location);
    }
    if (is_pair()) {
        out.insert(out.end(), alpha_zeros_.begin(), alpha_zeros_.end());
        out.insert(out.end(), beta_zeros_.begin(), beta_zeros_.end());
    }
    return out;
}

namespace {

void run_parallel(std::size_t n, int threads, const std::function<void(std::size_t)>& job)
{
    const int k = std::max(1, threads);
    if (k == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < k; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                job(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace

DensityGrid density_grid(const SpectralProblem& problem, const GridOptions& options)
{
    if (options.n_points < 3) {
        throw InvalidInput("grid needs at least 3 points");
    }
    const auto [lo, hi] = options.window.value_or(problem.default_window());
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidInput("window must satisfy LO < HI");
    }
    DensityGrid dg;
    dg.pair = problem.is_pair();
    dg.t = problem.t();
    dg.window_lo = lo;
    dg.window_hi = hi;
    dg.atoms = problem.result_atoms();

    const double h = (hi - lo) / (options.n_points - 1);
    const auto divergent = problem.divergence_candidates();
    std::vector<double> atom_points;
    for (const auto& a : dg.atoms) {
        atom_points.push_back(a.location);
    }
    const auto specials = problem.special_points();

    std::vector<std::pair<double, PointFlag>> points;
    const auto near_special = [&](double x) {
        for (double s : specials) {
            if (std::abs(x - s) < 1e-3 * h) {
                return true;
            }
        }
        return false;
    };
    for (int i = 0; i < options.n_points; ++i) {
        const double x = (i == options.n_points - 1) ? hi : lo + i * h;
        if (!near_special(x)) {
            points.emplace_back(x, PointFlag::Ok);
        }
    }
    for (double s : specials) {
        if (s <= lo || s >= hi) {
            continue;
        }
        PointFlag f = PointFlag::Ok;
        if (std::find(divergent.begin(), divergent.end(), s) != divergent.end()) {
            f = PointFlag::Divergent;
        } else if (std::find(atom_points.begin(), atom_points.end(), s) != atom_points.end()) {
            f = PointFlag::Atom;
        }
        points.emplace_back(s, f);
    }
    for (double d : divergent) {
        const double step = h / kRefineFactor;
        for (int k = -kRefineFactor + 1; k < kRefineFactor; ++k) {
            const double x = d + k * step;
            if (k != 0 && x > lo && x < hi) {
                points.emplace_back(x, PointFlag::Ok);
            }
        }
    }
    std::sort(points.begin(), points.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const auto& l, const auto& r) { return l.first == r.first; }),
                 points.end());

    const std::size_t n = points.size();
    dg.grid.resize(n);
    dg.density.assign(n, 0.0);
    dg.im_omega.assign(n, 0.0);
    dg.im_omega_alpha.assign(n, 0.0);
    dg.im_omega_beta.assign(n, 0.0);
    dg.boundary_error.assign(n, 0.0);
    dg.flags.resize(n);
    dg.z_last.assign(n, cplx{});
    dg.omega_alpha_last.assign(n, cplx{});
    dg.omega_beta_last.assign(n, cplx{});
    dg.residual_last.assign(n, 0.0);
    dg.diverged_near.assign(n, kNaN);
    std::vector<std::string> failures(n);

    for (std::size_t i = 0; i < n; ++i) {
        dg.grid[i] = points[i].first;
        dg.flags[i] = points[i].second;
    }

    run_parallel(n, options.threads, [&](std::size_t i) {
        if (dg.flags[i] == PointFlag::Divergent) {
            dg.density[i] = kDensityCap;
            dg.im_omega[i] = std::numeric_limits<double>::infinity();
            dg.im_omega_beta[i] = std::numeric_limits<double>::infinity();
            return;
        }
        if (dg.flags[i] == PointFlag::Atom) {
            dg.density[i] = 0.0;
            return;
        }
        const BoundaryValue bv = problem.boundary(dg.grid[i]);
        dg.z_last[i] = bv.z_last;
        dg.omega_alpha_last[i] = bv.omega_alpha_last;
        dg.omega_beta_last[i] = bv.omega_beta_last;
        dg.residual_last[i] = bv.residual_last;
        if (!bv.ok) {
            dg.flags[i] = PointFlag::LadderFailed;
            failures[i] = bv.failure;
            return;
        }
        dg.density[i] = bv.density;
        dg.im_omega[i] = bv.im_omega;
        dg.im_omega_alpha[i] = bv.im_omega_alpha;
        dg.im_omega_beta[i] = bv.im_omega_beta;
        dg.boundary_error[i] = bv.boundary_error;
        if (bv.diverged_near) {
            dg.diverged_near[i] = *bv.diverged_near;
        }
        if (dg.density[i] > kDensityCap) {
            dg.density[i] = kDensityCap;
            dg.flags[i] = PointFlag::Divergent;
        }
    });

    std::string first_failure;
    for (std::size_t i = 0; i < n; ++i) {
        if (dg.flags[i] == PointFlag::LadderFailed) {
            ++dg.failed;
            if (first_failure.empty()) {
                first_failure = failures[i];
            }
        }
    }
    if (dg.failed > kFailureFraction * static_cast<double>(n)) {
        std::ostringstream os;
        os << "continuation ladder failed at " << dg.failed << " of " << n << " grid points (" << first_failure
           << ")";
        throw NumericalFailure(os.str());
    }
    return dg;
}

double grid_moment(const DensityGrid& dg, int k)
{
    double sum = 0.0;
    bool have = false;
    double px = 0.0;
    double pv = 0.0;
    for (std::size_t i = 0; i < dg.size(); ++i) {
        if (dg.flags[i] != PointFlag::Ok) {
            continue;
        }
        const double x = dg.grid[i];
        const double v = dg.density[i] * std::pow(x, k);
        if (have) {
            sum += 0.5 * (x - px) * (v + pv);
        }
        have = true;
        px = x;
        pv = v;
    }
    return sum;
}

namespace {

class SupportProbe {
public:
    SupportProbe(const SpectralProblem& problem, double threshold) : problem_(problem), threshold_(threshold) {}

    double im_omega(double E) const
    {
        const BoundaryValue bv = problem_.boundary(E);
        if (!bv.ok) {
            return std::numeric_limits<double>::infinity();
        }
        return bv.im_omega;
    }

    bool inside(double E) const { return im_omega(E) > threshold_; }

    /// Edge between an outside point and an inside point.
    double edge(double outside, double inside_pt) const
    {
        for (int it = 0; it < 200 && std::abs(inside_pt - outside) > kEdgeResolution; ++it) {
            const double mid = 0.5 * (outside + inside_pt);
            if (inside(mid)) {
                inside_pt = mid;
            } else {
                outside = mid;
            }
        }
        return 0.5 * (outside + inside_pt);
    }

    /// Golden-section minimum of Im omega on [a, b]; returns (argmin, value).
    std::pair<double, double> minimum(double a, double b) const
    {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        double fc = im_omega(c);
        double fd = im_omega(d);
        for (int it = 0; it < 200 && (b - a) > kEdgeResolution; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = im_omega(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = im_omega(d);
            }
        }
        const double x = 0.5 * (a + b);
        return {x, im_omega(x)};
    }

    double density(double E) const
    {
        const BoundaryValue bv = problem_.boundary(E);
        return bv.ok ? bv.density : 0.0;
    }

private:
    const SpectralProblem& problem_;
    double threshold_;
};

} // namespace

SupportReport detect_support(const SpectralProblem& problem, const DensityGrid& dg)
{
    SupportReport rep;
    // Usable points: solved ones plus divergence points (which are inside the support).
    std::vector<std::size_t> idx;
    double peak = 0.0;
    for (std::size_t i = 0; i < dg.size(); ++i) {
        if (dg.flags[i] == PointFlag::Ok) {
            idx.push_back(i);
            peak = std::max(peak, dg.im_omega[i]);
        } else if (dg.flags[i] == PointFlag::Divergent) {
            idx.push_back(i);
        }
    }
    if (idx.empty() || !(peak > 0.0)) {
        throw NumericalFailure("density grid carries no support");
    }
    const double eps = kSupportThreshold * peak;
    rep.threshold = eps;

    std::size_t hovering = 0;
    for (std::size_t i : idx) {
        if (dg.flags[i] == PointFlag::Ok && dg.im_omega[i] >= 0.1 * eps && dg.im_omega[i] <= 10.0 * eps) {
            ++hovering;
        }
    }
    if (hovering > kAmbiguityFraction * static_cast<double>(idx.size())) {
        throw NumericalFailure("support threshold is ambiguous: Im omega hovers near it on more than 1% of the grid");
    }

    const auto x = [&](std::size_t k) { return dg.grid[idx[k]]; };
    const auto inside_at = [&](std::size_t k) {
        const std::size_t i = idx[k];
        return dg.flags[i] == PointFlag::Divergent || dg.im_omega[i] > eps;
    };
    const SupportProbe probe(problem, eps);

    struct Run {
        std::size_t first, last;
        double left, right;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k < idx.size();) {
        if (!inside_at(k)) {
            ++k;
            continue;
        }
        std::size_t e = k;
        while (e + 1 < idx.size() && inside_at(e + 1)) {
            ++e;
        }
        if (k == 0 || e + 1 == idx.size()) {
            throw InvalidInput("support reaches the window boundary; widen the window");
        }
        runs.push_back({k, e, probe.edge(x(k - 1), x(k)), probe.edge(x(e + 1), x(e))});
        k = e + 1;
    }

    // Merge runs separated by a short outside stretch whose refined edges meet (a cusp).
    std::vector<Run> merged;
    for (const auto& r : runs) {
        if (!merged.empty()) {
            Run& prev = merged.back();
            const std::size_t gap_points = r.first - prev.last - 1;
            if (gap_points <= static_cast<std::size_t>(kCuspGapPoints) && r.left - prev.right < kCuspWidth) {
                rep.interior_zeros.push_back(0.5 * (prev.right + r.left));
                prev.last = r.last;
                prev.right = r.right;
                continue;
            }
        }
        merged.push_back(r);
    }

    for (const auto& r : merged) {
        rep.components.emplace_back(r.left, r.right);
        double run_peak = 0.0;
        for (std::size_t k = r.first; k <= r.last; ++k) {
            if (dg.flags[idx[k]] == PointFlag::Ok) {
                run_peak = std::max(run_peak, dg.im_omega[idx[k]]);
            }
        }
        for (std::size_t k = r.first + 1; k < r.last; ++k) {
            const std::size_t i = idx[k];
            if (dg.flags[i] != PointFlag::Ok || !inside_at(k - 1) || !inside_at(k + 1)) {
                continue;
            }
            const double v = dg.im_omega[i];
            const double vl = dg.im_omega[idx[k - 1]];
            const double vr = dg.im_omega[idx[k + 1]];
            if (!(v <= vl && v <= vr && (v < vl || v < vr)) || !(v < kMinimumCandidate * run_peak)) {
                continue;
            }
            const auto [xm, vm] = probe.minimum(x(k - 1), x(k + 1));
            if (vm <= eps) {
                rep.interior_zeros.push_back(xm);
            }
        }
    }
    std::sort(rep.interior_zeros.begin(), rep.interior_zeros.end());

    if (!problem.is_pair()) {
        for (double d : problem.divergence_candidates()) {
            bool grows = false;
            for (double side : {-1.0, 1.0}) {
                const double near = probe.density(d + side * 1e-6);
                const double far = probe.density(d + side * 1e-4);
                if (far > 0.0 && near > kGrowthFactor * far) {
                    grows = true;
                }
            }
            if (grows) {
                rep.divergence_points.push_back(d);
            }
        }
        const auto candidates = semigroup_edges(problem.measure(), problem.t());
        for (const auto& [l, r] : rep.components) {
            for (double e : {l, r}) {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& c : candidates) {
                    best = std::min(best, std::abs(c.E - e));
                }
                if (best > kEdgeMatch) {
                    rep.edge_mismatches.push_back(e);
                }
            }
        }
    }
    rep.I = static_cast<int>(rep.components.size());
    rep.C0 = static_cast<int>(rep.interior_zeros.size());
    rep.Cinf = static_cast<int>(rep.divergence_points.size());
    return rep;
}

void write_csv(std::ostream& out, const DensityGrid& dg)
{
    char buf[512];
    const auto fmt = [](double v) {
        char b[40];
        std::snprintf(b, sizeof b, "%.17g", v);
        return std::string(b);
    };
    out << (dg.pair ? "E,rho,im_omega_alpha,im_omega_beta,boundary_error\n" : "E,rho,im_omega_t,boundary_error\n");
    for (std::size_t i = 0; i < dg.size(); ++i) {
        if (dg.pair) {
            std::snprintf(buf, sizeof buf, "%s,%s,%s,%s,%s\n", fmt(dg.grid[i]).c_str(), fmt(dg.density[i]).c_str(),
                          fmt(dg.im_omega_alpha[i]).c_str(), fmt(dg.im_omega_beta[i]).c_str(),
                          fmt(dg.boundary_error[i]).c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%s,%s,%s,%s\n", fmt(dg.grid[i]).c_str(), fmt(dg.density[i]).c_str(),
                          fmt(dg.im_omega_beta[i]).c_str(), fmt(dg.boundary_error[i]).c_str());
        }
        out << buf;
    }
}

} // namespace freeconv
