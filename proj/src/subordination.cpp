#include "subordination.hpp"

#include "errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace freeconv {

namespace {

constexpr double kMinDamping = 1.0 / 1024.0;
constexpr int kStallWindow = 2000;
constexpr int kPolishWindow = 20;

double scale_of(cplx w)
{
    return std::max(1.0, std::abs(w));
}

bool finite(cplx w)
{
    return std::isfinite(w.real()) && std::isfinite(w.imag());
}

struct FixedPoint {
    cplx w;
    int iterations = 0;
    double residual = 0.0;
};

/// Solves w = G(w) on {Im w >= im_floor} with secant steps on G(w) - w,
/// falling back to damped Picard steps whenever the secant step leaves the
/// half-plane or fails to reduce the residual.
template <class Map>
FixedPoint accelerated(const Map& G, cplx start, double im_floor, double tol, int max_iterations)
{
    const double target = 0.25 * tol;
    cplx w = start;
    cplx g = G(w);
    double rn = std::abs(g - w) / scale_of(w);
    cplx prev_w{};
    cplx prev_r{};
    bool have_prev = false;
    double lambda = 1.0;
    double best = rn;
    int best_at = 0;

    int it = 0;
    for (; it < max_iterations; ++it) {
        if (rn <= target) {
            break;
        }
        if (best <= tol && it - best_at > kPolishWindow) {
            break;
        }
        if (it - best_at > kStallWindow) {
            break;
        }
        const cplx r = g - w;
        bool accepted = false;
        if (have_prev) {
            const cplx d = r - prev_r;
            if (std::abs(d) > 0.0) {
                const cplx ws = w - r * (w - prev_w) / d;
                if (finite(ws) && ws.imag() >= im_floor) {
                    try {
                        const cplx gs = G(ws);
                        const double rs = std::abs(gs - ws) / scale_of(ws);
                        if (finite(gs) && rs < rn) {
                            prev_w = w;
                            prev_r = r;
                            w = ws;
                            g = gs;
                            rn = rs;
                            accepted = true;
                        }
                    } catch (const DomainError&) {
                    }
                }
            }
        }
        if (!accepted) {
            const cplx wp = w + lambda * r;
            const cplx gp = G(wp);
            const double rp = std::abs(gp - wp) / scale_of(wp);
            if (!finite(gp)) {
                throw NumericalFailure("fixed-point map left the finite plane");
            }
            if (rp > rn) {
                lambda = std::max(0.5 * lambda, kMinDamping);
            } else {
                lambda = std::min(1.0, 2.0 * lambda);
            }
            prev_w = w;
            prev_r = r;
            w = wp;
            g = gp;
            rn = rp;
        }
        have_prev = true;
        if (rn < best) {
            best = rn;
            best_at = it;
        }
    }
    return {w, it, rn};
}

/// Plain Picard iteration. Slow near edges, but it cannot settle on a local
/// minimum of the residual the way the accelerated steps can.
template <class Map>
FixedPoint picard(const Map& G, cplx start, double tol, int max_iterations)
{
    const double target = 0.25 * tol;
    FixedPoint best{start, 0, std::numeric_limits<double>::infinity()};
    cplx w = start;
    int it = 0;
    try {
        for (; it < max_iterations; ++it) {
            const cplx g = G(w);
            if (!finite(g)) {
                break;
            }
            const double rn = std::abs(g - w) / scale_of(w);
            if (rn < best.residual) {
                best = {w, it, rn};
            }
            if (rn <= target || it - best.iterations > kStallWindow) {
                break;
            }
            w = g;
        }
    } catch (const DomainError&) {
    }
    best.iterations = it;
    return best;
}

template <class Map>
FixedPoint fixed_point(const Map& G, cplx start, double im_floor, double tol, int max_iterations)
{
    FixedPoint fast;
    try {
        fast = accelerated(G, start, im_floor, tol, max_iterations);
        if (fast.residual <= tol) {
            return fast;
        }
    } catch (const NumericalFailure&) {
        fast.residual = std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
        fast.residual = std::numeric_limits<double>::infinity();
    }
    FixedPoint slow = picard(G, start, tol, max_iterations);
    slow.iterations += fast.iterations;
    return slow.residual < fast.residual ? slow : fast;
}

std::string describe_failure(const char* what, cplx z, double residual, int iterations)
{
    std::ostringstream os;
    os.precision(6);
    os << what << " did not converge at z = " << z.real() << (z.imag() < 0 ? " - " : " + ")
       << std::abs(z.imag()) << "i (residual " << residual << " after " << iterations << " iterations)";
    return os.str();
}

} // namespace

double semigroup_residual(const TransformSource& mu, double t, cplx z, cplx omega)
{
    const TransformValue v = mu.eval(omega);
    return std::abs(omega - z - (t - 1.0) * v.f_shift) / scale_of(omega);
}

double pair_residual(const TransformSource& alpha, const TransformSource& beta, cplx z,
                     cplx omega_alpha, cplx omega_beta)
{
    const cplx fa = omega_beta + alpha.eval(omega_beta).f_shift;
    const cplx fb = omega_alpha + beta.eval(omega_alpha).f_shift;
    const double scale = std::max(scale_of(omega_alpha), scale_of(omega_beta));
    return (std::abs(omega_alpha + omega_beta - z - fa) + std::abs(fa - fb)) / scale;
}

SemigroupPoint solve_semigroup(const TransformSource& mu, double t, cplx z, std::optional<cplx> start)
{
    if (!(t > 1.0) || !std::isfinite(t)) {
        throw InvalidInput("semigroup parameter t must exceed 1");
    }
    if (!(z.imag() > 0.0)) {
        throw InvalidInput("semigroup solve needs Im z > 0; use the boundary ladder on the real line");
    }
    const auto G = [&](cplx w) { return z + (t - 1.0) * mu.eval(w).f_shift; };
    const cplx w0 = start.value_or(z + cplx(0.0, 1.0));
    const FixedPoint fp = fixed_point(G, w0, z.imag(), kSemigroupTolerance, kSemigroupMaxIterations);
    const double res = semigroup_residual(mu, t, z, fp.w);
    if (!(res <= kSemigroupTolerance) || fp.w.imag() < z.imag() * (1.0 - 1e-12)) {
        throw NumericalFailure(describe_failure("semigroup iteration", z, res, fp.iterations));
    }
    return {z, fp.w, res, fp.iterations};
}

SubordinationPair solve_pair(const TransformSource& alpha, const TransformSource& beta, cplx z,
                             std::optional<SubordinationPair> start)
{
    if (!(z.imag() > 0.0)) {
        throw InvalidInput("pair solve needs Im z > 0; use the boundary ladder on the real line");
    }
    const cplx a0 = start ? start->omega_alpha : z + cplx(0.0, 1.0);
    const cplx b0 = start ? start->omega_beta : z + cplx(0.0, 1.0);
    // Iterate on the smaller subordination function; the other one may be
    // large near divergence points and is then recovered from it.
    const bool on_beta = std::abs(b0) <= std::abs(a0);
    cplx oa, ob;
    int iterations;
    if (on_beta) {
        const auto G = [&](cplx w) { return z + beta.eval(z + alpha.eval(w).f_shift).f_shift; };
        const FixedPoint fp = fixed_point(G, b0, z.imag(), kPairTolerance, kPairMaxIterations);
        ob = fp.w;
        oa = z + alpha.eval(ob).f_shift;
        iterations = fp.iterations;
    } else {
        const auto G = [&](cplx w) { return z + alpha.eval(z + beta.eval(w).f_shift).f_shift; };
        const FixedPoint fp = fixed_point(G, a0, z.imag(), kPairTolerance, kPairMaxIterations);
        oa = fp.w;
        ob = z + beta.eval(oa).f_shift;
        iterations = fp.iterations;
    }
    const double res = pair_residual(alpha, beta, z, oa, ob);
    const double floor = z.imag() * (1.0 - 1e-12);
    if (!(res <= kPairTolerance) || oa.imag() < floor || ob.imag() < floor) {
        throw NumericalFailure(describe_failure("pair iteration", z, res, iterations));
    }
    return {z, oa, ob, res, iterations};
}

SemigroupPoint solve_semigroup(const MultiCutMeasure& mu, double t, cplx z)
{
    return solve_semigroup(MeasureSource(mu), t, z);
}

SubordinationPair solve_pair(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, cplx z)
{
    return solve_pair(MeasureSource(alpha), MeasureSource(beta), z);
}

TransformValue SemigroupSource::eval(cplx w) const
{
    const SemigroupPoint p = solve_semigroup(mu_, t_, w);
    return {mu_.eval(p.omega_t).m, t_ * (p.omega_t - w) / (t_ - 1.0)};
}

TransformValue PairSource::eval(cplx w) const
{
    const SubordinationPair p = solve_pair(alpha_, beta_, w);
    return {alpha_.eval(p.omega_beta).m, p.omega_alpha + p.omega_beta - 2.0 * w};
}

std::vector<double> eta_levels(const LadderOptions& options)
{
    if (!(options.eta_top > 0.0) || !(options.ratio > 0.0 && options.ratio < 1.0) || options.levels < 3) {
        throw InvalidInput("eta ladder needs a positive top level, ratio in (0,1) and at least 3 levels");
    }
    std::vector<double> out;
    double eta = options.eta_top;
    for (int k = 0; k < options.levels; ++k) {
        out.push_back(eta);
        eta *= options.ratio;
    }
    return out;
}

cplx richardson3(cplx fine, cplx mid, cplx coarse)
{
    return (8.0 * fine - 6.0 * mid + coarse) / 3.0;
}

cplx richardson2(cplx fine, cplx mid)
{
    return 2.0 * fine - mid;
}

namespace {

struct LadderTrace {
    std::vector<cplx> m;
    std::vector<cplx> oa;
    std::vector<cplx> ob;
};

void extrapolate(const LadderTrace& tr, BoundaryValue& out)
{
    const std::size_t n = tr.m.size();
    const cplx m3 = richardson3(tr.m[n - 1], tr.m[n - 2], tr.m[n - 3]);
    const cplx m2 = richardson2(tr.m[n - 1], tr.m[n - 2]);
    out.m = m3;
    out.density = std::max(0.0, m3.imag()) / M_PI;
    out.boundary_error = std::abs(m3 - m2);
    const auto im3 = [&](const std::vector<cplx>& v) {
        return std::max(0.0, richardson3(v[n - 1], v[n - 2], v[n - 3]).imag());
    };
    out.im_omega_beta = im3(tr.ob);
    if (!tr.oa.empty()) {
        out.im_omega_alpha = im3(tr.oa);
    }
}

} // namespace

BoundaryValue semigroup_boundary(const MultiCutMeasure& mu, double t, double E, const LadderOptions& options)
{
    const MeasureSource src(mu);
    BoundaryValue out;
    out.E = E;
    LadderTrace trace;
    std::optional<cplx> start;
    for (double eta : eta_levels(options)) {
        const cplx z(E, eta);
        try {
            const SemigroupPoint p = solve_semigroup(src, t, z, start);
            start = p.omega_t;
            trace.m.push_back(src.eval(p.omega_t).m);
            trace.ob.push_back(p.omega_t);
            out.z_last = z;
            out.omega_beta_last = p.omega_t;
            out.residual_last = p.residual;
            out.iterations_total += p.iterations;
            ++out.levels_completed;
        } catch (const std::exception& e) {
            out.failure = e.what();
            return out;
        }
    }
    extrapolate(trace, out);
    // Im omega_t vanishes quadratically where omega_t meets an atom of mu, even
    // inside the support; weighting by the atoms keeps the indicator comparable
    // to the density there.
    const std::size_t n = trace.ob.size();
    const cplx w = richardson3(trace.ob[n - 1], trace.ob[n - 2], trace.ob[n - 3]);
    double weight = 1.0;
    for (const auto& a : mu.atoms()) {
        weight += a.mass / std::norm(w - a.location);
    }
    out.im_omega = std::isfinite(weight) ? out.im_omega_beta * weight : out.im_omega_beta;
    out.ok = true;
    return out;
}

BoundaryValue pair_boundary(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, double E,
                            const std::vector<double>& alpha_gap_zeros,
                            const std::vector<double>& beta_gap_zeros, const LadderOptions& options)
{
    const MeasureSource sa(alpha);
    const MeasureSource sb(beta);
    BoundaryValue out;
    out.E = E;
    LadderTrace trace;
    std::optional<SubordinationPair> start;
    for (double eta : eta_levels(options)) {
        const cplx z(E, eta);
        try {
            const SubordinationPair p = solve_pair(sa, sb, z, start);
            start = p;
            // m of the convolution equals m_alpha(omega_beta) = m_beta(omega_alpha);
            // evaluate through the bounded subordination function.
            const cplx m = std::abs(p.omega_beta) <= std::abs(p.omega_alpha) ? sa.eval(p.omega_beta).m
                                                                              : sb.eval(p.omega_alpha).m;
            trace.m.push_back(m);
            trace.oa.push_back(p.omega_alpha);
            trace.ob.push_back(p.omega_beta);
            out.z_last = z;
            out.omega_alpha_last = p.omega_alpha;
            out.omega_beta_last = p.omega_beta;
            out.residual_last = p.residual;
            out.iterations_total += p.iterations;
            ++out.levels_completed;
        } catch (const std::exception& e) {
            out.failure = e.what();
            return out;
        }
    }
    extrapolate(trace, out);
    const auto near_zero = [](cplx w, const std::vector<double>& zeros) -> std::optional<double> {
        for (double e : zeros) {
            if (std::abs(w - cplx(e, 0.0)) < kDivergenceProximity) {
                return e;
            }
        }
        return std::nullopt;
    };
    if (std::abs(out.omega_alpha_last) > kDivergenceThreshold) {
        if (auto e = near_zero(out.omega_beta_last, alpha_gap_zeros)) {
            out.alpha_infinite = true;
            out.diverged_near = e;
            out.im_omega_alpha = std::numeric_limits<double>::infinity();
        }
    }
    if (std::abs(out.omega_beta_last) > kDivergenceThreshold) {
        if (auto e = near_zero(out.omega_alpha_last, beta_gap_zeros)) {
            out.beta_infinite = true;
            out.diverged_near = e;
            out.im_omega_beta = std::numeric_limits<double>::infinity();
        }
    }
    out.im_omega = std::min(out.im_omega_alpha, out.im_omega_beta);
    out.ok = true;
    return out;
}

} // namespace freeconv
