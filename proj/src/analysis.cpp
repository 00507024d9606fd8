#include "analysis.hpp"

#include "errors.hpp"
#include "transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace freeconv {

namespace {

constexpr double kGapInset = 1e-9;
constexpr double kZeroTolerance = 1e-12;
constexpr double kTieTolerance = 1e-12;
constexpr double kCriticalMassTolerance = 1e-9;
constexpr int kSignSamples = 64;

double real_m(const MultiCutMeasure& mu, double x)
{
    return cauchy_m(mu, cplx(x, 0.0)).real();
}

/// Root of an increasing function on [lo, hi] with f(lo) < 0 < f(hi).
template <class Fn>
double bisect(const Fn& f, double lo, double hi, double tol)
{
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) {
            break;
        }
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Bisection for a root of f with sign(f(lo)) != sign(f(hi)), any orientation.
template <class Fn>
double bracket_root(const Fn& f, double lo, double hi, bool increasing)
{
    const auto g = [&](double x) { return increasing ? f(x) : -f(x); };
    return bisect(g, lo, hi, 4e-16 * std::max({1.0, std::abs(lo), std::abs(hi)}));
}

std::string int_str(int v)
{
    return std::to_string(v);
}

} // namespace

std::vector<double> gap_zeros(const MultiCutMeasure& mu)
{
    const auto pieces = mu.support_pieces();
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double lo = pieces[i].right + kGapInset;
        const double hi = pieces[i + 1].left - kGapInset;
        if (!(hi > lo)) {
            continue;
        }
        const double mlo = real_m(mu, lo);
        const double mhi = real_m(mu, hi);
        if (mlo < 0.0 && mhi > 0.0) {
            out.push_back(bisect([&](double x) { return real_m(mu, x); }, lo, hi, kZeroTolerance));
        } else if (mlo == 0.0) {
            out.push_back(lo);
        } else if (mhi == 0.0) {
            out.push_back(hi);
        }
    }
    return out;
}

int gap_index(const MultiCutMeasure& mu, double x)
{
    const auto pieces = mu.support_pieces();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (x > pieces[i].right && x < pieces[i + 1].left) {
            return static_cast<int>(i) + 1;
        }
    }
    return 0;
}

std::vector<double> PSets::P_alpha() const
{
    std::vector<double> out;
    for (const auto& c : alpha) {
        if (c.member) {
            out.push_back(c.E);
        }
    }
    return out;
}

std::vector<double> PSets::P_beta() const
{
    std::vector<double> out;
    for (const auto& c : beta) {
        if (c.member) {
            out.push_back(c.E);
        }
    }
    return out;
}

namespace {

std::vector<PClassification> classify_one(const MultiCutMeasure& mu, const MultiCutMeasure& other)
{
    std::vector<PClassification> out;
    const double other_mass = other.variance();
    for (double e : gap_zeros(mu)) {
        PClassification c;
        c.E = e;
        c.gap = gap_index(mu, e);
        const double mp = m_prime(mu, cplx(e, 0.0)).real();
        c.criterion = other_mass * mp;
        c.hat_mass = 1.0 / mp;
        c.other_mass = other_mass;
        c.member = c.criterion <= 1.0 + kTieTolerance;
        const bool alt = other_mass <= c.hat_mass * (1.0 + kTieTolerance);
        c.criteria_agree = (alt == c.member);
        out.push_back(c);
    }
    return out;
}

} // namespace

PSets classify_p_sets(const MultiCutMeasure& alpha, const MultiCutMeasure& beta)
{
    return {classify_one(alpha, beta), classify_one(beta, alpha)};
}

std::vector<int> n_set(const MultiCutMeasure& mu)
{
    const auto pieces = mu.support_pieces();
    const int n = static_cast<int>(pieces.size());
    const auto gap_sign = [&](int gap) {
        // +1 if Re m > 0 throughout gap (1-based), -1 if < 0 throughout, 0 if mixed.
        const double lo = pieces[gap - 1].right;
        const double hi = pieces[gap].left;
        bool pos = true;
        bool neg = true;
        for (int k = 0; k < kSignSamples; ++k) {
            const double x = lo + (hi - lo) * (k + 0.5) / kSignSamples;
            const double v = real_m(mu, x);
            pos = pos && v > 0.0;
            neg = neg && v < 0.0;
        }
        return pos ? 1 : (neg ? -1 : 0);
    };
    std::vector<int> out;
    for (int i = 1; i <= n - 2; ++i) {
        if (gap_sign(i) < 0 && gap_sign(i + 1) > 0) {
            out.push_back(i);
        }
    }
    return out;
}

double hat_derivative(const MultiCutMeasure& mu, double w)
{
    for (const auto& a : mu.atoms()) {
        if (w == a.location) {
            w = std::nextafter(w, std::numeric_limits<double>::infinity());
        }
    }
    return I_mu_hat(mu, cplx(w, 0.0));
}

std::vector<double> critical_atoms(const MultiCutMeasure& mu, double t)
{
    std::vector<double> out;
    for (const auto& a : mu.atoms()) {
        if (std::abs(a.mass - (1.0 - 1.0 / t)) < kCriticalMassTolerance) {
            out.push_back(a.location);
        }
    }
    return out;
}

std::vector<EdgeCandidate> semigroup_edges(const MultiCutMeasure& mu, double t)
{
    if (!(t > 1.0) || !std::isfinite(t)) {
        throw InvalidInput("semigroup parameter t must exceed 1");
    }
    const double level = 1.0 / (t - 1.0);
    const auto phi = [&](double w) { return hat_derivative(mu, w) - level; };
    const auto image = [&](double w) {
        return EdgeCandidate{w, w - (t - 1.0) * F_shift(mu, cplx(w, 0.0)).real()};
    };

    // Support of mu-hat: absolutely continuous pieces plus the gap zeros of m.
    std::vector<std::pair<double, double>> hat_pieces;
    for (const auto& c : mu.components()) {
        hat_pieces.emplace_back(c.left(), c.right());
    }
    for (double e : gap_zeros(mu)) {
        hat_pieces.emplace_back(e, e);
    }
    std::sort(hat_pieces.begin(), hat_pieces.end());

    std::vector<EdgeCandidate> out;
    if (hat_pieces.empty()) {
        // Purely atomic mu without gap zeros cannot occur (two atoms always bracket a zero).
        return out;
    }
    const double scale = std::max(1.0, mu.hull_right() - mu.hull_left());
    const auto inset_of = [&](double x) { return 1e-11 * std::max(1.0, std::abs(x)); };

    // Left ray: phi increases from -level to +infinity.
    {
        const double hi = hat_pieces.front().first - inset_of(hat_pieces.front().first);
        double reach = scale;
        double lo = hi - reach;
        while (phi(lo) > 0.0 && reach < 1e12 * scale) {
            reach *= 2.0;
            lo = hi - reach;
        }
        if (phi(hi) > 0.0) {
            out.push_back(image(bracket_root(phi, lo, hi, true)));
        } else {
            out.push_back(image(hi));
        }
    }

    for (std::size_t i = 0; i + 1 < hat_pieces.size(); ++i) {
        const double u = hat_pieces[i].second + inset_of(hat_pieces[i].second);
        const double v = hat_pieces[i + 1].first - inset_of(hat_pieces[i + 1].first);
        if (!(v > u)) {
            continue;
        }
        // Golden-section search for the minimum of the convex function.
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = u;
        double b = v;
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        double fc = phi(c);
        double fd = phi(d);
        for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = phi(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = phi(d);
            }
        }
        const double wmin = 0.5 * (a + b);
        const double fmin = phi(wmin);
        if (fmin > 0.0) {
            continue;
        }
        if (fmin == 0.0) {
            out.push_back(image(wmin));
            continue;
        }
        if (phi(u) > 0.0) {
            out.push_back(image(bracket_root(phi, u, wmin, false)));
        }
        if (phi(v) > 0.0) {
            out.push_back(image(bracket_root(phi, wmin, v, true)));
        }
    }

    // Right ray: phi decreases from +infinity to -level.
    {
        const double lo = hat_pieces.back().second + inset_of(hat_pieces.back().second);
        double reach = scale;
        double hi = lo + reach;
        while (phi(hi) > 0.0 && reach < 1e12 * scale) {
            reach *= 2.0;
            hi = lo + reach;
        }
        if (phi(lo) > 0.0) {
            out.push_back(image(bracket_root(phi, lo, hi, false)));
        } else {
            out.push_back(image(lo));
        }
    }
    std::sort(out.begin(), out.end(), [](const EdgeCandidate& l, const EdgeCandidate& r) { return l.E < r.E; });
    return out;
}

BoundsReport bounds_report_semigroup(const MultiCutMeasure& mu, double t, const SupportReport& support)
{
    if (mu.n_ac() == 0) {
        throw InvalidInput("component-count bound needs at least one absolutely continuous component");
    }
    BoundsReport r;
    r.kind = BoundsKind::Semigroup;
    r.theorem = "1.2";
    r.t = t;
    r.I = support.I;
    r.C0 = support.C0;
    r.Cinf = support.Cinf;
    r.zero_set = gap_zeros(mu);
    r.expected_cinf = static_cast<int>(critical_atoms(mu, t).size());
    const int nac = static_cast<int>(mu.n_ac());
    r.lower = 1;
    r.upper = nac + static_cast<int>(r.zero_set.size());
    r.coarse_upper = 2 * nac + static_cast<int>(mu.n_pp_out()) - 1;
    const int measured = r.I + r.C0;
    r.verdicts.push_back({"lower <= I+C0", r.lower <= measured, int_str(r.lower) + " <= " + int_str(measured)});
    r.verdicts.push_back({"I+C0 <= n_ac+|Z|", measured <= r.upper, int_str(measured) + " <= " + int_str(r.upper)});
    r.verdicts.push_back({"n_ac+|Z| <= 2n_ac+n_pp_out-1", r.upper <= r.coarse_upper,
                          int_str(r.upper) + " <= " + int_str(r.coarse_upper)});
    r.verdicts.push_back({"Cinf == critical atoms", r.Cinf == r.expected_cinf,
                          int_str(r.Cinf) + " == " + int_str(r.expected_cinf)});
    return r;
}

BoundsReport bounds_report_pair(const MultiCutMeasure& alpha_in, const MultiCutMeasure& beta_in,
                                const SupportReport& support, const std::string& theorem)
{
    if (!alpha_in.atoms().empty() || !beta_in.atoms().empty() || alpha_in.n_ac() == 0 || beta_in.n_ac() == 0) {
        throw InvalidInput("pair bounds need absolutely continuous inputs");
    }
    const bool swap = beta_in.n_ac() > alpha_in.n_ac();
    const MultiCutMeasure& alpha = swap ? beta_in : alpha_in;
    const MultiCutMeasure& beta = swap ? alpha_in : beta_in;
    const int na = static_cast<int>(alpha.n_ac());
    const int nb = static_cast<int>(beta.n_ac());

    std::string th = theorem;
    if (th.empty()) {
        th = nb == 1 ? "1.3" : "1.4";
    }
    if (th == "1.3" && nb != 1) {
        throw InvalidInput("theorem 1.3 needs one of the inputs to have a single component");
    }
    if (th == "1.4" && nb < 2) {
        throw InvalidInput("theorem 1.4 needs both inputs to have at least two components");
    }
    if (th != "1.3" && th != "1.4") {
        throw InvalidInput("unknown pair theorem '" + th + "'");
    }

    BoundsReport r;
    r.kind = BoundsKind::Pair;
    r.theorem = th;
    r.swapped = swap;
    r.I = support.I;
    r.C0 = support.C0;
    r.Cinf = support.Cinf;
    const PSets ps = classify_p_sets(alpha, beta);
    for (const auto& c : ps.alpha) {
        r.E_alpha.push_back(c.E);
    }
    for (const auto& c : ps.beta) {
        r.E_beta.push_back(c.E);
    }
    r.P_alpha = ps.P_alpha();
    r.P_beta = ps.P_beta();
    r.N_alpha = n_set(alpha);
    const int pa = static_cast<int>(r.P_alpha.size());
    const int pb = static_cast<int>(r.P_beta.size());
    const int measured = r.I + r.C0;

    bool agree = true;
    for (const auto& c : ps.alpha) {
        agree = agree && c.criteria_agree;
    }
    for (const auto& c : ps.beta) {
        agree = agree && c.criteria_agree;
    }
    r.verdicts.push_back({"P-set criteria agree", agree, ""});

    if (th == "1.3") {
        r.lower = 1 + pa;
        r.upper = na - static_cast<int>(r.N_alpha.size());
        r.coarse_upper = na;
        r.verdicts.push_back({"1+|P_a| <= I+C", r.lower <= measured, int_str(r.lower) + " <= " + int_str(measured)});
        r.verdicts.push_back({"I+C <= n_a-|N_a|", measured <= r.upper, int_str(measured) + " <= " + int_str(r.upper)});
    } else {
        r.lower = 1 + pa + pb;
        r.upper = (pb + 1) * (na - 1) + (pa + 1) * (nb - 1) + 1;
        r.coarse_upper = 2 * na * nb;
        // Consecutive P^alpha pairs, with sentinel gap indices 0 and n_alpha.
        std::vector<int> idx{0};
        for (const auto& c : ps.alpha) {
            if (c.member) {
                idx.push_back(c.gap);
            }
        }
        idx.push_back(na);
        const auto edge_of = [&](int gap) {
            if (gap == 0) {
                return -std::numeric_limits<double>::infinity();
            }
            if (gap == na) {
                return std::numeric_limits<double>::infinity();
            }
            for (const auto& c : ps.alpha) {
                if (c.gap == gap) {
                    return c.E;
                }
            }
            return 0.0;
        };
        int total = 0;
        for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
            const double lo = edge_of(idx[k]);
            const double hi = edge_of(idx[k + 1]);
            int n = 0;
            for (double e : r.P_beta) {
                n += (e > lo && e < hi) ? 1 : 0;
            }
            const int s = n * (na - 1) + (nb - 1) + (idx[k + 1] - idx[k]);
            r.decomposition.push_back(s);
            total += s;
        }
        r.verdicts.push_back({"lower <= I+C", r.lower <= measured, int_str(r.lower) + " <= " + int_str(measured)});
        r.verdicts.push_back({"I+C <= upper", measured <= r.upper, int_str(measured) + " <= " + int_str(r.upper)});
        r.verdicts.push_back({"upper < 2 n_a n_b", r.upper < r.coarse_upper,
                              int_str(r.upper) + " < " + int_str(r.coarse_upper)});
        r.verdicts.push_back({"decomposition sums to upper", total == r.upper,
                              int_str(total) + " == " + int_str(r.upper)});
    }
    return r;
}

} // namespace freeconv
