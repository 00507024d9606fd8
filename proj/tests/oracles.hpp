#pragma once

// Closed forms and brute-force reference computations, independent of the library's
// quadrature and solvers.

#include "measure.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace fctest {

using cplx = std::complex<double>;

/// Semicircle law with the given variance.
inline double semicircle_density(double x, double variance)
{
    const double r2 = 4.0 * variance;
    return x * x < r2 ? std::sqrt(r2 - x * x) / (2.0 * std::numbers::pi * variance) : 0.0;
}

/// m of the semicircle with the given variance, branch with m ~ -1/z.
inline cplx semicircle_m(cplx z, double variance)
{
    const double r = 2.0 * std::sqrt(variance);
    return (-z + std::sqrt(z - r) * std::sqrt(z + r)) / (2.0 * variance);
}

/// Arcsine law on [-r, r].
inline double arcsine_density(double x, double r)
{
    return std::abs(x) < r ? 1.0 / (std::numbers::pi * std::sqrt(r * r - x * x)) : 0.0;
}

/// Arcsine CDF on [-r, r].
inline double arcsine_cdf(double x, double r)
{
    if (x <= -r) {
        return 0.0;
    }
    if (x >= r) {
        return 1.0;
    }
    return 0.5 + std::asin(x / r) / std::numbers::pi;
}

/// Semicircle CDF with the given variance.
inline double semicircle_cdf(double x, double variance)
{
    const double r = 2.0 * std::sqrt(variance);
    if (x <= -r) {
        return 0.0;
    }
    if (x >= r) {
        return 1.0;
    }
    const double u = x / r;
    return 0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

/// Tanh-sinh rule for int_a^b g(x) (x-a)^ta (b-x)^tb dx. g receives x together with
/// the exact distances to both ends, so the weight factors keep full precision.
template <class T>
T tanh_sinh(double a, double b, double ta, double tb, const std::function<T(double)>& g, double step = 1.0 / 64)
{
    const double half = 0.5 * (b - a);
    T sum{};
    for (double s = -6.0; s <= 6.0 + 1e-12; s += step) {
        const double u = 0.5 * std::numbers::pi * std::sinh(s);
        const double e = std::exp(-2.0 * std::abs(u));
        // 1 - |tanh u| computed without cancellation.
        const double small = 2.0 * e / (1.0 + e);
        const double w = 0.5 * std::numbers::pi * std::cosh(s) / (std::cosh(u) * std::cosh(u));
        double da, db; // distances to a and to b
        if (u < 0.0) {
            da = half * small;
            db = 2.0 * half - da;
        } else {
            db = half * small;
            da = 2.0 * half - db;
        }
        if (!(da > 0.0) || !(db > 0.0)) {
            continue;
        }
        const double x = u < 0.0 ? a + da : b - db;
        sum += g(x) * (half * w * step * std::pow(da, ta) * std::pow(db, tb));
    }
    return sum;
}

/// Reference m(z) for a measure, from its spec alone.
inline cplx reference_m(const freeconv::MeasureSpec& spec, cplx z)
{
    cplx m{0.0, 0.0};
    for (const auto& c : spec.components) {
        auto h = [&](double x) {
            double v = 0.0;
            for (auto it = c.h.rbegin(); it != c.h.rend(); ++it) {
                v = v * x + *it;
            }
            return c.h.empty() ? 1.0 : v;
        };
        const double norm = tanh_sinh<double>(c.a, c.b, c.t_minus, c.t_plus, [&](double x) { return h(x); });
        const cplx raw = tanh_sinh<cplx>(c.a, c.b, c.t_minus, c.t_plus,
                                         [&](double x) { return cplx(h(x)) / (x - z); });
        m += c.weight * raw / norm;
    }
    for (const auto& a : spec.atoms) {
        m += a.mass / (a.x - z);
    }
    return m;
}

} // namespace fctest
