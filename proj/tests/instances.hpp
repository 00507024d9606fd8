#pragma once

// Random admissible measures shared by the property tests and the acceptance run.

#include "measure.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace fctest {

using freeconv::AtomSpec;
using freeconv::BuildOptions;
using freeconv::ComponentSpec;
using freeconv::MeasurePath;
using freeconv::MeasureSpec;
using freeconv::MultiCutMeasure;

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct ComponentShape {
    double gap_lo = 0.3, gap_hi = 2.0;
    double len_lo = 0.5, len_hi = 2.0;
    double exp_lo = -0.9, exp_hi = 0.9;
    bool modulate = true;
};

/// n disjoint Jacobi components starting at `start`, total weight `mass`.
inline std::vector<ComponentSpec> random_components(std::mt19937_64& rng, int n, double mass, double start = 0.0,
                                                    const ComponentShape& shape = {})
{
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = uniform(rng, 0.3, 1.0);
        total += x;
    }
    std::vector<ComponentSpec> out;
    double at = start;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            at += uniform(rng, shape.gap_lo, shape.gap_hi);
        }
        ComponentSpec c;
        c.a = at;
        c.b = at + uniform(rng, shape.len_lo, shape.len_hi);
        at = c.b;
        c.t_minus = uniform(rng, shape.exp_lo, shape.exp_hi);
        c.t_plus = uniform(rng, shape.exp_lo, shape.exp_hi);
        if (shape.modulate) {
            // Positive on [a, b]: |c1 u + c2 u^2| <= 0.6 for u in [-1, 1].
            const double mid = 0.5 * (c.a + c.b);
            const double half = 0.5 * (c.b - c.a);
            const double c1 = uniform(rng, -0.3, 0.3) / half;
            const double c2 = uniform(rng, -0.3, 0.3) / (half * half);
            c.h = {1.0 - c1 * mid + c2 * mid * mid, c1 - 2.0 * c2 * mid, c2};
        }
        c.weight = mass * w[i] / total;
        out.push_back(c);
    }
    // Make the weights sum to `mass` to the last bit the build check can see.
    double sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        sum += out[i].weight;
    }
    out.back().weight = mass - sum;
    return out;
}

inline bool clear_of_endpoints(const std::vector<ComponentSpec>& comps, const std::vector<AtomSpec>& atoms, double x,
                               double margin)
{
    for (const auto& c : comps) {
        if (std::abs(x - c.a) < margin || std::abs(x - c.b) < margin) {
            return false;
        }
    }
    for (const auto& a : atoms) {
        if (std::abs(x - a.x) < margin) {
            return false;
        }
    }
    return true;
}

/// 1-3 components, 0-2 atoms; with `critical_t` > 1 one extra atom of mass 1 - 1/t is planted.
inline MeasureSpec random_semigroup_spec(std::mt19937_64& rng, double critical_t = 0.0)
{
    const int n = pick(rng, 1, 3);
    const int n_atoms = pick(rng, 0, 2);
    std::vector<double> masses;
    double atom_mass = 0.0;
    if (critical_t > 1.0) {
        masses.push_back(1.0 - 1.0 / critical_t);
        atom_mass += masses.back();
    }
    for (int i = 0; i < n_atoms; ++i) {
        // Keep ordinary atoms well away from the critical mass.
        double m = uniform(rng, 0.02, 0.12);
        if (critical_t > 1.0 && std::abs(m - (1.0 - 1.0 / critical_t)) < 0.01) {
            m += 0.02;
        }
        if (atom_mass + m > 0.9) {
            break;
        }
        masses.push_back(m);
        atom_mass += m;
    }
    MeasureSpec spec;
    spec.components = random_components(rng, n, 1.0 - atom_mass, uniform(rng, -3.0, -1.0));
    const double lo = spec.components.front().a - 1.5;
    const double hi = spec.components.back().b + 1.5;
    for (double m : masses) {
        double x;
        do {
            x = uniform(rng, lo, hi);
        } while (!clear_of_endpoints(spec.components, spec.atoms, x, 0.1));
        spec.atoms.push_back({x, m});
    }
    // Total mass exactly 1 in floating point.
    double total = 0.0;
    for (const auto& c : spec.components) {
        total += c.weight;
    }
    for (const auto& a : spec.atoms) {
        total += a.mass;
    }
    spec.components.back().weight += 1.0 - total;
    return spec;
}

/// Shifts a pair-path spec so that its mean vanishes.
inline MeasureSpec centered(MeasureSpec spec)
{
    for (int pass = 0; pass < 2; ++pass) {
        const auto mu = MultiCutMeasure::build(spec, {MeasurePath::Semigroup, true});
        const double mean = mu.mean();
        for (auto& c : spec.components) {
            c.a -= mean;
            c.b -= mean;
            if (c.h.size() == 3) {
                // h(x) -> h(x + mean)
                const double h0 = c.h[0], h1 = c.h[1], h2 = c.h[2];
                c.h = {h0 + h1 * mean + h2 * mean * mean, h1 + 2.0 * h2 * mean, h2};
            }
        }
    }
    spec.centered = true;
    return spec;
}

/// Centered absolutely continuous measure with n components.
inline MeasureSpec random_pair_spec(std::mt19937_64& rng, int n, const ComponentShape& shape = {})
{
    MeasureSpec spec;
    spec.components = random_components(rng, n, 1.0, 0.0, shape);
    return centered(spec);
}

inline MultiCutMeasure pair_measure(const MeasureSpec& spec)
{
    return MultiCutMeasure::build(spec, {MeasurePath::Pair, false});
}

inline MultiCutMeasure semigroup_measure(const MeasureSpec& spec)
{
    return MultiCutMeasure::build(spec, {MeasurePath::Semigroup, true});
}

inline MeasureSpec semicircle_spec(double radius = 2.0)
{
    MeasureSpec spec;
    spec.components.push_back({-radius, radius, 0.5, 0.5, {1.0}, 1.0});
    return spec;
}

inline MeasureSpec bernoulli_spec()
{
    MeasureSpec spec;
    spec.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    return spec;
}

} // namespace fctest
