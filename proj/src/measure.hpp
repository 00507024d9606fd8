#pragma once

#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace freeconv {

using cplx = std::complex<double>;

struct ComponentSpec {
    double a = 0.0;
    double b = 0.0;
    double t_minus = 0.0;
    double t_plus = 0.0;
    std::vector<double> h{1.0}; // ascending monomial coefficients in x
    double weight = 1.0;
};

struct AtomSpec {
    double x = 0.0;
    double mass = 0.0;
};

struct MeasureSpec {
    std::vector<ComponentSpec> components;
    std::vector<AtomSpec> atoms;
    bool centered = false;
};

enum class MeasurePath { Pair, Semigroup };

struct BuildOptions {
    MeasurePath path = MeasurePath::Semigroup;
    bool allow_atomic = false;
};

/// Closed interval [left, right]; degenerate for outlying atoms.
struct SupportPiece {
    double left;
    double right;
    bool is_atom;
};

struct Atom {
    double location;
    double mass;
};

/// One absolutely continuous piece  c (x-a)^{t-} (b-x)^{t+} h(x)  on [a, b].
class JacobiComponent {
public:
    static constexpr int kPanelOrder = 20;

    explicit JacobiComponent(const ComponentSpec& spec);

    double left() const { return a_; }
    double right() const { return b_; }
    double length() const { return b_ - a_; }
    double left_exponent() const { return tl_; }
    double right_exponent() const { return tr_; }
    double weight() const { return weight_; }
    double normalization() const { return c_; }
    const std::vector<double>& modulation() const { return h_; }

    double modulation_at(double x) const;
    double density(double x) const;

    /// Feeds (x, dmu, x - Re pole) quadrature triples for the restriction of
    /// the component to [lo, hi] to `acc`. The offset is formed from the panel
    /// geometry so that it keeps full relative precision next to the pole.
    /// Panels are bisected until each is shorter than its distance to every
    /// singular point not absorbed by a Jacobi weight (the kernel pole `pole`,
    /// and a or b when not a panel end).
    template <class Acc>
    void integrate(double lo, double hi, const std::optional<cplx>& pole, Acc& acc) const;

    template <class Acc>
    void integrate(const std::optional<cplx>& pole, Acc& acc) const
    {
        integrate(a_, b_, pole, acc);
    }

private:
    template <class Acc>
    void panel(double u, double v, const std::optional<cplx>& pole, Acc& acc, int depth) const;
    template <class Acc>
    void apply_rule(double u, double v, double anchor, Acc& acc) const;

    double a_, b_, tl_, tr_, weight_;
    std::vector<double> h_;
    double c_ = 1.0;
    JacobiRule rule_both_, rule_left_, rule_right_, rule_plain_;
    std::vector<double> whole_x_, whole_w_;
};

class MultiCutMeasure {
public:
    static MultiCutMeasure build(const MeasureSpec& spec, BuildOptions options = {});

    const std::vector<JacobiComponent>& components() const { return components_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const MeasureSpec& spec() const { return spec_; }
    std::vector<double> normalization_constants() const;

    std::size_t n_ac() const { return components_.size(); }
    std::size_t n_pp() const { return atoms_.size(); }
    std::size_t n_pp_out() const;

    bool is_outlying(const Atom& atom) const;
    /// Components and outlying atoms, ordered left to right.
    std::vector<SupportPiece> support_pieces() const;
    double hull_left() const;
    double hull_right() const;
    bool in_support(double x) const;

    double moment(int k) const;
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double density(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;

    /// Feeds every (x, dmu, x - Re pole) triple (component nodes and atoms).
    template <class Acc>
    void visit(const std::optional<cplx>& pole, Acc& acc) const
    {
        for (const auto& comp : components_) {
            comp.integrate(pole, acc);
        }
        const double anchor = pole ? pole->real() : 0.0;
        for (const auto& atom : atoms_) {
            acc(atom.location, atom.mass, atom.location - anchor);
        }
    }

private:
    MeasureSpec spec_;
    std::vector<JacobiComponent> components_;
    std::vector<Atom> atoms_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

// ---------------------------------------------------------------------------

namespace detail {

inline double distance_to_segment(cplx z, double u, double v)
{
    const double x = std::clamp(z.real(), u, v);
    return std::abs(z - cplx(x, 0.0));
}

} // namespace detail

template <class Acc>
void JacobiComponent::integrate(double lo, double hi, const std::optional<cplx>& pole, Acc& acc) const
{
    lo = std::max(lo, a_);
    hi = std::min(hi, b_);
    if (!(hi > lo)) {
        return;
    }
    if (lo == a_ && hi == b_) {
        const double d = pole ? detail::distance_to_segment(*pole, a_, b_)
                              : std::numeric_limits<double>::infinity();
        if (d >= b_ - a_) {
            const double anchor = pole ? pole->real() : 0.0;
            for (std::size_t i = 0; i < whole_x_.size(); ++i) {
                acc(whole_x_[i], whole_w_[i], whole_x_[i] - anchor);
            }
            return;
        }
    }
    if (pole) {
        const double p = pole->real();
        const double gap = std::abs(pole->imag());
        if (p > lo && p < hi && std::min(p - lo, hi - p) > gap) {
            panel(lo, p, pole, acc, 0);
            panel(p, hi, pole, acc, 0);
            return;
        }
    }
    panel(lo, hi, pole, acc, 0);
}

template <class Acc>
void JacobiComponent::panel(double u, double v, const std::optional<cplx>& pole, Acc& acc, int depth) const
{
    constexpr int kMaxDepth = 90;
    double reach = std::numeric_limits<double>::infinity();
    if (pole) {
        reach = detail::distance_to_segment(*pole, u, v);
    }
    if (u > a_) {
        reach = std::min(reach, u - a_);
    }
    if (v < b_) {
        reach = std::min(reach, b_ - v);
    }
    if (v - u <= reach || depth >= kMaxDepth) {
        apply_rule(u, v, pole ? pole->real() : 0.0, acc);
        return;
    }
    const double mid = 0.5 * (u + v);
    panel(u, mid, pole, acc, depth + 1);
    panel(mid, v, pole, acc, depth + 1);
}

template <class Acc>
void JacobiComponent::apply_rule(double u, double v, double anchor, Acc& acc) const
{
    const bool at_a = (u == a_);
    const bool at_b = (v == b_);
    const double half = 0.5 * (v - u);
    const double mid = 0.5 * (u + v);
    const JacobiRule* rule;
    double scale;
    if (at_a && at_b) {
        rule = &rule_both_;
        scale = std::pow(half, 1.0 + tl_ + tr_);
    } else if (at_a) {
        rule = &rule_left_;
        scale = std::pow(half, 1.0 + tl_);
    } else if (at_b) {
        rule = &rule_right_;
        scale = std::pow(half, 1.0 + tr_);
    } else {
        rule = &rule_plain_;
        scale = half;
    }
    // Offsets measured from the nearer panel end; u - anchor and v - anchor
    // are exact when the anchor is close to them.
    const double du = u - anchor;
    const double dv = v - anchor;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
        const double s = rule->nodes[i];
        const double x = mid + half * s;
        const double dx = s <= 0.0 ? du + half * (1.0 + s) : dv - half * (1.0 - s);
        double w = c_ * scale * rule->weights[i] * modulation_at(x);
        if (!at_a) {
            w *= std::pow(x - a_, tl_);
        }
        if (!at_b) {
            w *= std::pow(b_ - x, tr_);
        }
        acc(x, w, dx);
    }
}

} // namespace freeconv
