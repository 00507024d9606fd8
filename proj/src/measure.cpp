#include "measure.hpp"

#include "errors.hpp"

#include <numbers>
#include <sstream>

namespace freeconv {

namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kEndpointAtomTolerance = 1e-9;
constexpr double kCenterTolerance = 1e-10;

std::string describe(const char* what, std::size_t index)
{
    std::ostringstream os;
    os << what << " " << index;
    return os.str();
}

struct MomentAcc {
    int k;
    double sum = 0.0;
    void operator()(double x, double w, double) { sum += w * std::pow(x, k); }
};

struct MassAcc {
    double sum = 0.0;
    void operator()(double, double w, double) { sum += w; }
};

} // namespace

JacobiComponent::JacobiComponent(const ComponentSpec& spec)
    : a_(spec.a), b_(spec.b), tl_(spec.t_minus), tr_(spec.t_plus), weight_(spec.weight), h_(spec.h)
{
    if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ < b_)) {
        throw InvalidInput("component endpoints must be finite with a < b");
    }
    if (!(tl_ > -1.0) || !(tr_ > -1.0) || !std::isfinite(tl_) || !std::isfinite(tr_)) {
        throw InvalidInput("component exponents must exceed -1");
    }
    if (!(weight_ > 0.0) || !std::isfinite(weight_)) {
        throw InvalidInput("component weight must be positive");
    }
    if (h_.empty()) {
        h_ = {1.0};
    }
    for (double c : h_) {
        if (!std::isfinite(c)) {
            throw InvalidInput("modulation coefficients must be finite");
        }
    }
    constexpr int kProbe = 64;
    for (int i = 0; i <= kProbe; ++i) {
        const double s = std::cos(std::numbers::pi * i / kProbe);
        const double x = 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * s;
        if (!(modulation_at(x) > 0.0)) {
            throw InvalidInput("modulation h must be strictly positive on [a, b]");
        }
    }

    rule_both_ = gauss_jacobi(kPanelOrder, tr_, tl_);
    rule_left_ = gauss_jacobi(kPanelOrder, 0.0, tl_);
    rule_right_ = gauss_jacobi(kPanelOrder, tr_, 0.0);
    rule_plain_ = gauss_jacobi(kPanelOrder, 0.0, 0.0);

    const double len = b_ - a_;
    double raw;
    if (h_.size() == 1) {
        raw = h_[0] * std::pow(len, 1.0 + tl_ + tr_) * beta_function(1.0 + tl_, 1.0 + tr_);
    } else {
        const double half = 0.5 * len;
        const double scale = std::pow(half, 1.0 + tl_ + tr_);
        raw = 0.0;
        for (std::size_t i = 0; i < rule_both_.nodes.size(); ++i) {
            const double x = 0.5 * (a_ + b_) + half * rule_both_.nodes[i];
            raw += scale * rule_both_.weights[i] * modulation_at(x);
        }
    }
    if (!(raw > 0.0) || !std::isfinite(raw)) {
        throw InvalidInput("component is not normalizable");
    }
    c_ = weight_ / raw;

    whole_x_.clear();
    whole_w_.clear();
    auto collect = [this](double x, double w, double) {
        whole_x_.push_back(x);
        whole_w_.push_back(w);
    };
    apply_rule(a_, b_, 0.0, collect);
}

double JacobiComponent::modulation_at(double x) const
{
    double v = 0.0;
    for (auto it = h_.rbegin(); it != h_.rend(); ++it) {
        v = v * x + *it;
    }
    return v;
}

double JacobiComponent::density(double x) const
{
    if (x < a_ || x > b_) {
        return 0.0;
    }
    return c_ * std::pow(x - a_, tl_) * std::pow(b_ - x, tr_) * modulation_at(x);
}

MultiCutMeasure MultiCutMeasure::build(const MeasureSpec& spec, BuildOptions options)
{
    MultiCutMeasure mu;
    mu.spec_ = spec;

    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        try {
            mu.components_.emplace_back(spec.components[i]);
        } catch (const InvalidInput& e) {
            throw InvalidInput(describe("component", i) + ": " + e.what());
        }
    }
    std::sort(mu.components_.begin(), mu.components_.end(),
              [](const JacobiComponent& l, const JacobiComponent& r) { return l.left() < r.left(); });
    for (std::size_t i = 1; i < mu.components_.size(); ++i) {
        if (!(mu.components_[i - 1].right() < mu.components_[i].left())) {
            throw InvalidInput("component supports must be pairwise disjoint");
        }
    }

    for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        const auto& at = spec.atoms[i];
        if (!std::isfinite(at.x) || !(at.mass > 0.0) || !(at.mass <= 1.0)) {
            throw InvalidInput(describe("atom", i) + ": needs finite location and mass in (0, 1]");
        }
        for (const auto& comp : mu.components_) {
            if (std::abs(at.x - comp.left()) < kEndpointAtomTolerance ||
                std::abs(at.x - comp.right()) < kEndpointAtomTolerance) {
                throw InvalidInput(describe("atom", i) + ": coincides with a component endpoint");
            }
        }
        mu.atoms_.push_back({at.x, at.mass});
    }
    std::sort(mu.atoms_.begin(), mu.atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.location < r.location; });
    for (std::size_t i = 1; i < mu.atoms_.size(); ++i) {
        if (mu.atoms_[i - 1].location == mu.atoms_[i].location) {
            throw InvalidInput("atom locations must be distinct");
        }
    }

    if (mu.components_.empty() && mu.atoms_.empty()) {
        throw InvalidInput("measure has no mass");
    }
    if (options.path == MeasurePath::Pair) {
        if (!mu.atoms_.empty()) {
            throw InvalidInput("pair convolution accepts absolutely continuous inputs only");
        }
    } else if (mu.components_.empty()) {
        if (!options.allow_atomic) {
            throw InvalidInput("purely atomic measure needs allow_atomic");
        }
        if (mu.atoms_.size() < 2) {
            throw InvalidInput("a single point mass is not admissible");
        }
    }

    double total = 0.0;
    for (const auto& c : mu.components_) {
        total += c.weight();
    }
    for (const auto& a : mu.atoms_) {
        total += a.mass;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "total mass " << total << " differs from 1";
        throw InvalidInput(os.str());
    }

    mu.mean_ = mu.moment(1);
    mu.variance_ = mu.moment(2) - mu.mean_ * mu.mean_;
    if (!(mu.variance_ > 0.0)) {
        throw InvalidInput("measure has zero variance");
    }
    if ((spec.centered || options.path == MeasurePath::Pair) && std::abs(mu.mean_) > kCenterTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "measure is not centered (mean " << mu.mean_ << ")";
        throw InvalidInput(os.str());
    }
    return mu;
}

std::vector<double> MultiCutMeasure::normalization_constants() const
{
    std::vector<double> out;
    for (const auto& c : components_) {
        out.push_back(c.normalization());
    }
    return out;
}

bool MultiCutMeasure::is_outlying(const Atom& atom) const
{
    for (const auto& c : components_) {
        if (atom.location >= c.left() && atom.location <= c.right()) {
            return false;
        }
    }
    return true;
}

std::size_t MultiCutMeasure::n_pp_out() const
{
    std::size_t n = 0;
    for (const auto& a : atoms_) {
        n += is_outlying(a) ? 1 : 0;
    }
    return n;
}

std::vector<SupportPiece> MultiCutMeasure::support_pieces() const
{
    std::vector<SupportPiece> out;
    for (const auto& c : components_) {
        out.push_back({c.left(), c.right(), false});
    }
    for (const auto& a : atoms_) {
        if (is_outlying(a)) {
            out.push_back({a.location, a.location, true});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SupportPiece& l, const SupportPiece& r) { return l.left < r.left; });
    return out;
}

double MultiCutMeasure::hull_left() const
{
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
        lo = std::min(lo, c.left());
    }
    for (const auto& a : atoms_) {
        lo = std::min(lo, a.location);
    }
    return lo;
}

double MultiCutMeasure::hull_right() const
{
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : components_) {
        hi = std::max(hi, c.right());
    }
    for (const auto& a : atoms_) {
        hi = std::max(hi, a.location);
    }
    return hi;
}

bool MultiCutMeasure::in_support(double x) const
{
    for (const auto& c : components_) {
        if (x >= c.left() && x <= c.right()) {
            return true;
        }
    }
    for (const auto& a : atoms_) {
        if (x == a.location) {
            return true;
        }
    }
    return false;
}

double MultiCutMeasure::moment(int k) const
{
    if (k < 0) {
        throw InvalidInput("moment order must be non-negative");
    }
    MomentAcc acc{k};
    visit(std::nullopt, acc);
    return acc.sum;
}

double MultiCutMeasure::density(double x) const
{
    double d = 0.0;
    for (const auto& c : components_) {
        d += c.density(x);
    }
    return d;
}

double MultiCutMeasure::cdf(double x) const
{
    double total = 0.0;
    for (const auto& c : components_) {
        if (x >= c.right()) {
            total += c.weight();
        } else if (x > c.left()) {
            MassAcc acc;
            c.integrate(c.left(), x, std::nullopt, acc);
            total += acc.sum;
        }
    }
    for (const auto& a : atoms_) {
        if (a.location <= x) {
            total += a.mass;
        }
    }
    return std::min(total, 1.0);
}

double MultiCutMeasure::quantile(double p) const
{
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("quantile level must lie in (0, 1)");
    }
    // Invariant: cdf(lo) < p <= cdf(hi).
    double lo = hull_left();
    double hi = hull_right();
    if (cdf(lo) >= p) {
        return lo;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) {
            break;
        }
        if (cdf(mid) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    for (const auto& a : atoms_) {
        if (a.location > lo && a.location <= hi) {
            return a.location;
        }
    }
    return hi;
}

} // namespace freeconv
