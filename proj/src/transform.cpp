#include "transform.hpp"

#include "analysis.hpp"
#include "errors.hpp"

#include <limits>

namespace freeconv {

namespace {

constexpr double kSupportClearance = 1e-12;
constexpr double kZeroFlag = 1e-13;

void require_off_support(const MultiCutMeasure& mu, cplx z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidInput("evaluation point must be finite");
    }
    if (z.imag() != 0.0) {
        return;
    }
    const double x = z.real();
    for (const auto& c : mu.components()) {
        if (x > c.left() - kSupportClearance && x < c.right() + kSupportClearance) {
            throw DomainError("real evaluation point lies on the support");
        }
    }
    for (const auto& a : mu.atoms()) {
        if (x == a.location) {
            throw DomainError("real evaluation point lies on an atom");
        }
    }
}

// Kernel differences x - z are formed from the pole-relative offset dx.
struct SumAcc {
    cplx z;
    cplx m{0.0, 0.0};
    cplx q{0.0, 0.0};
    void operator()(double x, double w, double dx)
    {
        const cplx k = 1.0 / cplx(dx, -z.imag());
        m += w * k;
        q += w * x * k;
    }
};

struct SquareAcc {
    cplx z;
    cplx sum{0.0, 0.0};
    void operator()(double, double w, double dx)
    {
        const cplx k = 1.0 / cplx(dx, -z.imag());
        sum += w * k * k;
    }
};

struct AbsSquareAcc {
    cplx z;
    double sum = 0.0;
    void operator()(double, double w, double dx) { sum += w / std::norm(cplx(dx, -z.imag())); }
};

// int |q - x m|^2 / |x - z|^2 dmu  =  int |1/(x-z) - m|^2 dmu
struct SpreadAcc {
    cplx z, m, q;
    double sum = 0.0;
    void operator()(double x, double w, double dx)
    {
        sum += w * std::norm(q - x * m) / std::norm(cplx(dx, -z.imag()));
    }
};

} // namespace

CauchySums cauchy_sums(const MultiCutMeasure& mu, cplx z)
{
    require_off_support(mu, z);
    SumAcc acc{z};
    mu.visit(z, acc);
    return {acc.m, acc.q};
}

cplx cauchy_m(const MultiCutMeasure& mu, cplx z)
{
    return cauchy_sums(mu, z).m;
}

cplx m_prime(const MultiCutMeasure& mu, cplx z)
{
    require_off_support(mu, z);
    SquareAcc acc{z};
    mu.visit(z, acc);
    return acc.sum;
}

cplx F(const MultiCutMeasure& mu, cplx z)
{
    const cplx m = cauchy_m(mu, z);
    if (std::abs(m) == 0.0) {
        throw DomainError("F is undefined at a zero of m");
    }
    return -1.0 / m;
}

cplx F_prime(const MultiCutMeasure& mu, cplx z)
{
    const cplx m = cauchy_m(mu, z);
    if (std::abs(m) == 0.0) {
        throw DomainError("F' is undefined at a zero of m");
    }
    return m_prime(mu, z) / (m * m);
}

cplx F_shift(const MultiCutMeasure& mu, cplx w)
{
    const CauchySums s = cauchy_sums(mu, w);
    if (std::abs(s.m) == 0.0) {
        throw DomainError("F is undefined at a zero of m");
    }
    return -s.q / s.m;
}

double I_mu(const MultiCutMeasure& mu, cplx w)
{
    require_off_support(mu, w);
    AbsSquareAcc acc{w};
    mu.visit(w, acc);
    return acc.sum;
}

double I_mu_hat(const MultiCutMeasure& mu, cplx w)
{
    const CauchySums s = cauchy_sums(mu, w);
    if (std::abs(s.m) < kZeroFlag) {
        return std::numeric_limits<double>::infinity();
    }
    SpreadAcc acc{w, s.m, s.q};
    mu.visit(w, acc);
    return acc.sum / std::norm(s.m);
}

NevanlinnaData hat_data(const MultiCutMeasure& mu)
{
    NevanlinnaData out;
    out.total_mass = mu.variance();
    out.shift = -mu.mean();
    for (double e : gap_zeros(mu)) {
        out.pure_points.push_back({e, 1.0 / m_prime(mu, e).real()});
    }
    return out;
}

TransformValue MeasureSource::eval(cplx w) const
{
    const CauchySums s = cauchy_sums(mu_, w);
    return {s.m, -s.q / s.m};
}

} // namespace freeconv
