#pragma once

#include "measure.hpp"

#include <complex>
#include <vector>

namespace freeconv {

struct PurePoint {
    double location;
    double mass;
};

/// Data of the measure mu-hat in  F(w) - w = shift + int dmu_hat(x) / (x - w).
struct NevanlinnaData {
    double total_mass = 0.0;
    std::vector<PurePoint> pure_points;
    double shift = 0.0;
};

/// m(z) together with q(z) = int x/(x-z) dmu = 1 + z m(z).
struct CauchySums {
    cplx m;
    cplx q;
};

CauchySums cauchy_sums(const MultiCutMeasure& mu, cplx z);

cplx cauchy_m(const MultiCutMeasure& mu, cplx z);
cplx m_prime(const MultiCutMeasure& mu, cplx z);
cplx F(const MultiCutMeasure& mu, cplx z);
cplx F_prime(const MultiCutMeasure& mu, cplx z);
/// F(w) - w, evaluated as -q/m so that it stays accurate for large |w|.
cplx F_shift(const MultiCutMeasure& mu, cplx w);

double I_mu(const MultiCutMeasure& mu, cplx w);
/// I of mu-hat; +infinity when |m(w)| < 1e-13.
double I_mu_hat(const MultiCutMeasure& mu, cplx w);

NevanlinnaData hat_data(const MultiCutMeasure& mu);

/// Anything that supplies m and F(w) - w on the upper half-plane.
struct TransformValue {
    cplx m;
    cplx f_shift;
};

class TransformSource {
public:
    virtual ~TransformSource() = default;
    virtual TransformValue eval(cplx w) const = 0;
};

class MeasureSource final : public TransformSource {
public:
    explicit MeasureSource(const MultiCutMeasure& mu) : mu_(mu) {}
    TransformValue eval(cplx w) const override;
    const MultiCutMeasure& measure() const { return mu_; }

private:
    const MultiCutMeasure& mu_;
};

} // namespace freeconv
