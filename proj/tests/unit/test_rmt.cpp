#include "instances.hpp"
#include "oracles.hpp"
#include "rmt.hpp"

#include <doctest.h>

using namespace freeconv;
using namespace fctest;

TEST_CASE("quantile spectra")
{
    const auto b = semigroup_measure(bernoulli_spec());
    CHECK(sample_spectrum(b, 2) == std::vector<double>{-1.0, 1.0});
    const auto sc = pair_measure(semicircle_spec());
    const auto s4 = sample_spectrum(sc, 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(s4[i] == doctest::Approx(-s4[3 - i]).epsilon(1e-12));
    }
    const auto s = sample_spectrum(sc, 1000);
    double var = 0.0;
    for (double x : s) {
        var += x * x / 1000.0;
    }
    CHECK(std::abs(var - 1.0) < 2e-3);
}

TEST_CASE("Haar matrices have orthonormal columns")
{
    auto rng = trial_rng(1, 0);
    const auto U = haar_unitary(60, rng);
    const double eu = (U.adjoint() * U - Eigen::MatrixXcd::Identity(60, 60)).cwiseAbs().maxCoeff();
    CHECK(eu < 1e-12);
    const auto O = haar_orthogonal(60, rng);
    const double eo = (O.transpose() * O - Eigen::MatrixXd::Identity(60, 60)).cwiseAbs().maxCoeff();
    CHECK(eo < 1e-12);
}

TEST_CASE("trace conservation and trivial conjugations")
{
    const auto sc = pair_measure(semicircle_spec());
    const auto a = sample_spectrum(sc, 50);
    auto rng = trial_rng(9, 2);
    const std::vector<double> zero(50, 0.0);
    const auto same = haar_conjugate_spectrum(a, zero, Ensemble::Unitary, rng);
    for (int i = 0; i < 50; ++i) {
        CHECK(std::abs(same[i] - a[i]) < 1e-12);
    }
    const std::vector<double> c(50, 0.7);
    const auto shifted = haar_conjugate_spectrum(c, a, Ensemble::Orthogonal, rng);
    for (int i = 0; i < 50; ++i) {
        CHECK(std::abs(shifted[i] - (a[i] + 0.7)) < 1e-12);
    }
    const auto mixed = haar_conjugate_spectrum(a, a, Ensemble::Unitary, rng);
    double tr = 0.0, expect = 0.0;
    for (int i = 0; i < 50; ++i) {
        tr += mixed[i];
        expect += 2.0 * a[i];
    }
    CHECK(std::abs(tr - expect) < 1e-8 * 50);
}

TEST_CASE("seeded trials are reproducible and distinct per trial")
{
    auto r1 = trial_rng(5, 3);
    auto r2 = trial_rng(5, 3);
    auto r3 = trial_rng(5, 4);
    const auto x1 = r1(), x2 = r2(), x3 = r3();
    CHECK(x1 == x2);
    CHECK(x1 != x3);
}

TEST_CASE("KS distance and cluster counting")
{
    const auto sc = pair_measure(semicircle_spec());
    const auto problem = SpectralProblem::pair(sc, sc);
    GridOptions opt;
    opt.n_points = 401;
    const DensityGrid dg = density_grid(problem, opt);
    // exact quantiles of the limit law are at KS distance about 1/(2N)
    std::vector<double> q;
    for (int i = 0; i < 400; ++i) {
        const double p = (i + 0.5) / 400.0;
        double lo = -2.9, hi = 2.9;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (semicircle_cdf(mid, 2.0) < p ? lo : hi) = mid;
        }
        q.push_back(0.5 * (lo + hi));
    }
    CHECK(ks_distance(q, dg) < 2.5e-3);
    CHECK(count_clusters({0.0, 0.1, 0.2, 0.3, 10.0, 10.1, 10.2}) == 2);
    CHECK(count_clusters({0.0, 0.1, 0.2, 0.3}) == 1);
}

TEST_CASE("validation report: smoke run and determinism")
{
    const auto sc = pair_measure(semicircle_spec());
    const auto problem = SpectralProblem::pair(sc, sc);
    GridOptions opt;
    opt.n_points = 201;
    const DensityGrid dg = density_grid(problem, opt);
    TrialConfig tiny;
    tiny.matrix_size = 2;
    tiny.trials = 1;
    const auto smoke = validate(sc, sc, tiny, dg);
    CHECK(smoke.matrix_size == 2);
    TrialConfig cfg;
    cfg.matrix_size = 200;
    cfg.trials = 3;
    cfg.seed = 77;
    const auto a = validate(sc, sc, cfg, dg);
    cfg.threads = 2;
    const auto b = validate(sc, sc, cfg, dg);
    CHECK(a.ks_distance == b.ks_distance);
    CHECK(a.max_trace_error == b.max_trace_error);
    CHECK(a.max_trace_error < 1e-8 * 200);
    CHECK(a.ks_distance < 0.1);
}
