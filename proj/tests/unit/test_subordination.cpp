#include "instances.hpp"
#include "oracles.hpp"
#include "subordination.hpp"

#include <doctest.h>

using namespace freeconv;
using namespace fctest;

TEST_CASE("semicircle pair: omega = z/2 + ... reproduces the variance-2 semicircle")
{
    const auto sc = pair_measure(semicircle_spec());
    for (cplx z : {cplx(0.0, 1.0), cplx(1.0, 0.1), cplx(-2.5, 1e-3), cplx(3.5, 1e-6)}) {
        const auto p = solve_pair(sc, sc, z);
        CHECK(p.residual < kPairTolerance);
        const cplx m = cauchy_m(sc, p.omega_beta);
        CHECK(std::abs(m - semicircle_m(z, 2.0)) < 1e-9);
        // symmetric inputs give equal subordination functions
        CHECK(std::abs(p.omega_alpha - p.omega_beta) < 1e-8);
    }
}

TEST_CASE("semigroup of the semicircle is the semicircle of variance t")
{
    const auto sc = pair_measure(semicircle_spec());
    for (double t : {1.5, 2.0, 4.0}) {
        for (cplx z : {cplx(0.0, 1.0), cplx(1.0, 0.01), cplx(-3.0, 1e-5)}) {
            const auto p = solve_semigroup(sc, t, z);
            CHECK(p.residual < kSemigroupTolerance);
            CHECK(std::abs(cauchy_m(sc, p.omega_t) - semicircle_m(z, t)) < 1e-10);
            CHECK(p.omega_t.imag() >= z.imag() * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("residual contracts and symmetry on random pairs")
{
    std::mt19937_64 rng(31);
    for (int k = 0; k < 8; ++k) {
        const MeasureSpec sa = random_pair_spec(rng, pick(rng, 1, 3));
        const auto alpha = pair_measure(sa);
        const auto beta = pair_measure(random_pair_spec(rng, pick(rng, 1, 2)));
        const cplx z(uniform(rng, -3.0, 3.0), uniform(rng, 1e-3, 1.0));
        const auto p = solve_pair(alpha, beta, z);
        CHECK(p.residual < kPairTolerance);
        CHECK(pair_residual(MeasureSource(alpha), MeasureSource(beta), z, p.omega_alpha, p.omega_beta) <
              kPairTolerance);
        CHECK(p.omega_alpha.imag() >= z.imag() * (1.0 - 1e-9));
        CHECK(p.omega_beta.imag() >= z.imag() * (1.0 - 1e-9));
        // omega_alpha + omega_beta - z = F_alpha(omega_beta)
        CHECK(std::abs(p.omega_alpha + p.omega_beta - z - F(alpha, p.omega_beta)) <
              1e-9 * std::max(1.0, std::abs(p.omega_alpha)));

        // reflected measures: omega(-conj z) = -conj omega(z)
        MeasureSpec ra = sa;
        for (auto& c : ra.components) {
            const double a = c.a;
            c.a = -c.b;
            c.b = -a;
            std::swap(c.t_minus, c.t_plus);
            for (std::size_t i = 1; i < c.h.size(); i += 2) {
                c.h[i] = -c.h[i];
            }
        }
        const auto alpha_r = pair_measure(ra);
        const auto q = solve_semigroup(alpha_r, 2.0, -std::conj(z));
        const auto p2 = solve_semigroup(alpha, 2.0, z);
        CHECK(std::abs(q.omega_t + std::conj(p2.omega_t)) < 1e-9 * std::max(1.0, std::abs(p2.omega_t)));
    }
}

TEST_CASE("semigroup property through SemigroupSource: (mu^t1)^t2 = mu^(t1 t2)")
{
    std::mt19937_64 rng(37);
    for (int k = 0; k < 3; ++k) {
        const auto mu = semigroup_measure(random_semigroup_spec(rng));
        const MeasureSource base(mu);
        const SemigroupSource mu2(base, 2.0);
        const cplx z(uniform(rng, mu.hull_left(), mu.hull_right()), 0.5);
        const auto outer = solve_semigroup(mu2, 1.5, z);
        const cplx composed = mu2.eval(outer.omega_t).m;
        const auto direct = solve_semigroup(mu, 3.0, z);
        CHECK(std::abs(composed - cauchy_m(mu, direct.omega_t)) < 1e-8);
    }
}

TEST_CASE("associativity through PairSource: (a + b) + c = a + (b + c)")
{
    std::mt19937_64 rng(41);
    const auto a = pair_measure(random_pair_spec(rng, 2));
    const auto b = pair_measure(random_pair_spec(rng, 1));
    const auto c = pair_measure(random_pair_spec(rng, 2));
    const MeasureSource sa(a), sb(b), sc(c);
    const PairSource ab(sa, sb), bc(sb, sc);
    const cplx z(0.3, 0.4);
    const auto left = solve_pair(ab, sc, z);
    const auto right = solve_pair(sa, bc, z);
    const cplx m_left = ab.eval(left.omega_beta).m;
    const cplx m_right = sa.eval(right.omega_beta).m;
    CHECK(std::abs(m_left - m_right) < 1e-8);
    // a + b + c also equals the semigroup when all three coincide
    const MeasureSource sa2(a);
    const PairSource aa(sa, sa2);
    const auto three = solve_pair(aa, sa, z);
    const auto power = solve_semigroup(a, 3.0, z);
    CHECK(std::abs(aa.eval(three.omega_beta).m - cauchy_m(a, power.omega_t)) < 1e-8);
}

TEST_CASE("eta ladder and Richardson weights")
{
    const auto levels = eta_levels({});
    REQUIRE(levels.size() == 25);
    CHECK(levels.front() == 1e-2);
    CHECK(levels[1] == 0.5e-2);
    // exact on quadratics in h
    auto f = [](double h) { return cplx(1.0 + 2.0 * h + 3.0 * h * h, 0.0); };
    CHECK(std::abs(richardson3(f(1.0), f(2.0), f(4.0)) - 1.0) < 1e-12);
    CHECK(std::abs(richardson2(cplx(1.0 + 2.0, 0), cplx(1.0 + 4.0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("boundary values: semicircle pair and arcsine semigroup")
{
    const auto sc = pair_measure(semicircle_spec());
    for (double E : {0.0, 1.0, 2.5, 2.9}) {
        const auto bv = pair_boundary(sc, sc, E, {}, {});
        REQUIRE(bv.ok);
        CHECK(bv.density == doctest::Approx(semicircle_density(E, 2.0)).epsilon(1e-8));
        CHECK(bv.levels_completed == 25);
    }
    const auto b = semigroup_measure(bernoulli_spec());
    const auto bv = semigroup_boundary(b, 2.0, 0.0);
    REQUIRE(bv.ok);
    CHECK(bv.density == doctest::Approx(arcsine_density(0.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("divergence near a gap zero is reported with its location")
{
    MeasureSpec sa;
    sa.components = {{-3.0, -1.0, 0.5, 0.5, {1.0}, 0.5}, {1.0, 3.0, 0.5, 0.5, {1.0}, 0.5}};
    const auto alpha = pair_measure(sa);
    const auto beta = pair_measure(semicircle_spec(0.2));
    // At E = 0 omega_beta sits at the gap zero of m_alpha, where F_alpha has a pole.
    const auto bv = pair_boundary(alpha, beta, 0.0, {0.0}, {});
    CHECK(bv.ok);
    CHECK(std::abs(bv.omega_beta_last) < 1e-6);
}
