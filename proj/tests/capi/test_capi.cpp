// Exercises the shared library through its C header only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <freeconv/freeconv.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const char* kSemicircle =
    R"({"components":[{"a":-2,"b":2,"t_minus":0.5,"t_plus":0.5,"weight":1.0}],"atoms":[]})";
const char* kBernoulli = R"({"components":[],"atoms":[{"x":-1,"mass":0.5},{"x":1,"mass":0.5}]})";

fc_measure* make(const char* json, fc_path path, int allow_atomic = 0)
{
    fc_measure* mu = nullptr;
    REQUIRE(fc_measure_from_json(json, path, allow_atomic, &mu) == FC_OK);
    REQUIRE(mu != nullptr);
    return mu;
}

std::string take(char* s)
{
    std::string out = s;
    fc_string_free(s);
    return out;
}

} // namespace

TEST_CASE("version and error reporting")
{
    CHECK(std::string(fc_version()).size() > 0);
    fc_measure* mu = nullptr;
    CHECK(fc_measure_from_json("{not json", FC_PATH_PAIR, 0, &mu) == FC_INVALID_INPUT);
    CHECK(mu == nullptr);
    CHECK(std::string(fc_last_error()).find("JSON") != std::string::npos);
    CHECK(fc_measure_from_json(kBernoulli, FC_PATH_SEMIGROUP, 0, &mu) == FC_INVALID_INPUT);
    CHECK(fc_measure_load("/no/such/file.json", FC_PATH_PAIR, 0, &mu) == FC_INVALID_INPUT);
    CHECK(std::string(fc_last_error()).find("/no/such/file.json") != std::string::npos);
    CHECK(fc_measure_moment(nullptr, 0, nullptr) == FC_INVALID_INPUT);
    double q = 0.0;
    fc_measure* sc = make(kSemicircle, FC_PATH_PAIR);
    CHECK(fc_measure_quantile(sc, 1.5, &q) == FC_INVALID_INPUT);
    CHECK(fc_measure_quantile(sc, 0.5, &q) == FC_OK);
    CHECK(std::string(fc_last_error()).empty());
    fc_measure_free(sc);
    fc_measure_free(nullptr);
}

TEST_CASE("measure queries and transforms")
{
    fc_measure* sc = make(kSemicircle, FC_PATH_PAIR);
    double m2 = 0.0;
    REQUIRE(fc_measure_moment(sc, 2, &m2) == FC_OK);
    CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
    int n_ac = -1, n_pp = -1, n_out = -1;
    REQUIRE(fc_measure_counts(sc, &n_ac, &n_pp, &n_out) == FC_OK);
    CHECK(n_ac == 1);
    CHECK(n_pp == 0);
    fc_complex m{};
    REQUIRE(fc_cauchy(sc, {3.0, 0.0}, &m) == FC_OK);
    CHECK(m.re == doctest::Approx((std::sqrt(5.0) - 3.0) / 2.0).epsilon(1e-14));
    CHECK(fc_cauchy(sc, {0.0, 0.0}, &m) == FC_DOMAIN_ERROR);
    double edges[4];
    size_t count = 0;
    REQUIRE(fc_semigroup_edges(sc, 2.0, edges, 4, &count) == FC_OK);
    REQUIRE(count == 2);
    CHECK(edges[1] == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    fc_complex wa{}, wb{};
    double res = 1.0;
    REQUIRE(fc_pair_solve(sc, sc, {0.5, 0.5}, &wa, &wb, &res) == FC_OK);
    CHECK(res < 1e-10);
    fc_complex w{};
    REQUIRE(fc_semigroup_solve(sc, 2.0, {0.5, 0.5}, &w, &res) == FC_OK);
    CHECK(res < 1e-12);

    char* json = nullptr;
    REQUIRE(fc_measure_to_json(sc, &json) == FC_OK);
    const std::string text = take(json);
    fc_measure* again = make(text.c_str(), FC_PATH_PAIR);
    char* json2 = nullptr;
    REQUIRE(fc_measure_to_json(again, &json2) == FC_OK);
    CHECK(take(json2) == text);
    fc_measure_free(again);
    fc_measure_free(sc);
}

TEST_CASE("gap zeros through the C API")
{
    const char* two =
        R"({"components":[{"a":-3,"b":-1,"t_minus":0.5,"t_plus":0.5,"weight":0.5},
                          {"a":1,"b":3,"t_minus":0.5,"t_plus":0.5,"weight":0.5}],"atoms":[]})";
    fc_measure* mu = make(two, FC_PATH_PAIR);
    size_t count = 0;
    REQUIRE(fc_gap_zeros(mu, nullptr, 0, &count) == FC_OK);
    CHECK(count == 1);
    double z = 1.0;
    REQUIRE(fc_gap_zeros(mu, &z, 1, &count) == FC_OK);
    CHECK(std::abs(z) < 1e-12);
    fc_measure_free(mu);
}

TEST_CASE("arcsine grid, support and bounds through the C API")
{
    fc_measure* b = make(kBernoulli, FC_PATH_SEMIGROUP, 1);
    fc_grid_options opt;
    fc_grid_options_default(&opt);
    CHECK(opt.n_points == 2001);
    opt.has_window = 1;
    opt.window_lo = -2.5;
    opt.window_hi = 2.5;
    opt.n_points = 401;
    fc_grid* grid = nullptr;
    REQUIRE(fc_semigroup_grid(b, 2.0, &opt, &grid) == FC_OK);
    fc_measure_free(b); // the grid keeps its own copy
    const size_t n = fc_grid_size(grid);
    CHECK(n >= 401);
    bool found_zero = false;
    for (size_t i = 0; i < n; ++i) {
        fc_grid_point p{};
        REQUIRE(fc_grid_point_at(grid, i, &p) == FC_OK);
        if (std::abs(p.E) < 1e-12) {
            found_zero = true;
            CHECK(p.rho == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-6));
        }
    }
    CHECK(found_zero);
    fc_grid_point p{};
    CHECK(fc_grid_point_at(grid, n, &p) == FC_INVALID_INPUT);

    fc_support* sup = nullptr;
    REQUIRE(fc_support_detect(grid, &sup) == FC_OK);
    int I = 0, C0 = 0, Cinf = 0;
    REQUIRE(fc_support_counts(sup, &I, &C0, &Cinf) == FC_OK);
    CHECK(I == 1);
    CHECK(C0 == 0);
    CHECK(Cinf == 2);
    // Bernoulli has no absolutely continuous part, so the bound does not apply.
    char* json = nullptr;
    int pass = 0;
    CHECK(fc_bounds_check(grid, sup, nullptr, &json, &pass) == FC_INVALID_INPUT);
    fc_support_free(sup);
    fc_grid_free(grid);
}

TEST_CASE("pair grid, CSV, bounds and random matrices through the C API")
{
    fc_measure* sc = make(kSemicircle, FC_PATH_PAIR);
    fc_grid_options opt;
    fc_grid_options_default(&opt);
    opt.n_points = 201;
    fc_grid* grid = nullptr;
    REQUIRE(fc_convolve_grid(sc, sc, &opt, &grid) == FC_OK);
    const std::string path = "capi_grid.csv";
    REQUIRE(fc_grid_write_csv(grid, path.c_str()) == FC_OK);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "E,rho,im_omega_alpha,im_omega_beta,boundary_error");
    std::remove(path.c_str());
    CHECK(fc_grid_write_csv(grid, "/no/such/dir/grid.csv") == FC_INVALID_INPUT);

    char* summary = nullptr;
    REQUIRE(fc_grid_summary_json(grid, &summary) == FC_OK);
    CHECK(take(summary).find("\"kind\": \"pair\"") != std::string::npos);

    fc_support* sup = nullptr;
    REQUIRE(fc_support_detect(grid, &sup) == FC_OK);
    char* json = nullptr;
    int pass = 0;
    REQUIRE(fc_bounds_check(grid, sup, "", &json, &pass) == FC_OK);
    CHECK(pass == 1);
    CHECK(take(json).find("\"theorem\": \"1.3\"") != std::string::npos);
    CHECK(fc_bounds_check(grid, sup, "1.4", &json, &pass) == FC_INVALID_INPUT);

    fc_rmt_config cfg;
    fc_rmt_config_default(&cfg);
    CHECK(cfg.matrix_size == 1000);
    cfg.matrix_size = 100;
    cfg.trials = 2;
    char* rmt = nullptr;
    REQUIRE(fc_rmt_validate(grid, sup, &cfg, &rmt) == FC_OK);
    CHECK(take(rmt).find("ks_distance") != std::string::npos);

    char* numerics = nullptr;
    REQUIRE(fc_numerics_json(&numerics) == FC_OK);
    CHECK(take(numerics).find("pair_tolerance") != std::string::npos);

    fc_support_free(sup);
    fc_grid_free(grid);
    fc_measure_free(sc);
}
