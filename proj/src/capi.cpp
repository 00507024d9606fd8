#include "freeconv/freeconv.h"

#include "analysis.hpp"
#include "errors.hpp"
#include "measure.hpp"
#include "measure_json.hpp"
#include "report_json.hpp"
#include "rmt.hpp"
#include "spectral.hpp"
#include "subordination.hpp"
#include "transform.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <memory>
#include <string>

using namespace freeconv;

struct fc_measure {
    MultiCutMeasure mu;
};

struct fc_grid {
    std::shared_ptr<const MultiCutMeasure> alpha;
    std::shared_ptr<const MultiCutMeasure> beta;
    SpectralProblem problem;
    DensityGrid dg;
};

struct fc_support {
    SupportReport report;
};

namespace {

thread_local std::string last_error;

template <class Fn>
fc_status guarded(Fn&& fn)
{
    last_error.clear();
    try {
        fn();
        return FC_OK;
    } catch (const InvalidInput& e) {
        last_error = e.what();
        return FC_INVALID_INPUT;
    } catch (const DomainError& e) {
        last_error = e.what();
        return FC_DOMAIN_ERROR;
    } catch (const NumericalFailure& e) {
        last_error = e.what();
        return FC_NUMERICAL_FAILURE;
    } catch (const std::exception& e) {
        last_error = e.what();
        return FC_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown error";
        return FC_INTERNAL_ERROR;
    }
}

void require(const void* p, const char* what)
{
    if (p == nullptr) {
        throw InvalidInput(std::string("null argument: ") + what);
    }
}

char* dup_string(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

cplx to_cplx(fc_complex z)
{
    return {z.re, z.im};
}

fc_complex from_cplx(cplx z)
{
    return {z.real(), z.imag()};
}

BuildOptions build_options(fc_path path, int allow_atomic)
{
    BuildOptions o;
    o.path = path == FC_PATH_PAIR ? MeasurePath::Pair : MeasurePath::Semigroup;
    o.allow_atomic = allow_atomic != 0;
    return o;
}

GridOptions grid_options(const fc_grid_options* options)
{
    GridOptions g;
    if (options != nullptr) {
        if (options->has_window) {
            g.window = std::make_pair(options->window_lo, options->window_hi);
        }
        g.n_points = options->n_points;
        g.threads = options->threads;
    }
    return g;
}

void copy_out(const std::vector<double>& v, double* out, size_t cap, size_t* count)
{
    require(count, "count");
    *count = v.size();
    for (size_t i = 0; i < v.size() && i < cap; ++i) {
        out[i] = v[i];
    }
}

} // namespace

extern "C" {

const char* fc_version(void)
{
    return "0.3.0";
}

const char* fc_last_error(void)
{
    return last_error.c_str();
}

void fc_string_free(char* s)
{
    std::free(s);
}

fc_status fc_numerics_json(char** out)
{
    return guarded([&] {
        require(out, "out");
        const LadderOptions ladder;
        nlohmann::json j = {
            {"quadrature_panel_order", JacobiComponent::kPanelOrder},
            {"pair_tolerance", kPairTolerance},
            {"semigroup_tolerance", kSemigroupTolerance},
            {"pair_max_iterations", kPairMaxIterations},
            {"semigroup_max_iterations", kSemigroupMaxIterations},
            {"divergence_threshold", kDivergenceThreshold},
            {"divergence_proximity", kDivergenceProximity},
            {"ladder", {{"eta_top", ladder.eta_top}, {"ratio", ladder.ratio}, {"levels", ladder.levels}}},
            {"support_threshold", kSupportThreshold},
            {"edge_resolution", kEdgeResolution},
            {"density_cap", kDensityCap},
        };
        *out = dup_string(j.dump(2));
    });
}

fc_status fc_measure_from_json(const char* json, fc_path path, int allow_atomic, fc_measure** out)
{
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        *out = new fc_measure{MultiCutMeasure::build(parse_spec(json), build_options(path, allow_atomic))};
    });
}

fc_status fc_measure_load(const char* file, fc_path path, int allow_atomic, fc_measure** out)
{
    return guarded([&] {
        require(file, "file");
        require(out, "out");
        *out = nullptr;
        const MeasureSpec spec = load_spec(file);
        try {
            *out = new fc_measure{MultiCutMeasure::build(spec, build_options(path, allow_atomic))};
        } catch (const InvalidInput& e) {
            throw InvalidInput(std::string(file) + ": " + e.what());
        }
    });
}

fc_status fc_measure_to_json(const fc_measure* mu, char** out)
{
    return guarded([&] {
        require(mu, "measure");
        require(out, "out");
        *out = dup_string(spec_to_json(mu->mu.spec()).dump(2));
    });
}

void fc_measure_free(fc_measure* mu)
{
    delete mu;
}

fc_status fc_measure_moment(const fc_measure* mu, int k, double* out)
{
    return guarded([&] {
        require(mu, "measure");
        require(out, "out");
        *out = mu->mu.moment(k);
    });
}

fc_status fc_measure_quantile(const fc_measure* mu, double p, double* out)
{
    return guarded([&] {
        require(mu, "measure");
        require(out, "out");
        *out = mu->mu.quantile(p);
    });
}

fc_status fc_measure_counts(const fc_measure* mu, int* n_ac, int* n_pp, int* n_pp_out)
{
    return guarded([&] {
        require(mu, "measure");
        if (n_ac) {
            *n_ac = static_cast<int>(mu->mu.n_ac());
        }
        if (n_pp) {
            *n_pp = static_cast<int>(mu->mu.n_pp());
        }
        if (n_pp_out) {
            *n_pp_out = static_cast<int>(mu->mu.n_pp_out());
        }
    });
}

fc_status fc_cauchy(const fc_measure* mu, fc_complex z, fc_complex* m)
{
    return guarded([&] {
        require(mu, "measure");
        require(m, "m");
        *m = from_cplx(cauchy_m(mu->mu, to_cplx(z)));
    });
}

fc_status fc_F(const fc_measure* mu, fc_complex z, fc_complex* f)
{
    return guarded([&] {
        require(mu, "measure");
        require(f, "f");
        *f = from_cplx(F(mu->mu, to_cplx(z)));
    });
}

fc_status fc_gap_zeros(const fc_measure* mu, double* out, size_t cap, size_t* count)
{
    return guarded([&] {
        require(mu, "measure");
        copy_out(gap_zeros(mu->mu), out, cap, count);
    });
}

fc_status fc_semigroup_edges(const fc_measure* mu, double t, double* edges, size_t cap, size_t* count)
{
    return guarded([&] {
        require(mu, "measure");
        std::vector<double> es;
        for (const auto& e : semigroup_edges(mu->mu, t)) {
            es.push_back(e.E);
        }
        copy_out(es, edges, cap, count);
    });
}

fc_status fc_semigroup_solve(const fc_measure* mu, double t, fc_complex z, fc_complex* omega, double* residual)
{
    return guarded([&] {
        require(mu, "measure");
        const SemigroupPoint p = solve_semigroup(mu->mu, t, to_cplx(z));
        if (omega) {
            *omega = from_cplx(p.omega_t);
        }
        if (residual) {
            *residual = p.residual;
        }
    });
}

fc_status fc_pair_solve(const fc_measure* alpha, const fc_measure* beta, fc_complex z, fc_complex* omega_alpha,
                        fc_complex* omega_beta, double* residual)
{
    return guarded([&] {
        require(alpha, "alpha");
        require(beta, "beta");
        const SubordinationPair p = solve_pair(alpha->mu, beta->mu, to_cplx(z));
        if (omega_alpha) {
            *omega_alpha = from_cplx(p.omega_alpha);
        }
        if (omega_beta) {
            *omega_beta = from_cplx(p.omega_beta);
        }
        if (residual) {
            *residual = p.residual;
        }
    });
}

void fc_grid_options_default(fc_grid_options* options)
{
    if (options != nullptr) {
        options->window_lo = 0.0;
        options->window_hi = 0.0;
        options->has_window = 0;
        options->n_points = 2001;
        options->threads = 1;
    }
}

fc_status fc_convolve_grid(const fc_measure* alpha, const fc_measure* beta, const fc_grid_options* options,
                           fc_grid** out)
{
    return guarded([&] {
        require(alpha, "alpha");
        require(beta, "beta");
        require(out, "out");
        *out = nullptr;
        auto g = std::make_unique<fc_grid>();
        g->alpha = std::make_shared<const MultiCutMeasure>(alpha->mu);
        g->beta = std::make_shared<const MultiCutMeasure>(beta->mu);
        g->problem = SpectralProblem::pair(*g->alpha, *g->beta);
        g->dg = density_grid(g->problem, grid_options(options));
        *out = g.release();
    });
}

fc_status fc_semigroup_grid(const fc_measure* mu, double t, const fc_grid_options* options, fc_grid** out)
{
    return guarded([&] {
        require(mu, "measure");
        require(out, "out");
        *out = nullptr;
        auto g = std::make_unique<fc_grid>();
        g->alpha = std::make_shared<const MultiCutMeasure>(mu->mu);
        g->problem = SpectralProblem::semigroup(*g->alpha, t);
        g->dg = density_grid(g->problem, grid_options(options));
        *out = g.release();
    });
}

size_t fc_grid_size(const fc_grid* grid)
{
    return grid == nullptr ? 0 : grid->dg.size();
}

fc_status fc_grid_point_at(const fc_grid* grid, size_t i, fc_grid_point* out)
{
    return guarded([&] {
        require(grid, "grid");
        require(out, "out");
        if (i >= grid->dg.size()) {
            throw InvalidInput("grid index out of range");
        }
        const DensityGrid& dg = grid->dg;
        out->E = dg.grid[i];
        out->rho = dg.density[i];
        out->im_omega_alpha = dg.im_omega_alpha[i];
        out->im_omega = dg.im_omega_beta[i];
        out->boundary_error = dg.boundary_error[i];
        out->flag = static_cast<fc_point_flag>(dg.flags[i]);
    });
}

fc_status fc_grid_write_csv(const fc_grid* grid, const char* path)
{
    return guarded([&] {
        require(grid, "grid");
        require(path, "path");
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw InvalidInput(std::string("cannot open '") + path + "' for writing");
        }
        write_csv(f, grid->dg);
        if (!f) {
            throw InvalidInput(std::string("failed writing '") + path + "'");
        }
    });
}

fc_status fc_grid_summary_json(const fc_grid* grid, char** out)
{
    return guarded([&] {
        require(grid, "grid");
        require(out, "out");
        *out = dup_string(grid_summary(grid->dg).dump(2));
    });
}

void fc_grid_free(fc_grid* grid)
{
    delete grid;
}

fc_status fc_support_detect(const fc_grid* grid, fc_support** out)
{
    return guarded([&] {
        require(grid, "grid");
        require(out, "out");
        *out = nullptr;
        *out = new fc_support{detect_support(grid->problem, grid->dg)};
    });
}

fc_status fc_support_counts(const fc_support* support, int* I, int* C0, int* Cinf)
{
    return guarded([&] {
        require(support, "support");
        if (I) {
            *I = support->report.I;
        }
        if (C0) {
            *C0 = support->report.C0;
        }
        if (Cinf) {
            *Cinf = support->report.Cinf;
        }
    });
}

fc_status fc_support_to_json(const fc_support* support, char** out)
{
    return guarded([&] {
        require(support, "support");
        require(out, "out");
        *out = dup_string(to_json(support->report).dump(2));
    });
}

void fc_support_free(fc_support* support)
{
    delete support;
}

fc_status fc_bounds_check(const fc_grid* grid, const fc_support* support, const char* theorem, char** json,
                          int* all_pass)
{
    return guarded([&] {
        require(grid, "grid");
        require(support, "support");
        const BoundsReport rep =
            grid->problem.is_pair()
                ? bounds_report_pair(*grid->alpha, *grid->beta, support->report, theorem ? theorem : "")
                : bounds_report_semigroup(*grid->alpha, grid->problem.t(), support->report);
        if (json) {
            *json = dup_string(to_json(rep).dump(2));
        }
        if (all_pass) {
            *all_pass = rep.all_pass() ? 1 : 0;
        }
    });
}

void fc_rmt_config_default(fc_rmt_config* cfg)
{
    if (cfg != nullptr) {
        cfg->matrix_size = 1000;
        cfg->trials = 50;
        cfg->seed = 1;
        cfg->orthogonal = 0;
        cfg->threads = 1;
    }
}

fc_status fc_rmt_validate(const fc_grid* grid, const fc_support* support, const fc_rmt_config* cfg, char** json)
{
    return guarded([&] {
        require(grid, "grid");
        require(cfg, "config");
        require(json, "json");
        if (!grid->problem.is_pair()) {
            throw InvalidInput("random-matrix validation needs a pair grid");
        }
        TrialConfig tc;
        tc.matrix_size = cfg->matrix_size;
        tc.trials = cfg->trials;
        tc.seed = cfg->seed;
        tc.ensemble = cfg->orthogonal ? Ensemble::Orthogonal : Ensemble::Unitary;
        tc.threads = cfg->threads;
        const ValidationReport rep =
            validate(*grid->alpha, *grid->beta, tc, grid->dg, support ? &support->report : nullptr);
        *json = dup_string(to_json(rep).dump(2));
    });
}

} // extern "C"
