#include "rmt.hpp"

#include "errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace freeconv {

std::vector<double> sample_spectrum(const MultiCutMeasure& mu, int N)
{
    if (N < 1) {
        throw InvalidInput("spectrum size must be positive");
    }
    std::vector<double> out(N);
    for (int i = 0; i < N; ++i) {
        out[i] = mu.quantile((i + 0.5) / N);
    }
    return out;
}

std::mt19937_64 trial_rng(std::uint64_t seed, int trial)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

Eigen::MatrixXcd haar_unitary(int N, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, M_SQRT1_2);
    Eigen::MatrixXcd z(N, N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            z(i, j) = std::complex<double>(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (int j = 0; j < N; ++j) {
        const std::complex<double> d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0 ? d / a : std::complex<double>(1.0, 0.0));
    }
    return q;
}

Eigen::MatrixXd haar_orthogonal(int N, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd z(N, N);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            z(i, j) = gauss(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    Eigen::MatrixXd q = qr.householderQ();
    const auto& r = qr.matrixQR();
    for (int j = 0; j < N; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) *= -1.0;
        }
    }
    return q;
}

std::vector<double> haar_conjugate_spectrum(const std::vector<double>& a, const std::vector<double>& b,
                                            Ensemble ensemble, std::mt19937_64& rng)
{
    if (a.size() != b.size() || a.empty()) {
        throw InvalidInput("spectra must be non-empty and of equal length");
    }
    const int N = static_cast<int>(a.size());
    const Eigen::Map<const Eigen::VectorXd> va(a.data(), N);
    const Eigen::Map<const Eigen::VectorXd> vb(b.data(), N);
    Eigen::VectorXd eig;
    if (ensemble == Ensemble::Unitary) {
        const Eigen::MatrixXcd u = haar_unitary(N, rng);
        Eigen::MatrixXcd h = u * vb.cast<std::complex<double>>().asDiagonal() * u.adjoint();
        h.diagonal() += va.cast<std::complex<double>>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("Hermitian eigensolver failed");
        }
        eig = es.eigenvalues();
    } else {
        const Eigen::MatrixXd o = haar_orthogonal(N, rng);
        Eigen::MatrixXd h = o * vb.asDiagonal() * o.transpose();
        h.diagonal() += va;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("symmetric eigensolver failed");
        }
        eig = es.eigenvalues();
    }
    std::vector<double> out(eig.data(), eig.data() + eig.size());
    std::sort(out.begin(), out.end());
    return out;
}

double ks_distance(const std::vector<double>& sorted, const DensityGrid& dg)
{
    std::vector<double> xs;
    std::vector<double> cdf;
    double acc = 0.0;
    for (std::size_t i = 0, prev = 0; i < dg.size(); ++i) {
        if (dg.flags[i] != PointFlag::Ok) {
            continue;
        }
        if (!xs.empty()) {
            acc += 0.5 * (dg.grid[i] - dg.grid[prev]) * (dg.density[i] + dg.density[prev]);
        }
        xs.push_back(dg.grid[i]);
        cdf.push_back(acc);
        prev = i;
    }
    if (xs.size() < 2 || !(acc > 0.0)) {
        throw NumericalFailure("density grid has no mass");
    }
    for (double& c : cdf) {
        c /= acc;
    }
    if (sorted.front() < xs.front() || sorted.back() > xs.back()) {
        throw InvalidInput("empirical spectrum escapes the density grid window");
    }
    const double n = static_cast<double>(sorted.size());
    double ks = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double x = sorted[i];
        while (k + 2 < xs.size() && xs[k + 1] < x) {
            ++k;
        }
        const double span = xs[k + 1] - xs[k];
        const double s = span > 0.0 ? std::clamp((x - xs[k]) / span, 0.0, 1.0) : 0.0;
        const double F = cdf[k] + s * (cdf[k + 1] - cdf[k]);
        ks = std::max({ks, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
    }
    return ks;
}

int count_clusters(const std::vector<double>& sorted, double factor)
{
    if (sorted.size() < 2) {
        return static_cast<int>(sorted.size());
    }
    std::vector<double> gaps;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        gaps.push_back(sorted[i] - sorted[i - 1]);
    }
    std::vector<double> tmp = gaps;
    std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
    const double median = tmp[tmp.size() / 2];
    int clusters = 1;
    for (double g : gaps) {
        clusters += g > factor * median ? 1 : 0;
    }
    return clusters;
}

ValidationReport validate(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, const TrialConfig& cfg,
                          const DensityGrid& dg, const SupportReport* support)
{
    if (cfg.matrix_size < 2 || cfg.trials < 1) {
        throw InvalidInput("trial configuration needs N >= 2 and at least one trial");
    }
    const std::vector<double> a = sample_spectrum(alpha, cfg.matrix_size);
    const std::vector<double> b = sample_spectrum(beta, cfg.matrix_size);
    double trace = 0.0;
    for (int i = 0; i < cfg.matrix_size; ++i) {
        trace += a[i] + b[i];
    }

    std::vector<std::vector<double>> spectra(cfg.trials);
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (int k = next++; k < cfg.trials; k = next++) {
            std::mt19937_64 rng = trial_rng(cfg.seed, k);
            spectra[k] = haar_conjugate_spectrum(a, b, cfg.ensemble, rng);
        }
    };
    const int threads = std::max(1, std::min(cfg.threads, cfg.trials));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    ValidationReport rep;
    rep.matrix_size = cfg.matrix_size;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.ensemble = cfg.ensemble;
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(cfg.matrix_size) * cfg.trials);
    for (const auto& s : spectra) {
        double sum = 0.0;
        for (double v : s) {
            sum += v;
        }
        rep.max_trace_error = std::max(rep.max_trace_error, std::abs(sum - trace));
        pooled.insert(pooled.end(), s.begin(), s.end());
    }
    std::sort(pooled.begin(), pooled.end());
    rep.ks_distance = ks_distance(pooled, dg);
    rep.empirical_components = count_clusters(spectra.front());
    if (support != nullptr && !pooled.empty()) {
        std::size_t inside_gaps = 0;
        for (std::size_t j = 0; j + 1 < support->components.size(); ++j) {
            const double lo = support->components[j].second;
            const double hi = support->components[j + 1].first;
            const double pad = 0.1 * (hi - lo);
            inside_gaps += std::upper_bound(pooled.begin(), pooled.end(), hi - pad) -
                           std::lower_bound(pooled.begin(), pooled.end(), lo + pad);
        }
        rep.gap_occupancy = static_cast<double>(inside_gaps) / static_cast<double>(pooled.size());
    }
    return rep;
}

} // namespace freeconv
