#pragma once

#include "measure.hpp"
#include "reports.hpp"
#include "spectral.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace freeconv {

enum class Ensemble { Unitary, Orthogonal };

struct TrialConfig {
    int matrix_size = 1000;
    int trials = 50;
    std::uint64_t seed = 1;
    Ensemble ensemble = Ensemble::Unitary;
    int threads = 1;
};

struct ValidationReport {
    int matrix_size = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    Ensemble ensemble = Ensemble::Unitary;
    double ks_distance = 0.0;
    /// Clusters in the first trial's spectrum (split where spacing > 30x median).
    int empirical_components = 0;
    /// Fraction of pooled eigenvalues in the inner 80% of bounded support gaps.
    double gap_occupancy = 0.0;
    double max_trace_error = 0.0;
};

/// x_i = quantile((i - 1/2) / N), i = 1..N.
std::vector<double> sample_spectrum(const MultiCutMeasure& mu, int N);

/// Generator for trial `trial` derived from the run seed.
std::mt19937_64 trial_rng(std::uint64_t seed, int trial);

Eigen::MatrixXcd haar_unitary(int N, std::mt19937_64& rng);
Eigen::MatrixXd haar_orthogonal(int N, std::mt19937_64& rng);

/// Sorted eigenvalues of diag(a) + U diag(b) U*.
std::vector<double> haar_conjugate_spectrum(const std::vector<double>& a, const std::vector<double>& b,
                                            Ensemble ensemble, std::mt19937_64& rng);

/// KS distance between sorted samples and the normalized trapezoid CDF of the grid.
double ks_distance(const std::vector<double>& sorted, const DensityGrid& dg);

int count_clusters(const std::vector<double>& sorted, double factor = 30.0);

ValidationReport validate(const MultiCutMeasure& alpha, const MultiCutMeasure& beta, const TrialConfig& cfg,
                          const DensityGrid& dg, const SupportReport* support = nullptr);

} // namespace freeconv
