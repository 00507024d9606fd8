#include "quadrature.hpp"

#include "errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace freeconv {

double beta_function(double a, double b)
{
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

JacobiRule gauss_jacobi(int n, double alpha, double beta)
{
    if (n < 1 || !(alpha > -1.0) || !(beta > -1.0)) {
        throw InvalidInput("gauss_jacobi: need n >= 1 and exponents > -1");
    }
    const double ab = alpha + beta;

    // Three-term recurrence of the orthonormal Jacobi polynomials.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        double b2;
        if (k == 1) {
            // (1 + ab) cancels between numerator and denominator.
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        }
        sub(k - 1) = std::sqrt(b2);
    }

    const double mu0 = std::pow(2.0, ab + 1.0) * beta_function(alpha + 1.0, beta + 1.0);

    JacobiRule rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("gauss_jacobi: tridiagonal eigensolver failed");
    }
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v * v;
    }
    return rule;
}

} // namespace freeconv
