#pragma once

#include <vector>

namespace freeconv {

/// Gauss-Jacobi rule for  int_{-1}^{1} (1-s)^alpha (1+s)^beta f(s) ds.
struct JacobiRule {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch construction; alpha, beta > -1, n >= 1.
JacobiRule gauss_jacobi(int n, double alpha, double beta);

/// B(a, b) via lgamma; a, b > 0.
double beta_function(double a, double b);

} // namespace freeconv
