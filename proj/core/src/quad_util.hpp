#pragma once

// Gauss-Legendre nodes and weights on [-1, 1] via the Golub-Welsch
// eigenvalue method (symmetric Jacobi matrix of the recurrence).

#include <cmath>
#include <utility>

#include <Eigen/Dense>

namespace fdspec::quad {

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j < n; ++j) {
        double beta = j / std::sqrt(4.0 * j * j - 1.0);
        J(j, j - 1) = beta;
        J(j - 1, j) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Eigen::VectorXd x = es.eigenvalues();
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
        double v = es.eigenvectors()(0, j);
        w(j) = 2.0 * v * v;
    }
    return {x, w};
}

} // namespace fdspec::quad
