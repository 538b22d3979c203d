#pragma once

// Nystrom discretization of K_lambda = W_lambda H_0^{-1} W_lambda for the
// Zeta-family potential L(x) = e^{2 pi b x} + zeta e^{-2 pi b x} and the
// counting inequality N(lambda) <= #{mu(K_lambda) > 1}.

#include <optional>

#include "fdspec/quantization.hpp"
#include "fdspec/spectrum.hpp"

namespace fdspec {

struct CutoffPotential {
    double lambda = 0.0;
    ModelParams params; // Zeta family
    std::optional<std::pair<double, double>> support; // where lambda - L(x) > 0

    // W_lambda(x) = sqrt((lambda - L(x))_+).
    double w(double x) const;

    static CutoffPotential make(const ModelParams& params, double lambda);
};

// Closed form of int e^{2 pi i (x-y) k} / (2 cosh(2 pi b k)) dk
// = sech(pi (x-y) / (2 b)) / (4 b)   (standard sech Fourier pair).
double h0_inverse_kernel(double b, double x, double y);

// Gauss-Legendre Nystrom matrix sqrt(w_i) W(x_i) kern(x_i, x_j) W(x_j)
// sqrt(w_j) on the support interval; empty matrix when the support is empty.
Eigen::MatrixXd build_bs_matrix(const ModelParams& params, double lambda, int nodes = 400);

struct BsCountRow {
    double lambda;
    int n_spec;   // counting_function of the computed spectrum
    int bs_count; // eigenvalues of K_lambda above 1
    bool pass;    // n_spec <= bs_count
};

BsCountRow bs_counting_check(const ModelParams& params, double lambda,
                             const SpectrumResult& spec, int nodes = 400);

} // namespace fdspec
