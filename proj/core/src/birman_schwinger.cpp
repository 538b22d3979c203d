#include "fdspec/birman_schwinger.hpp"

#include <cmath>

#include "quad_util.hpp"

namespace fdspec {

CutoffPotential CutoffPotential::make(const ModelParams& params, double lambda) {
    if (params.family != Family::Zeta)
        throw ParamError("Birman-Schwinger instantiation covers the Zeta family only");
    if (!(params.zeta > 0.0))
        throw ParamError("Birman-Schwinger requires zeta > 0 (bounded support)");
    CutoffPotential c;
    c.lambda = lambda;
    c.params = params;
    // lambda - e^{2 pi b x} - zeta e^{-2 pi b x} > 0 between the roots of
    // E^2 - lambda E + zeta with E = e^{2 pi b x}.
    if (lambda > 2.0 * std::sqrt(params.zeta)) {
        double disc = std::sqrt(lambda * lambda - 4.0 * params.zeta);
        double Ep = (lambda + disc) / 2.0;
        double Em = params.zeta / Ep;
        c.support = {std::log(Em) / (kTwoPi * params.b), std::log(Ep) / (kTwoPi * params.b)};
    }
    return c;
}

double CutoffPotential::w(double x) const {
    double L = std::exp(kTwoPi * params.b * x) + params.zeta * std::exp(-kTwoPi * params.b * x);
    double d = lambda - L;
    return d > 0.0 ? std::sqrt(d) : 0.0;
}

double h0_inverse_kernel(double b, double x, double y) {
    if (!(b > 0.0)) throw ParamError("b must be positive");
    return 1.0 / (4.0 * b * std::cosh(kPi * (x - y) / (2.0 * b)));
}

Eigen::MatrixXd build_bs_matrix(const ModelParams& params, double lambda, int nodes) {
    if (nodes < 8) throw ParamError("Birman-Schwinger discretization needs >= 8 nodes");
    CutoffPotential cut = CutoffPotential::make(params, lambda);
    if (!cut.support) return Eigen::MatrixXd(0, 0);
    auto [lo, hi] = *cut.support;
    auto [xg, wg] = quad::gauss_legendre(nodes);
    double mid = (hi + lo) / 2.0, half = (hi - lo) / 2.0;
    Eigen::VectorXd x(nodes), sw(nodes);
    for (int i = 0; i < nodes; ++i) {
        x(i) = mid + half * xg(i);
        sw(i) = std::sqrt(wg(i) * half) * cut.w(x(i));
    }
    Eigen::MatrixXd K(nodes, nodes);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = sw(i) * h0_inverse_kernel(params.b, x(i), x(j)) * sw(j);
            K(i, j) = v;
            K(j, i) = v;
        }
    return K;
}

BsCountRow bs_counting_check(const ModelParams& params, double lambda,
                             const SpectrumResult& spec, int nodes) {
    BsCountRow row{lambda, 0, 0, false};
    row.n_spec = counting_function(spec, lambda); // range-checked
    Eigen::MatrixXd K = build_bs_matrix(params, lambda, nodes);
    if (K.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw NumericError("Birman-Schwinger eigensolve failed");
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > 1.0) ++row.bs_count;
    }
    row.pass = row.n_spec <= row.bs_count;
    return row;
}

} // namespace fdspec
