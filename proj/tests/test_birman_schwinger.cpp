// Resolvent-kernel counting machinery: kernel closed form vs direct Fourier
// quadrature, cutoff-potential geometry, and the counting inequality.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>

#include <fdspec/birman_schwinger.hpp>

using namespace fdspec;

TEST_CASE("inverse-kernel closed form equals the Fourier integral") {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    for (auto [b, u] : {std::pair{1.0, 0.0}, {1.0, 0.7}, {0.5, 1.3}, {0.25, 0.4}}) {
        auto f = [b = b, u = u](double k) {
            return std::cos(kTwoPi * u * k) / (2.0 * std::cosh(kTwoPi * b * k));
        };
        double integral =
            2.0 * GK::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 12, 1e-13);
        CHECK(h0_inverse_kernel(b, u, 0.0) == doctest::Approx(integral).epsilon(1e-10));
        // Translation invariance: only x - y enters.
        CHECK(h0_inverse_kernel(b, u + 3.2, 3.2) ==
              doctest::Approx(h0_inverse_kernel(b, u, 0.0)).epsilon(1e-14));
    }
}

TEST_CASE("cutoff potential geometry") {
    auto params = ModelParams::zeta_family(1.0, 2.0);
    CHECK_THROWS_AS(CutoffPotential::make(ModelParams::mn_family(1.0, 1, 1), 10.0),
                    ParamError);

    double lambda = 10.0;
    CutoffPotential cut = CutoffPotential::make(params, lambda);
    REQUIRE(cut.support.has_value());
    auto [xl, xr] = *cut.support;
    CHECK(xl < xr);
    double r = kTwoPi * params.b;
    auto L = [&](double x) { return std::exp(r * x) + params.zeta * std::exp(-r * x); };
    CHECK(L(xl) == doctest::Approx(lambda).epsilon(1e-10));
    CHECK(L(xr) == doctest::Approx(lambda).epsilon(1e-10));
    CHECK(cut.w(xl) < 1e-4);
    CHECK(cut.w(xl - 1.0) == 0.0);
    CHECK(cut.w(xr + 1.0) == 0.0);
    double mid = 0.5 * (xl + xr);
    CHECK(cut.w(mid) == doctest::Approx(std::sqrt(lambda - L(mid))).epsilon(1e-12));

    // Below the potential minimum 2 sqrt(zeta) the support is empty.
    CutoffPotential low = CutoffPotential::make(params, 2.0);
    CHECK_FALSE(low.support.has_value());
    CHECK(low.w(0.0) == 0.0);
    Eigen::MatrixXd K_empty = build_bs_matrix(params, 2.0);
    CHECK(K_empty.size() == 0);
}

TEST_CASE("discretized kernel matrix is symmetric and node-stable") {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    CHECK_THROWS_AS(build_bs_matrix(params, 20.0, 4), ParamError);
    Eigen::MatrixXd K = build_bs_matrix(params, 20.0, 200);
    CHECK((K - K.transpose()).norm() <= 1e-14 * K.norm());

    // The top eigenvalues are quadrature-converged: doubling nodes moves
    // them by less than 1e-6.
    Eigen::MatrixXd K2 = build_bs_matrix(params, 20.0, 400);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(K), e2(K2);
    for (int i = 0; i < 3; ++i) {
        double a = e1.eigenvalues()(K.rows() - 1 - i);
        double b = e2.eigenvalues()(K2.rows() - 1 - i);
        CHECK(std::abs(a - b) < 1e-6);
    }
}

TEST_CASE("counting inequality against the certified spectrum") {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    LadderOptions opt;
    opt.oscillator_sizes = {100, 200, 400};
    SpectrumResult spec = converged_spectrum(params, Backend::Oscillator, 4, 1e-7, opt);
    REQUIRE_FALSE(spec.partial);

    for (double lam : {5.0, 10.0, 20.0}) {
        BsCountRow row = bs_counting_check(params, lam, spec);
        CHECK(row.pass);
        CHECK(row.n_spec <= row.bs_count);
        CHECK(row.n_spec == counting_function(spec, lam));
    }
    // Ground eigenvalue near 17.85: the counts must see it at lambda = 20.
    BsCountRow row20 = bs_counting_check(params, 20.0, spec);
    CHECK(row20.n_spec == 1);
    CHECK(row20.bs_count >= 1);
}
