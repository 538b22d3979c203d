// Coherent-transform machinery against closed-form Gaussian integrals and
// the exact phase-space representation identities.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <fdspec/coherent.hpp>

using namespace fdspec;
using Complex = std::complex<double>;

namespace {

TestFunction random_function(int J, double omega, double center, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    TestFunction f;
    f.basis.size = J;
    f.basis.omega = omega;
    f.basis.center = center;
    f.coeffs = Eigen::VectorXcd(J);
    for (int i = 0; i < J; ++i) f.coeffs(i) = Complex(gauss(rng), gauss(rng));
    f.coeffs /= std::sqrt(f.norm_squared());
    return f;
}

} // namespace

TEST_CASE("basis values match the explicit low-order Hermite functions") {
    const double omega = kTwoPi;
    const double c = 0.4;
    TestFunction f;
    f.basis.size = 3;
    f.basis.omega = omega;
    f.basis.center = c;
    auto value = [&](int j, Complex x) {
        f.coeffs = Eigen::VectorXcd::Zero(3);
        f.coeffs(j) = 1.0;
        return test_function_value(f, x);
    };
    for (Complex x : {Complex(0.0), Complex(0.7), Complex(0.3, -0.5), Complex(-1.1, 0.2)}) {
        Complex u = x - c;
        Complex g = std::pow(omega / kPi, 0.25) * std::exp(-omega * u * u / 2.0);
        CHECK(std::abs(value(0, x) - g) < 1e-13);
        CHECK(std::abs(value(1, x) - std::sqrt(2.0 * omega) * u * g) < 1e-12);
        Complex h2 = (2.0 * omega * u * u - 1.0) / std::sqrt(2.0) * g;
        CHECK(std::abs(value(2, x) - h2) < 1e-12);
    }
}

TEST_CASE("transform of a coherent state has the closed Gaussian form") {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    CoherentFrame frame = coherent_constants(params);
    const double a = frame.a;
    const double y0 = 0.35;
    TestFunction psi = TestFunction::ground_coherent(frame, y0);
    for (auto [k, y] : {std::pair{0.0, 0.0}, {0.4, -0.2}, {-0.9, 0.8}, {0.15, 0.35}}) {
        Complex got = coherent_transform(psi, frame, {k, y});
        double mu = 0.5 * (y + y0);
        Complex want = std::exp(-a * (y - y0) * (y - y0) / 4.0 -
                                kPi * kPi * k * k / a) *
                       std::exp(Complex(0.0, -kTwoPi * k * mu));
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("weighted transform satisfies the completing-the-square identity") {
    auto params = ModelParams::mn_family(0.5, 1, 2);
    CoherentFrame frame = coherent_constants(params);
    const double a = frame.a;
    TestFunction psi = random_function(5, kTwoPi, 0.1, 2024);
    for (double rate : {kPi * 0.5, kPi * 1.0, 2.4}) {
        for (auto [k, y] : {std::pair{0.3, -0.4}, {-0.7, 0.6}, {0.0, 0.0}}) {
            Complex lhs = coherent_transform_weighted(psi, frame, rate, {k, y});
            Complex rhs = std::exp(rate * rate / (2.0 * a) - rate * y) *
                          coherent_transform(psi, frame, {k, y - rate / a});
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("Plancherel identity for random test functions") {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    CoherentFrame frame = coherent_constants(params);
    for (unsigned seed : {1u, 2u, 3u}) {
        TestFunction psi = random_function(6, kTwoPi, 0.0, seed);
        PlancherelResult r = plancherel_check(psi, frame);
        CHECK(r.pass);
        CHECK(r.rhs == doctest::Approx(1.0));
        CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-8));
    }
    TestFunction zero;
    zero.basis.size = 4;
    zero.basis.omega = kTwoPi;
    zero.coeffs = Eigen::VectorXcd::Zero(4);
    PlancherelResult z = plancherel_check(zero, frame);
    CHECK(z.pass);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
}

TEST_CASE("closed-form lower symbol equals the explicit Gaussian integrals") {
    for (auto params : {ModelParams::zeta_family(0.5, 1.5), ModelParams::mn_family(1.0, 1, 2)}) {
        CoherentFrame frame = coherent_constants(params);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int i = 0; i < 8; ++i) {
            PhasePoint p{unif(rng), unif(rng)};
            LowerSymbolCheck c = lower_symbol_direct(params, frame, p);
            CHECK(c.pass);
            CHECK(c.quadrature == doctest::Approx(c.closed_form).epsilon(1e-8));
        }
    }
}

TEST_CASE("phase-space quadratic form equals the matrix quadratic form") {
    for (auto params : {ModelParams::zeta_family(1.0, 1.0), ModelParams::mn_family(1.0, 1, 1)}) {
        CoherentFrame frame = coherent_constants(params);
        OscillatorBasisSpec basis;
        basis.size = 6;
        basis.omega = kTwoPi;
        basis.center = default_center(params);
        OperatorMatrix M = build_matrix_oscillator(params, basis);
        for (unsigned seed : {11u, 12u}) {
            TestFunction psi = random_function(6, kTwoPi, basis.center, seed);
            double direct = (psi.coeffs.adjoint() * M.entries * psi.coeffs)(0).real();
            double ps = quadratic_form_phase_space(psi, params, frame);
            CHECK(ps == doctest::Approx(direct).epsilon(1e-7));
        }
    }
}
