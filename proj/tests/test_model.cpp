#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <fdspec/model.hpp>

using namespace fdspec;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ModelParams::zeta_family(0.0, 1.0), ParamError);
    CHECK_THROWS_AS(ModelParams::zeta_family(-1.0, 1.0), ParamError);
    CHECK_THROWS_AS(ModelParams::zeta_family(1.0, -0.5), ParamError);
    CHECK_THROWS_AS(ModelParams::mn_family(1.0, 0, 1), ParamError);
    CHECK_THROWS_AS(ModelParams::mn_family(1.0, 1, -2), ParamError);
    CHECK_THROWS_AS(coherent_constants(ModelParams::zeta_family(1.0, 1.0), 0.0), ParamError);
    CHECK(ModelParams::zeta_family(0.5, 2.0).spectral_floor() == 2.0);
    CHECK(ModelParams::mn_family(0.5, 1, 2).spectral_floor() == 0.0);
}

TEST_CASE("classical symbol matches its defining expression") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (double b : {0.25, 0.5, 1.0}) {
        auto pz = ModelParams::zeta_family(b, 1.7);
        auto pm = ModelParams::mn_family(b, 2, 3);
        for (int i = 0; i < 50; ++i) {
            PhasePoint p{coord(rng), coord(rng)};
            double r = kTwoPi * b;
            double zeta_want = 2.0 * std::cosh(r * p.k) + std::exp(r * p.y) +
                               1.7 * std::exp(-r * p.y);
            CHECK(classical_symbol(pz, p) == doctest::Approx(zeta_want).epsilon(1e-14));
            double mn_want = std::exp(-r * p.k) + std::exp(r * p.y) +
                             std::exp(r * (2 * p.k - 3 * p.y));
            CHECK(classical_symbol(pm, p) == doctest::Approx(mn_want).epsilon(1e-14));
        }
    }
}

TEST_CASE("zeta-family symbol never drops below the spectral floor") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (double zeta : {0.5, 1.0, 2.0})
        for (double b : {0.25, 1.0}) {
            auto p = ModelParams::zeta_family(b, zeta);
            for (int i = 0; i < 200; ++i)
                CHECK(classical_symbol(p, {coord(rng), coord(rng)}) >= 2.0);
        }
}

TEST_CASE("contraction constants and the upper/lower ordering") {
    auto params = ModelParams::mn_family(0.5, 2, 3);
    CoherentFrame f = coherent_constants(params);
    CHECK(f.a == doctest::Approx(kTwoPi));
    CHECK(f.d1 > 0.0);
    CHECK(f.d1 < 1.0);
    CHECK(f.d2 > 0.0);
    CHECK(f.d2 < 1.0);
    CHECK(f.d3 == doctest::Approx(std::pow(f.d1, 4) * std::pow(f.d2, 9)).epsilon(1e-14));
    // Wider windows (larger a) squeeze d2 toward 1 and d1 toward 0.
    CoherentFrame wide = coherent_constants(params, 100.0);
    CHECK(wide.d2 > f.d2);
    CHECK(wide.d1 < f.d1);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    auto pz = ModelParams::zeta_family(0.5, 1.3);
    CoherentFrame fz = coherent_constants(pz);
    for (int i = 0; i < 200; ++i) {
        PhasePoint p{coord(rng), coord(rng)};
        CHECK(upper_symbol(params, f, p) <= classical_symbol(params, p));
        CHECK(classical_symbol(params, p) <= lower_symbol(params, f, p));
        CHECK(upper_symbol(pz, fz, p) <= classical_symbol(pz, p));
        CHECK(classical_symbol(pz, p) <= lower_symbol(pz, fz, p));
    }
}

TEST_CASE("exponential minorant stays below the MN upper symbol") {
    CHECK_THROWS_AS(minorant_constants(ModelParams::zeta_family(1.0, 1.0),
                                       coherent_constants(ModelParams::zeta_family(1.0, 1.0))),
                    ParamError);
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 3}, {5, 2}})
        for (double b : {0.25, 0.5, 1.0}) {
            auto params = ModelParams::mn_family(b, m, n);
            CoherentFrame f = coherent_constants(params);
            MinorantConstants c = minorant_constants(params, f);
            CHECK(c.c1 > 0.0);
            CHECK(c.c2 > 0.0);
            CHECK(c.operator_bound() == doctest::Approx(4.0 * c.c1));
            auto phi = [&](PhasePoint p) {
                return c.c1 * (std::exp(-c.c2 * p.k) + std::exp(c.c2 * p.k) +
                               std::exp(-c.c2 * p.y) + std::exp(c.c2 * p.y));
            };
            // Far tails and the bulk: the minorant must never cross the symbol.
            for (int i = 0; i < 500; ++i) {
                PhasePoint p{coord(rng), coord(rng)};
                double psi = upper_symbol(params, f, p);
                if (!std::isfinite(psi)) continue;
                CHECK(phi(p) < psi);
                CHECK(phi(p) >= c.operator_bound()); // pointwise floor
            }
        }
}
