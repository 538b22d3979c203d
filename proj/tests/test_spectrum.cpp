// Ladder certification and the spectral functionals, checked against
// synthetic spectra where every quantity has a hand-computable value.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include <fdspec/spectrum.hpp>

using namespace fdspec;

namespace {

SpectrumResult synthetic(std::vector<double> eigs, int certified,
                         std::optional<ModelParams> params = std::nullopt) {
    SpectrumResult s;
    s.eigenvalues = std::move(eigs);
    s.certificates.assign(s.eigenvalues.size(), 0.0);
    s.certified_count = certified;
    s.params = params;
    return s;
}

} // namespace

TEST_CASE("ladder convergence on the reference operator") {
    auto params = ModelParams::zeta_family(1.0, 1.0);
    LadderOptions opt;
    opt.oscillator_sizes = {100, 200, 400};
    SpectrumResult s = converged_spectrum(params, Backend::Oscillator, 5, 1e-7, opt);
    CHECK_FALSE(s.partial);
    CHECK(s.certified_count >= 5);
    // Converged reference value for the ground eigenvalue.
    CHECK(s.eigenvalues[0] == doctest::Approx(17.8466431).epsilon(1e-6));
    for (size_t i = 1; i < s.eigenvalues.size(); ++i)
        CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
    for (int i = 0; i < s.certified_count; ++i) {
        CHECK(s.certificates[i] >= 0.0);
        CHECK(s.certificates[i] <= 1e-7 * s.eigenvalues[i]);
    }
    CHECK_THROWS_AS(converged_spectrum(params, Backend::Oscillator, 0, 1e-7, opt),
                    ParamError);
    CHECK_THROWS_AS(converged_spectrum(params, Backend::Oscillator, 5, 0.0, opt),
                    ParamError);
}

TEST_CASE("counting, Riesz mean, and the trusted window") {
    SpectrumResult s = synthetic({1.0, 2.0, 3.0, 4.0, 5.0}, 4);
    s.certificates[3] = 0.25;
    CHECK(trusted_lambda(s) == doctest::Approx(3.75));
    CHECK(counting_function(s, 3.5) == 3);
    CHECK(counting_function(s, 1.0) == 0); // strict inequality at an eigenvalue
    CHECK(riesz_mean(s, 3.5) == doctest::Approx(2.5 + 1.5 + 0.5));
    CHECK_THROWS_AS(counting_function(s, 3.8), RangeError);
    CHECK_THROWS_AS(riesz_mean(s, 100.0), RangeError);
    SpectrumResult empty;
    CHECK_THROWS_AS(trusted_lambda(empty), RangeError);
}

TEST_CASE("count bounds bracket the exact counting function") {
    // lambda_j = j for j = 1..4000: every functional is exact.
    std::vector<double> eigs;
    for (int j = 1; j <= 4000; ++j) eigs.push_back(j);
    SpectrumResult s = synthetic(std::move(eigs), 4000);
    auto riesz_at = [&](double lam) { return riesz_mean(s, lam); };

    for (double lam : {2.0, 7.5, 20.0, 100.0, 500.0}) {
        CountBounds cb = count_bounds_from_riesz(riesz_at, lam);
        double resid = 2.0 * cb.tau0 - std::log(lam * (1.0 + cb.tau0));
        CHECK(std::abs(resid) < 1e-10); // defining equation of tau0
        CHECK(cb.mu == doctest::Approx((1.0 + cb.tau0) * lam));
        int count = counting_function(s, lam);
        CHECK(cb.lower <= count + 1e-12);
        CHECK(cb.upper >= count - 1e-12);
    }
    CHECK_THROWS_AS(count_bounds_from_riesz(riesz_at, 1.0), RangeError);
}

TEST_CASE("heat trace and trace of the inverse on synthetic spectra") {
    SpectrumResult s = synthetic({2.0, 4.0, 8.0, 16.0}, 4);
    double t = 0.3;
    HeatTraceResult h = heat_trace(s, t);
    double want = std::exp(-0.6) + std::exp(-1.2) + std::exp(-2.4) + std::exp(-4.8);
    CHECK(h.value == doctest::Approx(want).epsilon(1e-14));
    CHECK(h.tail_bound == 0.0); // fully certified: no uncertified remainder
    CHECK_THROWS_AS(heat_trace(s, 0.0), ParamError);

    auto params = ModelParams::zeta_family(1.0, 1.0);
    SpectrumResult u = synthetic({2.0, 4.0, 8.0, 16.0, 32.0}, 3, params);
    HeatTraceResult hu = heat_trace(u, 1e-3);
    CHECK(hu.tail_bound > 0.0);
    CHECK(hu.precision_warning); // tiny t: the tail envelope dominates

    TraceInverseResult tr = trace_inverse(u);
    CHECK(tr.partial == doctest::Approx(0.5 + 0.25 + 0.125).epsilon(1e-14));
    CHECK(tr.tail_bound > 0.0);
    SpectrumResult neg = synthetic({-1.0, 2.0}, 2, params);
    CHECK_THROWS_AS(trace_inverse(neg), NumericError);
}

TEST_CASE("tail envelope dominates the certified counting function") {
    // Spectrum drawn from an exact two-log-power law.
    auto params = ModelParams::zeta_family(0.25, 1.0);
    double A0 = 1.621;
    std::vector<double> eigs;
    for (int j = 1; j <= 2000; ++j) eigs.push_back(std::exp(std::sqrt(j / A0)));
    SpectrumResult s = synthetic(std::move(eigs), 2000, params);
    TailEnvelope env = tail_envelope(s);
    CHECK(env.A > A0); // conservative inflation
    CHECK(env.lambda_cut == doctest::Approx(s.eigenvalues.back()));
    for (double lam : {s.eigenvalues[500], s.eigenvalues[1500], s.eigenvalues[1999]}) {
        double L = std::log(lam);
        CHECK(env.A * L * L + env.B >= counting_function(s, lam * 0.999999));
    }
}

TEST_CASE("CSV and JSON export formats") {
    SpectrumResult s = synthetic({1.5, 2.5, 3.5}, 2,
                                 ModelParams::zeta_family(1.0, 1.0));
    s.certificates = {1e-9, 2e-9, 5e-3};
    s.backend = Backend::Oscillator;
    s.resolution = "osc N=100";
    s.method = "chol+jsvd";

    std::string csv = spectrum_to_csv(s, {"params: test", "config-hash: abc"});
    CHECK(csv.rfind("# params: test\r\n", 0) == 0);
    CHECK(csv.find("# config-hash: abc\r\n") != std::string::npos);
    CHECK(csv.find("index,eigenvalue,certificate\r\n") != std::string::npos);
    CHECK(csv.find("1,1.5,1e-09\r\n") != std::string::npos);
    CHECK(csv.find("3,3.5,\r\n") != std::string::npos); // uncertified: empty field
    // RFC 4180: every line CRLF-terminated.
    CHECK(csv.find("\n") != std::string::npos);
    size_t lf = 0, crlf = 0;
    for (size_t i = 0; i < csv.size(); ++i)
        if (csv[i] == '\n') {
            ++lf;
            if (i > 0 && csv[i - 1] == '\r') ++crlf;
        }
    CHECK(lf == crlf);

    auto j = nlohmann::json::parse(spectrum_to_json(s));
    CHECK(j["params"]["family"] == "zeta");
    CHECK(j["params"]["b"] == 1.0);
    CHECK(j["certified_count"] == 2);
    CHECK(j["eigenvalues"].size() == 3);
    CHECK(j["backend"] == "osc");
}
