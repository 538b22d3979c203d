#pragma once

// Phase-space integrals of the symbol variants, the finite-lambda sandwich
// verdicts, Weyl-coefficient fits, the Karamata heat-trace check, and the
// per-quadrant leading terms for the MN family.

#include <string>
#include <vector>

#include "fdspec/model.hpp"
#include "fdspec/spectrum.hpp"

namespace fdspec {

enum class SymbolVariant { UpperSymbol, LowerSymbol, ClassicalSymbol, ClassicalVolume };

struct PhaseIntegralReport {
    double value = 0.0;
    double error_estimate = 0.0;
    SymbolVariant variant = SymbolVariant::ClassicalSymbol;
    double lambda = 0.0;
    ModelParams params;
    CoherentFrame frame;
};

// 2D integral of (lambda - Psi_variant(k, y))_+ over the region
// {Psi_variant <= lambda} (ClassicalVolume integrates the indicator instead).
// The inner y-integral is elementary for both families; only the outer
// k-integral is quadrature. Relative error <= 1e-6.
PhaseIntegralReport phase_integral(const ModelParams& params, const CoherentFrame& frame,
                                   SymbolVariant variant, double lambda);

struct SandwichRow {
    double lambda;
    double lower;   // lower-symbol phase integral
    double riesz;   // Riesz mean of the computed spectrum
    double upper;   // upper-symbol phase integral
    double budget;  // combined quadrature + certificate budget
    bool pass;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    bool all_pass = true;
};

// Exact finite-lambda inequality lower <= riesz <= upper, verified within the
// combined numerical budget at each lambda of the grid.
SandwichReport sandwich_check(const SpectrumResult& spec, const CoherentFrame& frame,
                              const std::vector<double>& lambda_grid);

// Coefficient of the leading lambda log^2 lambda Riesz-mean term (equals the
// log^2 lambda coefficient of N(lambda)): Zeta 1/(pi b)^2, MN
// (m+n+1)^2 / (2 m n (2 pi b)^2).
double leading_coefficient(const ModelParams& params);

struct WeylFit {
    double A = 0.0, B = 0.0, C = 0.0; // A lambda log^2 + B lambda log + C lambda
    double lambda_lo = 0.0, lambda_hi = 0.0;
    double residual = 0.0; // relative RMS
};

// Least-squares fit of riesz_mean over >= 30 log-spaced points in the window;
// regressors scaled to unit RMS before solving.
WeylFit weyl_fit(const SpectrumResult& spec, double lambda_lo, double lambda_hi,
                 int points = 60);

// Same three-term fit on externally supplied (lambda, riesz) samples.
WeylFit weyl_fit_samples(const std::vector<std::pair<double, double>>& samples);

struct KaramataRow {
    double t;
    double ratio;         // tr e^{-tH} / (A_lead log^2 t)
    double tail_fraction; // heat-trace tail bound / value
    bool usable;          // tail_fraction <= 0.1
};

struct KaramataReport {
    std::vector<KaramataRow> rows; // ordered by decreasing t
    bool monotone_trend = false;   // ratio approaches 1 monotonically over the final usable decade
    bool last_within_band = false;
    double band = 0.25;
    double smallest_usable_t = 0.0;
};

KaramataReport karamata_check(const SpectrumResult& spec, const std::vector<double>& t_grid,
                              double band = 0.25);

struct QuadrantReport {
    // Quadrant order: (k>=0, y>=0), (k<=0, y>=0), (k<=0, y<=0), (k>=0, y<=0).
    double integral[4];
    double predicted[4]; // closed-form leading terms at this lambda
    double lambda_tilde; // root of lambda = d4 u^{-n} + u entering quadrant 4
    double lambda;
};

// The four quadrant integrals of (lambda - Psi)_+ for the MN upper symbol and
// their predicted leading terms; the predictions sum to
// c_{m,n} lambda log^2 lambda / (2 pi b)^2.
QuadrantReport quadrant_asymptotics(const ModelParams& params, const CoherentFrame& frame,
                                    double lambda);

} // namespace fdspec
