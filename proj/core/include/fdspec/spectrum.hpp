#pragma once

// Eigensolves, convergence certification across a resolution ladder, and the
// spectral functionals built on certified eigenvalues: counting function,
// Riesz means, heat trace, trace of the inverse, and the tau_0 counting
// bracket.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fdspec/quantization.hpp"

namespace fdspec {

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> certificates; // absolute error bounds, first certified_count entries
    int certified_count = 0;
    std::optional<ModelParams> params;
    Backend backend = Backend::Oscillator;
    std::string resolution;
    std::string method;
    bool partial = false; // ladder exhausted before reaching the requested tolerance
    std::vector<std::string> warnings;
};

// Single-resolution eigensolve; certificates empty.
SpectrumResult compute_spectrum(const OperatorMatrix& matrix);

struct LadderOptions {
    std::vector<int> oscillator_sizes = {100, 200, 400, 800, 1600};
    std::vector<int> grid_sizes = {256, 512, 1024, 2048, 4096};
    double a = kTwoPi;        // coherent frame used for envelope estimates
    double omega = kTwoPi;    // oscillator basis frequency
    std::optional<double> center;     // oscillator basis center; default per family
    std::optional<double> lambda_max; // grid: target trusted window; default from `want`
    int dd_max_size = 800;            // cap for the extended-precision Cholesky retry
};

// Runs the resolution ladder until the first `want` eigenvalues change by
// less than `tol` (relative) between consecutive rungs. Certificates are the
// last observed changes; Rayleigh-Ritz guarantees the values are upper bounds.
SpectrumResult converged_spectrum(const ModelParams& params, Backend backend,
                                  int want, double tol,
                                  const LadderOptions& options = {});

// Largest lambda at which counting/Riesz queries are meaningful: the largest
// certified eigenvalue minus its certificate.
double trusted_lambda(const SpectrumResult& spec);

// Strict count #{j : lambda_j < lambda} over certified eigenvalues.
int counting_function(const SpectrumResult& spec, double lambda);

// sum (lambda - lambda_j)_+ over certified eigenvalues.
double riesz_mean(const SpectrumResult& spec, double lambda);

// Conservative envelope N(lambda) <= A log^2 lambda + B log lambda fitted on
// the certified range (A inflated 2x), used to bound uncomputed tails.
struct TailEnvelope {
    double A = 0.0;
    double B = 0.0;
    double lambda_cut = 0.0; // envelope applies for lambda > lambda_cut
};
TailEnvelope tail_envelope(const SpectrumResult& spec);

struct HeatTraceResult {
    double value = 0.0;      // sum over certified eigenvalues
    double tail_bound = 0.0; // envelope bound on the uncertified remainder
    bool precision_warning = false; // tail_bound > 10% of value
};
HeatTraceResult heat_trace(const SpectrumResult& spec, double t);

struct TraceInverseResult {
    double partial = 0.0;
    double tail_bound = 0.0;
};
TraceInverseResult trace_inverse(const SpectrumResult& spec);

// Counting bracket from Riesz means: lower = riesz(lambda)/lambda,
// upper = riesz((1+tau0) lambda)/(tau0 lambda) with 2 tau0 = log(lambda +
// lambda tau0). Requires lambda > 1. weyl_A is accepted for interface
// stability but the bracket itself does not depend on it.
struct CountBounds {
    double lower = 0.0;
    double upper = 0.0;
    double tau0 = 0.0;
    double mu = 0.0; // (1 + tau0) lambda; riesz_at must be valid up to here
};
CountBounds count_bounds_from_riesz(const std::function<double(double)>& riesz_at,
                                    double lambda, double weyl_A = 0.0);

// Export: CSV `index,eigenvalue,certificate` and a JSON mirror with a params
// block. `header_lines` are emitted as leading `# ...` comments.
std::string spectrum_to_csv(const SpectrumResult& spec,
                            const std::vector<std::string>& header_lines = {});
std::string spectrum_to_json(const SpectrumResult& spec);

} // namespace fdspec
