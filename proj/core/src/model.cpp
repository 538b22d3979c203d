#include "fdspec/model.hpp"

#include <algorithm>
#include <cmath>

namespace fdspec {

ModelParams ModelParams::zeta_family(double b, double zeta) {
    if (!(b > 0.0)) throw ParamError("b must be positive");
    if (!(zeta >= 0.0)) throw ParamError("zeta must be nonnegative");
    ModelParams p;
    p.family = Family::Zeta;
    p.b = b;
    p.zeta = zeta;
    return p;
}

ModelParams ModelParams::mn_family(double b, int m, int n) {
    if (!(b > 0.0)) throw ParamError("b must be positive");
    if (m < 1 || n < 1) throw ParamError("m and n must be >= 1");
    ModelParams p;
    p.family = Family::MN;
    p.b = b;
    p.m = m;
    p.n = n;
    return p;
}

CoherentFrame coherent_constants(const ModelParams& params, double a) {
    if (!(a > 0.0)) throw ParamError("Gaussian exponent a must be positive");
    if (!(params.b > 0.0)) throw ParamError("b must be positive");
    CoherentFrame f;
    f.a = a;
    f.d1 = std::exp(-a * params.b * params.b / 4.0);
    f.d2 = std::exp(-(kPi * params.b) * (kPi * params.b) / a);
    f.d3 = 1.0;
    if (params.family == Family::MN) {
        double m = params.m, n = params.n;
        f.d3 = std::pow(f.d1, m * m) * std::pow(f.d2, n * n);
    }
    return f;
}

namespace {

// Shared term structure: the three (Zeta: four) exponential terms of the
// symbol, with weights w = 1 (classical), d_i (upper) or 1/d_i (lower).
double symbol_value(const ModelParams& params, PhasePoint p,
                    double w1, double w2, double w3) {
    double b = params.b;
    if (params.family == Family::Zeta) {
        return w1 * 2.0 * std::cosh(kTwoPi * b * p.k) +
               w2 * (std::exp(kTwoPi * b * p.y) + params.zeta * std::exp(-kTwoPi * b * p.y));
    }
    return w1 * std::exp(-kTwoPi * b * p.k) + w2 * std::exp(kTwoPi * b * p.y) +
           w3 * std::exp(kTwoPi * b * (params.m * p.k - params.n * p.y));
}

} // namespace

double classical_symbol(const ModelParams& params, PhasePoint p) {
    return symbol_value(params, p, 1.0, 1.0, 1.0);
}

double upper_symbol(const ModelParams& params, const CoherentFrame& frame, PhasePoint p) {
    return symbol_value(params, p, frame.d1, frame.d2, frame.d3);
}

double lower_symbol(const ModelParams& params, const CoherentFrame& frame, PhasePoint p) {
    return symbol_value(params, p, 1.0 / frame.d1, 1.0 / frame.d2, 1.0 / frame.d3);
}

MinorantConstants minorant_constants(const ModelParams& params, const CoherentFrame& frame) {
    if (params.family != Family::MN)
        throw ParamError("minorant_constants requires the MN family");
    double b = params.b;
    double m = params.m, n = params.n;
    double d1 = frame.d1, d2 = frame.d2, d3 = frame.d3;
    // Quadrant case analysis for Psi = d1 e^{-2 pi b k} + d2 e^{2 pi b y}
    // + d3 e^{2 pi b (m k - n y)}, with split parameter beta = 1/2.
    //
    // Each exponential of Phi is dominated on its unbounded side by a weighted
    // geometric mean of two Psi terms (Young's inequality), choosing weights
    // that cancel the transverse coordinate:
    //   e^{ c2 y}, y >= 0: Psi >= d2 e^{2 pi b y}                rate 2 pi b
    //   e^{-c2 y}, y <= 0: Psi >= d1^th d3^{1-th} e^{2 pi b n/(m+1) (-y)},
    //                      th = m/(m+1)                          rate 2 pi b n/(m+1)
    //   e^{-c2 k}, k <= 0: Psi >= d1 e^{2 pi b (-k)}             rate 2 pi b
    //   e^{ c2 k}, k >= 0: Psi >= d3^ph d2^{1-ph} e^{2 pi b m/(n+1) k},
    //                      ph = 1/(n+1)                          rate 2 pi b m/(n+1)
    // On the bounded side each exponential is <= 1 <= Psi / min(d1,d2,d3).
    // With c2 = beta * (smallest rate) every bound above still applies (the
    // dominating exponential has a base >= 1 raised to a power >= 1), so
    // Phi <= 4 c1 Psi / D with D the smallest of the constants; c1 = beta*D/4
    // gives Phi <= Psi/2 < Psi strictly.
    const double beta = 0.5;
    double th = m / (m + 1.0);
    double ph = 1.0 / (n + 1.0);
    double rate = kTwoPi * b * std::min({1.0, n / (m + 1.0), m / (n + 1.0)});
    double D = std::min({d2,
                         std::pow(d1, th) * std::pow(d3, 1.0 - th),
                         d1,
                         std::pow(d3, ph) * std::pow(d2, 1.0 - ph),
                         std::min({d1, d2, d3})});
    MinorantConstants c;
    c.c2 = beta * rate;
    c.c1 = beta * D / 4.0;
    return c;
}

} // namespace fdspec
