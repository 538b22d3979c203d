#pragma once

// Parameter objects, classical symbols, coherent-frame constants and
// upper/lower symbols for the two operator families
//   H(zeta)  = U + U^{-1} + V + zeta V^{-1}
//   H_{m,n}  = U + V + q^{-mn} U^{-m} V^{-n}
// with U = e^{-bP}, V = e^{2 pi b Q}. Everything here is a pure function of
// the parameters; every other module consumes this layer.

#include <numbers>

#include "fdspec/errors.hpp"

namespace fdspec {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Family { Zeta, MN };

struct ModelParams {
    Family family = Family::Zeta;
    double b = 1.0;    // deformation parameter, b > 0
    double zeta = 1.0; // Zeta family only, zeta >= 0
    int m = 1, n = 1;  // MN family only, m, n >= 1

    static ModelParams zeta_family(double b, double zeta);
    static ModelParams mn_family(double b, int m, int n);

    // Rigorous lower bound on the spectrum known a priori: 2 for the Zeta
    // family, 0 for the MN family (strict positivity asserted post-solve).
    double spectral_floor() const { return family == Family::Zeta ? 2.0 : 0.0; }
};

// Gaussian window g(x) = (a/pi)^{1/4} e^{-a x^2 / 2} and derived contraction
// constants. d3 is only meaningful for the MN family.
struct CoherentFrame {
    double a;
    double d1; // e^{-a b^2 / 4}
    double d2; // e^{-(pi b)^2 / a}
    double d3; // d1^{m^2} d2^{n^2}
};

struct PhasePoint {
    double k = 0.0; // momentum coordinate
    double y = 0.0; // position coordinate
};

CoherentFrame coherent_constants(const ModelParams& params, double a = kTwoPi);

// Zeta: 2 cosh(2 pi b k) + e^{2 pi b y} + zeta e^{-2 pi b y}
// MN:   e^{-2 pi b k} + e^{2 pi b y} + e^{2 pi b (m k - n y)}
double classical_symbol(const ModelParams& params, PhasePoint p);

// Same term structure with each term scaled by its d-constant (anti-Wick /
// covariant weights). upper < classical < lower pointwise.
double upper_symbol(const ModelParams& params, const CoherentFrame& frame, PhasePoint p);
double lower_symbol(const ModelParams& params, const CoherentFrame& frame, PhasePoint p);

// Constants of the exponential minorant Phi(k,y) = c1 (e^{-c2 k} + e^{c2 k} +
// e^{-c2 y} + e^{c2 y}) satisfying Psi > Phi pointwise, where Psi is the MN
// upper symbol. Yields the operator lower bound c = 4 c1 > 0.
struct MinorantConstants {
    double c1;
    double c2;
    double operator_bound() const { return 4.0 * c1; }
};

MinorantConstants minorant_constants(const ModelParams& params, const CoherentFrame& frame);

} // namespace fdspec
