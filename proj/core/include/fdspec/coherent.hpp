#pragma once

// Numerical coherent-state transform psi~(k,y) = int e^{-2 pi i k x} g(x-y)
// psi(x) dx and direct verification of the phase-space representation
// identities (Plancherel, the anti-Wick quadratic-form equality, and the
// closed-form lower symbol).

#include <complex>

#include <Eigen/Dense>

#include "fdspec/model.hpp"
#include "fdspec/quantization.hpp"

namespace fdspec {

// Finite combination of oscillator basis functions.
struct TestFunction {
    Eigen::VectorXcd coeffs;
    OscillatorBasisSpec basis;

    double norm_squared() const { return coeffs.squaredNorm(); }

    // The k = 0 coherent state g(x - y) as a basis ground state (basis
    // frequency equal to the frame exponent).
    static TestFunction ground_coherent(const CoherentFrame& frame, double y);
};

// Value of psi at a real or complex point (entire continuation of the
// Hermite-Gaussian basis functions).
std::complex<double> test_function_value(const TestFunction& psi, std::complex<double> x);

// Pointwise transform by adaptive quadrature; absolute error <= 1e-10.
std::complex<double> coherent_transform(const TestFunction& psi, const CoherentFrame& frame,
                                        PhasePoint p);

// Transform of x -> e^{-rate x} psi(x). With rate = pi b n it satisfies the
// completing-the-square identity
//   result = e^{rate^2/(2a) - rate y} psi~(k, y - rate / a).
std::complex<double> coherent_transform_weighted(const TestFunction& psi,
                                                 const CoherentFrame& frame, double rate,
                                                 PhasePoint p);

struct PlancherelResult {
    double lhs = 0.0; // 2D quadrature of |psi~|^2
    double rhs = 0.0; // norm from coefficients
    bool pass = false;
};

// Contract: |lhs - rhs| <= 1e-8 * rhs (absolute slack for the zero function).
PlancherelResult plancherel_check(const TestFunction& psi, const CoherentFrame& frame);

// 2D adaptive quadrature of upper_symbol * |psi~|^2; equals <H psi, psi>
// exactly (the representation identity, not a bound).
double quadratic_form_phase_space(const TestFunction& psi, const ModelParams& params,
                                  const CoherentFrame& frame);

struct LowerSymbolCheck {
    double quadrature = 0.0;  // <H e_{k,y}, e_{k,y}> via explicit Gaussian integrals
    double closed_form = 0.0; // model lower_symbol
    bool pass = false;        // agreement to 1e-8 relative
};

LowerSymbolCheck lower_symbol_direct(const ModelParams& params, const CoherentFrame& frame,
                                     PhasePoint p);

} // namespace fdspec
