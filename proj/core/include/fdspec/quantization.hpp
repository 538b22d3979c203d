#pragma once

// Finite Hermitian truncations of H(zeta) and H_{m,n} via two independent
// backends: a harmonic-oscillator Galerkin basis and a periodic Fourier grid.
// Oscillator entries are evaluated in double-double precision because the
// matrices are exponentially graded; rounding the entries to double can make
// the matrix numerically indefinite, which destroys the high-relative-accuracy
// eigensolver path. The extended-precision copy is kept alongside the rounded
// matrix for the Cholesky-based solver.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fdspec/dd.hpp"
#include "fdspec/model.hpp"

namespace fdspec {

struct OscillatorBasisSpec {
    int size = 100;         // N >= 2
    double omega = kTwoPi;  // basis frequency scale
    double center = 0.0;    // translation of the basis origin
};

struct GridSpec {
    double length = 16.0; // box side L in position space
    int points = 256;     // N, power of two, >= 8
    double offset = 0.0;  // grid center
    double momentum_cutoff() const { return points / (2.0 * length); }
};

enum class Backend { Oscillator, Grid };

// Column-major double-double matrix; `im` is empty for real matrices.
struct DdMatrix {
    int n = 0;
    bool complex_valued = false;
    std::vector<Dd> re;
    std::vector<Dd> im;

    Dd& real_at(int i, int j) { return re[static_cast<size_t>(j) * n + i]; }
    Dd& imag_at(int i, int j) { return im[static_cast<size_t>(j) * n + i]; }
    const Dd& real_at(int i, int j) const { return re[static_cast<size_t>(j) * n + i]; }
    const Dd& imag_at(int i, int j) const { return im[static_cast<size_t>(j) * n + i]; }

    static DdMatrix zero(int n, bool complex_valued);
};

struct OperatorMatrix {
    Eigen::MatrixXcd entries; // Hermitian, symmetrized exactly
    Backend backend = Backend::Oscillator;
    std::variant<OscillatorBasisSpec, GridSpec> resolution = OscillatorBasisSpec{};
    std::optional<ModelParams> params;
    bool is_real = false; // imaginary parts identically zero
    // Extended-precision entries when the builder provides them.
    std::shared_ptr<const DdMatrix> refined;

    int size() const { return static_cast<int>(entries.rows()); }
    std::string resolution_desc() const;
};

// Matrix of <phi_i | e^{s P + t Q} | phi_j> in the oscillator basis, from the
// closed-form ladder-operator expansion (Laguerre recurrences). Exactly
// Hermitian for real s, t.
OperatorMatrix exp_linear_matrix(double s, double t, const OscillatorBasisSpec& basis);

// Default basis center: 0 for the Zeta family; for MN the minimizer of the
// classical symbol in y at k = 0, which improves low-eigenvalue convergence.
double default_center(const ModelParams& params);

OperatorMatrix build_matrix_oscillator(const ModelParams& params, const OscillatorBasisSpec& basis);

// lambda_max configures the boundary-dominance precondition: both
// e^{2 pi b L/2} and 2 cosh(2 pi b K) must exceed 10 * lambda_max.
OperatorMatrix build_matrix_grid(const ModelParams& params, const GridSpec& grid,
                                 double lambda_max);

// Test hook: the free part U + U^{-1} alone on the grid; its eigenvalues are
// exactly {2 cosh(2 pi b k_j)}.
OperatorMatrix build_matrix_grid_free_part(double b, const GridSpec& grid);

// Binary dump, little-endian: magic "MSPC1", N: u32, backend: u8, params
// (family: u8, b: f64, zeta: f64, m: i32, n: i32), then row-major f64
// (re, im) pairs.
void write_matrix(const OperatorMatrix& matrix, const std::string& path);
OperatorMatrix read_matrix(const std::string& path);

} // namespace fdspec
