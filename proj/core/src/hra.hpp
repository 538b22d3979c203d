#pragma once

// Internal eigensolver strategy for the graded operator matrices.
//
// The truncations are positive definite with diagonals spanning tens of
// orders of magnitude. A standard dense eigensolver has absolute error
// eps * ||H||, which wipes out the physically relevant low eigenvalues.
// High relative accuracy is recovered by factoring H = L L^H (Cholesky) and
// computing the singular values of L with the preconditioned one-sided
// Jacobi SVD (LAPACK gejsv); eigenvalues are the squared singular values.
//
// When double rounding of the entries already destroys positive definiteness
// (MN family at larger basis sizes), the Cholesky step is repeated on the
// double-double copy carried by the builder and only the factor is rounded.

#include <string>
#include <vector>

#include "fdspec/quantization.hpp"

namespace fdspec::hra {

struct EigResult {
    std::vector<double> values; // ascending
    std::string method;         // "chol+jacobi", "ddchol+jacobi", "dense"
    std::vector<std::string> warnings;
};

// All eigenvalues of a Hermitian OperatorMatrix, ascending. Tries the
// Cholesky + Jacobi path, then the double-double Cholesky rebuild (when a
// refined copy is present and the size is at most dd_max_size), then falls
// back to a dense eigensolver with a warning.
EigResult hermitian_eigenvalues(const OperatorMatrix& matrix, int dd_max_size = 800);

} // namespace fdspec::hra
