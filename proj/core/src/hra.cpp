#include "hra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <lapacke.h>

#include "fdspec/errors.hpp"

namespace fdspec::hra {

namespace {

// Singular values of a square real matrix via the preconditioned Jacobi SVD,
// descending order. Returns false if the routine did not converge.
bool jacobi_singular_values(Eigen::MatrixXd A, std::vector<double>& sva) {
    const int n = static_cast<int>(A.rows());
    sva.assign(n, 0.0);
    std::vector<double> u(1), v(1), stat(7, 0.0);
    std::vector<lapack_int> istat(3, 0);
    lapack_int info = LAPACKE_dgejsv(LAPACK_COL_MAJOR, 'F', 'N', 'N', 'R', 'N', 'P',
                                     n, n, A.data(), n, sva.data(),
                                     u.data(), 1, v.data(), 1,
                                     stat.data(), istat.data());
    if (info != 0) return false;
    if (stat[1] != 0.0 && stat[0] != stat[1]) {
        double scale = stat[0] / stat[1];
        for (double& s : sva) s *= scale;
    }
    return true;
}

// Embed a complex factor as [[Re, -Im], [Im, Re]]; its singular values are
// those of the complex matrix, each doubled.
Eigen::MatrixXd embed_real(const Eigen::MatrixXcd& L) {
    const int n = static_cast<int>(L.rows());
    Eigen::MatrixXd E(2 * n, 2 * n);
    E.topLeftCorner(n, n) = L.real();
    E.topRightCorner(n, n) = -L.imag();
    E.bottomLeftCorner(n, n) = L.imag();
    E.bottomRightCorner(n, n) = L.real();
    return E;
}

std::vector<double> eigs_from_factor_real(const Eigen::MatrixXd& L) {
    std::vector<double> sva;
    if (!jacobi_singular_values(L, sva)) return {};
    std::vector<double> ev(sva.size());
    for (size_t i = 0; i < sva.size(); ++i) ev[i] = sva[i] * sva[i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> eigs_from_factor_complex(const Eigen::MatrixXcd& L) {
    std::vector<double> sva;
    if (!jacobi_singular_values(embed_real(L), sva)) return {};
    // Descending, pairwise duplicated; average each pair.
    const size_t n = sva.size() / 2;
    std::vector<double> ev(n);
    for (size_t i = 0; i < n; ++i) {
        double s = 0.5 * (sva[2 * i] + sva[2 * i + 1]);
        ev[i] = s * s;
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Double-double Cholesky of the refined copy; the factor is rounded to
// double. Returns false on a nonpositive pivot.
bool dd_cholesky(const DdMatrix& A, Eigen::MatrixXcd& L, bool& is_real) {
    const int n = A.n;
    is_real = !A.complex_valued;
    std::vector<DdComplex> W(static_cast<size_t>(n) * n);
    auto at = [&](int i, int j) -> DdComplex& { return W[static_cast<size_t>(j) * n + i]; };
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i)
            at(i, j) = A.complex_valued
                           ? DdComplex{A.real_at(i, j), A.imag_at(i, j)}
                           : DdComplex{A.real_at(i, j)};
    for (int j = 0; j < n; ++j) {
        Dd d = at(j, j).re;
        for (int k = 0; k < j; ++k) d -= dd_norm2(at(j, k));
        if (!(d.hi > 0.0)) return false;
        Dd root = dd_sqrt(d);
        at(j, j) = DdComplex{root};
        for (int i = j + 1; i < n; ++i) {
            DdComplex s = at(i, j);
            for (int k = 0; k < j; ++k) s -= at(i, k) * dd_conj(at(j, k));
            at(i, j) = s / root;
        }
    }
    L = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i)
            L(i, j) = {at(i, j).re.to_double(), at(i, j).im.to_double()};
    return true;
}

std::vector<double> dense_fallback(const OperatorMatrix& M, bool real) {
    if (real) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.entries.real(),
                                                          Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
        return {es.eigenvalues().data(), es.eigenvalues().data() + M.size()};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M.entries, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + M.size()};
}

} // namespace

EigResult hermitian_eigenvalues(const OperatorMatrix& matrix, int dd_max_size) {
    EigResult res;
    const int n = matrix.size();
    if (n == 0) throw ParamError("empty matrix");

    // Plain double Cholesky on the (correctly rounded) entries.
    if (matrix.is_real) {
        Eigen::LLT<Eigen::MatrixXd> llt(matrix.entries.real());
        if (llt.info() == Eigen::Success) {
            auto ev = eigs_from_factor_real(llt.matrixL());
            if (!ev.empty()) {
                res.values = std::move(ev);
                res.method = "chol+jacobi";
                return res;
            }
            res.warnings.push_back("jacobi SVD did not converge");
        }
    } else {
        Eigen::LLT<Eigen::MatrixXcd> llt(matrix.entries);
        if (llt.info() == Eigen::Success) {
            auto ev = eigs_from_factor_complex(llt.matrixL());
            if (!ev.empty()) {
                res.values = std::move(ev);
                res.method = "chol+jacobi";
                return res;
            }
            res.warnings.push_back("jacobi SVD did not converge");
        }
    }

    // Double rounding can make the matrix indefinite even though the exact
    // truncation is positive definite; redo the factorization in extended
    // precision when the builder kept the entries.
    if (matrix.refined && n <= dd_max_size) {
        Eigen::MatrixXcd L;
        bool factor_real = false;
        if (dd_cholesky(*matrix.refined, L, factor_real)) {
            auto ev = factor_real ? eigs_from_factor_real(L.real())
                                  : eigs_from_factor_complex(L);
            if (!ev.empty()) {
                res.values = std::move(ev);
                res.method = "ddchol+jacobi";
                return res;
            }
            res.warnings.push_back("jacobi SVD did not converge on dd factor");
        } else {
            res.warnings.push_back("extended-precision Cholesky found a nonpositive pivot");
        }
    }

    res.values = dense_fallback(matrix, matrix.is_real);
    res.method = "dense";
    res.warnings.push_back(
        "dense eigensolver fallback: small eigenvalues carry absolute (not relative) error");
    return res;
}

} // namespace fdspec::hra
