#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tenspec {

/// Matrix-free linear operator. apply computes y = M x; apply_t computes
/// y = M^T x and may be omitted for symmetric operators.
struct LinearOperator {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::function<void(const double*, double*)> apply;
    std::function<void(const double*, double*)> apply_t;
};

LinearOperator dense_operator(std::span<const double> m, std::size_t rows, std::size_t cols);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    bool converged = false;
    int matvecs = 0;
};

struct SingularTriple {
    double value = 0.0;
    std::vector<double> left;
    std::vector<double> right;
    bool converged = false;
    bool degenerate = false;  // zero (or numerically zero) operator
    int matvecs = 0;
};

struct SpectralGap {
    double top = 0.0;
    double second = 0.0;
    double gap = 0.0;
    bool converged = false;
};

inline constexpr double kSpectralTol = 1e-10;
inline constexpr int kSpectralMaxMatvecs = 5000;

/// Largest *algebraic* eigenvalue of a symmetric operator, by Lanczos with
/// full reorthogonalization (Krylov dimension <= 30 per restart). The sign
/// of the returned vector is fixed so its largest-magnitude entry is
/// positive (ties toward the smallest index).
EigenPair leading_eigpair_sym(const LinearOperator& m, double tol = kSpectralTol,
                              int max_matvecs = kSpectralMaxMatvecs,
                              std::span<const double> warm_start = {});

/// Leading singular triple by Golub-Kahan bidiagonalization with full
/// reorthogonalization. Sign convention: largest-magnitude entry of u
/// positive; v slaved so that M v = sigma u.
SingularTriple leading_singular_triple(const LinearOperator& m, double tol = kSpectralTol,
                                       int max_matvecs = kSpectralMaxMatvecs,
                                       std::span<const double> warm_start = {});

/// Full spectrum of a small symmetric matrix by cyclic Jacobi rotations.
/// eigenvalues come out descending; q holds the orthonormal eigenvectors
/// column-wise (q[i*m+j] = entry (i,j), column j pairs with eigenvalues[j]).
void dense_sym_evd(std::span<const double> m_data, std::size_t m,
                   std::vector<double>& eigenvalues, std::vector<double>& q);

/// Top two algebraic eigenvalues of a symmetric operator. Dense path for
/// m <= 400, deflated Lanczos beyond.
SpectralGap spectral_gap_top(const LinearOperator& m, double tol = kSpectralTol,
                             int max_matvecs = kSpectralMaxMatvecs);

/// Top two singular values of a rectangular operator.
SpectralGap singular_gap_top(const LinearOperator& m, double tol = kSpectralTol,
                             int max_matvecs = kSpectralMaxMatvecs);

}  // namespace tenspec
