#pragma once

#include "tenspec/tensor.hpp"

#include <span>
#include <string>
#include <vector>

namespace tenspec {

enum class SolveStatus { Converged, MaxIter };
enum class Certificate { GlobalCertified, StationaryOnly, Degenerate };

const char* to_string(SolveStatus s);
const char* to_string(Certificate c);

struct SolverConfig {
    double tau = 0.0;  // <= 0 selects the default: 0.1 for even order, 0.5 for odd
    double eps = 1e-4;
    int max_iter = 1000;
    bool normalize = true;
    double spectral_tol = 1e-10;
    int spectral_max_matvecs = 5000;
    bool warm_start_subproblems = true;
    bool check_invariants = false;  // track Sym(Lambda)=A and Y=Sym(X) per iteration
    bool record_factors = false;    // keep the per-iteration X factors (tests)
};

struct TraceRow {
    int iter;
    double primal_gap;  // ||X^k - Y^k||_F
    double dx;          // ||X^{k+1} - X^k||_F
    double dy_rel;      // ||Y^{k+1} - Y^k||_F / ||Y^k||_F (0 on the first iteration)
    double objective;   // <A_w, Y^{k+1}>
};

struct SolverReport {
    double eigenvalue = 0.0;  // in the original (unnormalized) scale
    std::vector<double> eigenvector;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIter;
    double residual = 0.0;  // ||A x^{o(d-1)} - sigma x||
    Certificate certificate = Certificate::StationaryOnly;
    std::vector<TraceRow> trace;
    double extraction_err = 0.0;
    // populated when cfg.check_invariants
    double max_multiplier_infeas = 0.0;  // max_k ||Sym(Lambda^k) - A_w||_F
    double max_y_inconsistency = 0.0;    // max_k ||Y^k - Sym(X^k)||_F
    // populated when cfg.record_factors; one entry per iteration
    std::vector<std::vector<double>> x_factors_left;
    std::vector<std::vector<double>> x_factors_right;  // odd order only
};

/// Leading Z-eigenpair of a symmetric tensor by the nonconvex ADMM on the
/// rank-1 matricization split. A must be symmetric and nonzero.
SolverReport solve(const DenseTensor& a, const SolverConfig& cfg = {});

/// Two-variable equivalent form of the same iteration (the Y iterate is
/// implicit as Sym(X)); produces the same iterate sequence as solve().
SolverReport solve_simplified(const DenseTensor& a, const SolverConfig& cfg = {});

/// Global-optimality check via the multiplier's matricization: certified when
/// x's Kronecker power attains the leading eigenvalue (even order) or
/// singular value (odd order) of Mat(Lambda).
Certificate certify(const DenseTensor& a_working, std::span<const double> x, int sign,
                    std::span<const double> lambda_flat, double cert_tol = 1e-6,
                    double gap_floor = 1e-8);

// || A x^{o(d-1)} - sigma x ||_2 for unit x.
double eig_residual(const DenseTensor& a, std::span<const double> x, double sigma);

void write_trace_csv(const SolverReport& report, const std::string& path);

}  // namespace tenspec
