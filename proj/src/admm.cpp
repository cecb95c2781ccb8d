#include "tenspec/admm.hpp"

#include "tenspec/rank1.hpp"
#include "tenspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace tenspec {

namespace {

// dual (multiplier) step length as a multiple of tau
constexpr double kDualStepScale = 1.5;

// below this matricization size the spectral subproblem is solved with the
// dense Jacobi eigensolver, which is exact and has deterministic behaviour
// at (near-)degenerate leading eigenvalues; the iterative solvers take over
// for larger problems
constexpr std::size_t kDenseSubproblemDim = 128;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double diff_norm(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double e = a[i] - b[i];
        s += e * e;
    }
    return std::sqrt(s);
}

double vec_norm(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

// X = Ten(z1 z2^T), flat entry (r,c) at r*cols + c.
void materialize(std::span<const double> z1, std::span<const double> z2,
                 std::span<double> out) {
    const std::size_t cols = z2.size();
    for (std::size_t i = 0; i < z1.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = z1[i] * z2[j];
}

SolverReport run(const DenseTensor& a, const SolverConfig& cfg, bool simplified) {
    const int d = a.order();
    const int n = a.dim();
    if (d < 2) throw std::invalid_argument("solver requires order >= 2");
    const double a_norm = frob_norm(a);
    if (a_norm == 0.0) throw std::invalid_argument("solver requires a nonzero tensor");
    if (!is_symmetric(a, 1e-8 * std::max(1.0, a_norm)))
        throw std::invalid_argument("solver requires a symmetric tensor");

    const bool even = (d % 2 == 0);
    const double tau = (cfg.tau > 0.0) ? cfg.tau : (even ? 0.1 : 0.5);
    if (cfg.eps <= 0.0) throw std::invalid_argument("eps must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

    DenseTensor aw = a;
    if (cfg.normalize)
        for (double& v : aw.data()) v /= a_norm;

    const std::size_t rows = pow_size(n, d / 2);
    const std::size_t cols = pow_size(n, d - d / 2);
    const std::size_t total = aw.size();

    // X^0 = 0, Y^0 = 0, Lambda^0 = A_w
    std::vector<double> lambda(aw.data().begin(), aw.data().end());
    std::vector<double> y(total, 0.0);
    std::vector<double> x_mat(total, 0.0);
    std::vector<double> w(total, 0.0);
    std::vector<double> z1, z2;  // unit factors of X; z2 used for odd order only
    bool have_x = false;

    SolverReport rep;
    rep.trace.reserve(static_cast<std::size_t>(std::min(cfg.max_iter, 1 << 16)));

    for (int k = 0; k < cfg.max_iter; ++k) {
        // W = Mat(Lambda^k + tau Y^k)
        for (std::size_t i = 0; i < total; ++i) w[i] = lambda[i] + tau * y[i];
        LinearOperator op = dense_operator(w, rows, cols);

        const double sub_tol = cfg.spectral_tol;

        double dx;
        if (even) {
            std::vector<double> z_next;
            if (rows <= kDenseSubproblemDim) {
                std::vector<double> ws(rows * rows);
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < rows; ++j)
                        ws[i * rows + j] = 0.5 * (w[i * cols + j] + w[j * cols + i]);
                std::vector<double> eval, q;
                dense_sym_evd(ws, rows, eval, q);
                z_next.resize(rows);
                for (std::size_t i = 0; i < rows; ++i) z_next[i] = q[i * rows + 0];
            } else {
                std::span<const double> warm =
                    (cfg.warm_start_subproblems && have_x) ? std::span<const double>(z1)
                                                           : std::span<const double>();
                EigenPair ep =
                    leading_eigpair_sym(op, sub_tol, cfg.spectral_max_matvecs, warm);
                z_next = std::move(ep.vector);
            }
            dx = have_x ? std::sqrt(std::max(0.0, 2.0 - 2.0 * dot(z_next, z1) *
                                                            dot(z_next, z1)))
                        : 1.0;
            z1 = std::move(z_next);
            z2 = z1;
        } else if (std::min(rows, cols) <= kDenseSubproblemDim) {
            // dense normal-equations SVD on the smaller side
            const bool tall = (cols < rows);
            const std::size_t m = tall ? cols : rows;  // size of the Gram matrix
            std::vector<double> g(m * m, 0.0);
            if (tall) {
                // G = W^T W
                for (std::size_t r = 0; r < rows; ++r)
                    for (std::size_t i = 0; i < cols; ++i) {
                        const double wri = w[r * cols + i];
                        if (wri == 0.0) continue;
                        for (std::size_t j = 0; j < cols; ++j)
                            g[i * cols + j] += wri * w[r * cols + j];
                    }
            } else {
                // G = W W^T
                for (std::size_t i = 0; i < rows; ++i)
                    for (std::size_t j = 0; j < rows; ++j) {
                        double s = 0.0;
                        for (std::size_t c = 0; c < cols; ++c)
                            s += w[i * cols + c] * w[j * cols + c];
                        g[i * rows + j] = s;
                    }
            }
            std::vector<double> eval, q;
            dense_sym_evd(g, m, eval, q);
            const double sigma = std::sqrt(std::max(eval[0], 0.0));
            if (sigma <= 1e-13) {
                // W vanished: any unit rank-1 X is optimal, keep the iterate
                dx = 0.0;
                if (!have_x) {
                    z1.assign(rows, 0.0);
                    z2.assign(cols, 0.0);
                    z1[0] = 1.0;
                    z2[0] = 1.0;
                }
            } else {
                std::vector<double> zn1(rows), zn2(cols);
                if (tall) {
                    for (std::size_t j = 0; j < cols; ++j) zn2[j] = q[j * cols + 0];
                    op.apply(zn2.data(), zn1.data());
                    const double nr = vec_norm(zn1);
                    for (double& v : zn1) v /= nr;
                } else {
                    for (std::size_t i = 0; i < rows; ++i) zn1[i] = q[i * rows + 0];
                    op.apply_t(zn1.data(), zn2.data());
                    const double nr = vec_norm(zn2);
                    for (double& v : zn2) v /= nr;
                }
                dx = have_x ? std::sqrt(std::max(
                                  0.0, 2.0 - 2.0 * dot(zn1, z1) * dot(zn2, z2)))
                            : 1.0;
                z1 = std::move(zn1);
                z2 = std::move(zn2);
            }
        } else {
            std::span<const double> warm =
                (cfg.warm_start_subproblems && have_x) ? std::span<const double>(z2)
                                                       : std::span<const double>();
            SingularTriple st = leading_singular_triple(op, sub_tol,
                                                        cfg.spectral_max_matvecs, warm);
            if (st.degenerate) {
                // keep the previous iterate; any unit rank-1 X is optimal here
                dx = 0.0;
                if (!have_x) {
                    z1.assign(rows, 0.0);
                    z2.assign(cols, 0.0);
                    z1[0] = 1.0;
                    z2[0] = 1.0;
                }
            } else {
                dx = have_x ? std::sqrt(std::max(
                                  0.0, 2.0 - 2.0 * dot(st.left, z1) * dot(st.right, z2)))
                            : 1.0;
                z1 = std::move(st.left);
                z2 = std::move(st.right);
            }
        }
        have_x = true;
        materialize(z1, even ? std::span<const double>(z1) : std::span<const double>(z2),
                    x_mat);

        // Y^{k+1} = tau^{-1} Sym(A_w - Lambda^k + tau X^{k+1}); since
        // Sym(Lambda^k) = A_w this reduces to Sym(X^{k+1}).
        const double y_prev_norm = vec_norm(y);
        DenseTensor y_next(d, n);
        if (simplified) {
            y_next = symmetrize(tensorize(x_mat, d, n));
        } else {
            DenseTensor t(d, n);
            for (std::size_t i = 0; i < total; ++i)
                t[i] = (aw[i] - lambda[i]) / tau + x_mat[i];
            y_next = symmetrize(t);
        }
        const double dy = diff_norm(y_next.data(), y);
        const double dy_rel = (y_prev_norm > 0.0) ? dy / y_prev_norm : 0.0;
        for (std::size_t i = 0; i < total; ++i) y[i] = y_next[i];

        // Lambda^{k+1} = Lambda^k - 1.5 tau (X^{k+1} - Y^{k+1}).
        // The dual step length 1.5 tau lies inside the classical convergent
        // range (0, (1+sqrt(5))/2 tau) for two-block ADMM and is what the
        // reference results were produced with.
        for (std::size_t i = 0; i < total; ++i)
            lambda[i] -= kDualStepScale * tau * (x_mat[i] - y[i]);

        const double primal_gap = diff_norm(x_mat, y);
        const double objective = dot(aw.data(), y);
        rep.trace.push_back({k + 1, primal_gap, dx, dy_rel, objective});
        rep.iterations = k + 1;

        if (cfg.check_invariants) {
            DenseTensor lam_t = tensorize(lambda, d, n);
            DenseTensor lam_sym = symmetrize(lam_t);
            double infeas = 0.0;
            for (std::size_t i = 0; i < total; ++i)
                infeas += (lam_sym[i] - aw[i]) * (lam_sym[i] - aw[i]);
            rep.max_multiplier_infeas =
                std::max(rep.max_multiplier_infeas, std::sqrt(infeas));
            DenseTensor x_sym = symmetrize(tensorize(x_mat, d, n));
            rep.max_y_inconsistency =
                std::max(rep.max_y_inconsistency, diff_norm(x_sym.data(), y));
        }
        if (cfg.record_factors) {
            rep.x_factors_left.push_back(z1);
            if (!even) rep.x_factors_right.push_back(z2);
        }

        const double stop = std::max(primal_gap, std::max(dx, dy_rel));
        if (stop <= cfg.eps) {
            rep.status = SolveStatus::Converged;
            break;
        }
    }

    Rank1Extract extr = even ? extract_from_factor(z1, {}, d, n)
                             : extract_from_factor(z1, z2, d, n);
    rep.eigenvector = std::move(extr.x);
    if (!even && extr.sign < 0)
        for (double& v : rep.eigenvector) v = -v;
    rep.extraction_err = extr.err;

    rep.eigenvalue = rayleigh(a, rep.eigenvector);
    rep.residual = eig_residual(a, rep.eigenvector, rep.eigenvalue);
    rep.certificate = certify(aw, rep.eigenvector, 1, lambda);
    return rep;
}

}  // namespace

const char* to_string(SolveStatus s) {
    return s == SolveStatus::Converged ? "converged" : "max-iter";
}

const char* to_string(Certificate c) {
    switch (c) {
        case Certificate::GlobalCertified: return "global";
        case Certificate::Degenerate: return "degenerate";
        default: return "stationary";
    }
}

SolverReport solve(const DenseTensor& a, const SolverConfig& cfg) {
    return run(a, cfg, false);
}

SolverReport solve_simplified(const DenseTensor& a, const SolverConfig& cfg) {
    return run(a, cfg, true);
}

Certificate certify(const DenseTensor& a_working, std::span<const double> x, int sign,
                    std::span<const double> lambda_flat, double cert_tol, double gap_floor) {
    const int d = a_working.order();
    const int n = a_working.dim();
    const std::size_t rows = pow_size(n, d / 2);
    const std::size_t cols = pow_size(n, d - d / 2);
    if (lambda_flat.size() != rows * cols)
        throw std::invalid_argument("multiplier size mismatch");

    LinearOperator op = dense_operator(lambda_flat, rows, cols);
    double top, gap;
    double attained;
    std::vector<double> tmp(rows, 0.0);
    if (d % 2 == 0) {
        SpectralGap g = spectral_gap_top(op);
        top = g.top;
        gap = g.gap;
        DenseTensor u = outer_power(x, d / 2);
        op.apply(u.data().data(), tmp.data());
        attained = dot(u.data(), tmp);
    } else {
        SpectralGap g = singular_gap_top(op);
        top = g.top;
        gap = g.gap;
        DenseTensor u = outer_power(x, d / 2);
        DenseTensor v = outer_power(x, d - d / 2);
        op.apply(v.data().data(), tmp.data());
        attained = sign * dot(u.data(), tmp);
    }
    const double tol = cert_tol * std::max(1.0, std::abs(top));
    if (top - attained <= tol) return Certificate::GlobalCertified;
    if (gap <= gap_floor) return Certificate::Degenerate;
    return Certificate::StationaryOnly;
}

double eig_residual(const DenseTensor& a, std::span<const double> x, double sigma) {
    std::vector<double> ax = apply(a, x);
    double s = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double e = ax[i] - sigma * x[i];
        s += e * e;
    }
    return std::sqrt(s);
}

void write_trace_csv(const SolverReport& report, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open trace file: " + path);
    std::fputs("iter,primal_gap,dx,dy_rel,objective\n", f);
    for (const TraceRow& r : report.trace)
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.primal_gap, r.dx, r.dy_rel,
                     r.objective);
    std::fclose(f);
}

}  // namespace tenspec
