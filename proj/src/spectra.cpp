#include "tenspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace tenspec {

namespace {

constexpr int kKrylovDim = 30;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void scale(std::span<double> a, double c) {
    for (double& v : a) v *= c;
}

void axpy(double c, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

// Deterministic starting vector; unit norm.
std::vector<double> seeded_unit(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) {
        // uniform in (-1, 1)
        x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    }
    double nrm = norm2(v);
    if (nrm == 0.0) v[0] = nrm = 1.0;
    scale(v, 1.0 / nrm);
    return v;
}

// Largest-magnitude entry positive, index ties toward the smallest index.
void fix_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    if (v[best] < 0.0) scale(v, -1.0);
}

// Orthogonalize w against the columns in basis (classical Gram-Schmidt, two passes).
void reorthogonalize(std::span<double> w, const std::vector<std::vector<double>>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) axpy(-dot(w, q), q, w);
}

// Starting vectors that are (nearly) exact non-leading eigenvectors make the
// first Ritz residual vanish and would lock the iteration onto the wrong
// pair; a small deterministic perturbation keeps the Krylov space generic.
std::vector<double> perturbed_unit(std::span<const double> v, double delta, std::uint64_t seed) {
    std::vector<double> out(v.begin(), v.end());
    double nrm = norm2(out);
    if (nrm == 0.0) return seeded_unit(v.size(), seed);
    scale(out, 1.0 / nrm);
    std::vector<double> r = seeded_unit(v.size(), seed);
    axpy(delta, r, out);
    scale(out, 1.0 / norm2(out));
    return out;
}

}  // namespace

LinearOperator dense_operator(std::span<const double> m, std::size_t rows, std::size_t cols) {
    if (m.size() != rows * cols) throw std::invalid_argument("dense operator size mismatch");
    LinearOperator op;
    op.rows = rows;
    op.cols = cols;
    op.apply = [m, rows, cols](const double* x, double* y) {
        for (std::size_t r = 0; r < rows; ++r) {
            double s = 0.0;
            const double* row = m.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
            y[r] = s;
        }
    };
    op.apply_t = [m, rows, cols](const double* x, double* y) {
        for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double* row = m.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * x[r];
        }
    };
    return op;
}

EigenPair leading_eigpair_sym(const LinearOperator& m, double tol, int max_matvecs,
                              std::span<const double> warm_start) {
    if (m.rows != m.cols) throw std::invalid_argument("operator must be square");
    const std::size_t n = m.rows;
    EigenPair result;
    result.vector.assign(n, 0.0);

    std::uint64_t seed = 1;
    std::vector<double> v0;
    if (warm_start.size() == n)
        v0 = perturbed_unit(warm_start, 1e-2, seed++);
    else
        v0 = seeded_unit(n, 0x9e3779b97f4a7c15ULL);

    int matvecs = 0;
    // best exact eigenpair seen across invariant-subspace terminations
    double best_theta = 0.0;
    std::vector<double> best_vec;
    int confirms = 0;
    while (matvecs < max_matvecs) {
        std::vector<std::vector<double>> basis;
        basis.push_back(v0);
        std::vector<double> alpha, beta;
        std::vector<double> w(n);
        const int kmax = std::min<int>(kKrylovDim, static_cast<int>(n));
        bool invariant = false;
        for (int j = 0; j < kmax && matvecs < max_matvecs; ++j) {
            m.apply(basis[j].data(), w.data());
            ++matvecs;
            alpha.push_back(dot(w, basis[j]));
            reorthogonalize(w, basis);
            double b = norm2(w);

            // top Ritz pair of the (j+1)x(j+1) tridiagonal
            const int k = j + 1;
            std::vector<double> t(static_cast<std::size_t>(k) * k, 0.0);
            for (int i = 0; i < k; ++i) {
                t[i * k + i] = alpha[i];
                if (i + 1 < k) t[i * k + i + 1] = t[(i + 1) * k + i] = beta[i];
            }
            std::vector<double> eval, q;
            dense_sym_evd(t, k, eval, q);
            const double theta = eval[0];
            const double s_last = q[(k - 1) * k + 0];  // bottom entry of top Ritz vector
            const double resid = std::abs(b * s_last);
            if (resid <= tol * std::max(1.0, std::abs(theta)) && b > 1e-13) {
                std::fill(result.vector.begin(), result.vector.end(), 0.0);
                for (int i = 0; i < k; ++i) axpy(q[i * k + 0], basis[i], result.vector);
                double nrm = norm2(result.vector);
                if (nrm > 0) scale(result.vector, 1.0 / nrm);
                fix_sign(result.vector);
                result.value = theta;
                result.converged = true;
                result.matvecs = matvecs;
                return result;
            }
            if (b <= 1e-13) {
                invariant = true;
                break;
            }
            beta.push_back(b);
            scale(w, 1.0 / b);
            basis.push_back(w);
        }
        // restart from the best Ritz vector so far
        {
            const int k = static_cast<int>(alpha.size());
            std::vector<double> t(static_cast<std::size_t>(k) * k, 0.0);
            for (int i = 0; i < k; ++i) {
                t[i * k + i] = alpha[i];
                if (i + 1 < k) t[i * k + i + 1] = t[(i + 1) * k + i] = beta[i];
            }
            std::vector<double> eval, q;
            dense_sym_evd(t, k, eval, q);
            std::vector<double> ritz(n, 0.0);
            for (int i = 0; i < k; ++i) axpy(q[i * k + 0], basis[i], ritz);
            double nrm = norm2(ritz);
            if (nrm > 0) scale(ritz, 1.0 / nrm);
            result.value = eval[0];
            result.vector = ritz;
            if (invariant) {
                // b vanished: (eval[0], ritz) is an exact eigenpair of the
                // restriction to an invariant subspace, but possibly not the
                // leading one. Accept once a generically perturbed restart
                // fails to improve it (or the basis spanned the whole space).
                if (best_vec.empty() ||
                    eval[0] > best_theta + tol * std::max(1.0, std::abs(best_theta))) {
                    best_theta = eval[0];
                    best_vec = ritz;
                    confirms = 0;
                } else {
                    ++confirms;
                }
                if (k == static_cast<int>(n) || confirms >= 1) {
                    result.value = best_theta;
                    result.vector = std::move(best_vec);
                    fix_sign(result.vector);
                    result.converged = true;
                    result.matvecs = matvecs;
                    return result;
                }
                v0 = perturbed_unit(best_vec, 1e-2, seed++);
            } else {
                v0 = std::move(ritz);
            }
        }
    }
    fix_sign(result.vector);
    result.converged = false;
    result.matvecs = matvecs;
    return result;
}

SingularTriple leading_singular_triple(const LinearOperator& m, double tol, int max_matvecs,
                                       std::span<const double> warm_start) {
    if (!m.apply_t) throw std::invalid_argument("operator needs a transpose multiply");
    const std::size_t rows = m.rows, cols = m.cols;
    SingularTriple result;
    result.left.assign(rows, 0.0);
    result.right.assign(cols, 0.0);
    result.left[0] = 1.0;

    std::uint64_t seed = 1;
    std::vector<double> v0;
    if (warm_start.size() == cols)
        v0 = perturbed_unit(warm_start, 1e-2, seed++);
    else
        v0 = seeded_unit(cols, 0x9e3779b97f4a7c15ULL);
    result.right = v0;

    int matvecs = 0;
    int dead_starts = 0;
    // best exact singular pair seen across invariant-subspace terminations
    double best_sigma = -1.0;
    std::vector<double> best_right;
    int confirms = 0;
    const auto finish = [&](double sigma, std::vector<double> rv) {
        std::vector<double> lu(rows);
        m.apply(rv.data(), lu.data());
        ++matvecs;
        double lnrm = norm2(lu);
        if (lnrm > 0) scale(lu, 1.0 / lnrm);
        result.value = sigma;
        result.left = std::move(lu);
        result.right = std::move(rv);
        fix_sign(result.left);
        // slave v's sign: require M v ~ +sigma u
        std::vector<double> check(rows);
        m.apply(result.right.data(), check.data());
        ++matvecs;
        if (dot(check, result.left) < 0) scale(result.right, -1.0);
        result.converged = true;
        result.matvecs = matvecs;
    };
    while (matvecs < max_matvecs) {
        // Golub-Kahan: M V = U B, M^T U = V B^T + residual; B upper bidiagonal.
        std::vector<std::vector<double>> us, vs;
        vs.push_back(v0);
        std::vector<double> alpha, beta;
        std::vector<double> u(rows), v(cols);
        const int kmax = std::min<int>(kKrylovDim, static_cast<int>(std::min(rows, cols)));
        bool dead = false;
        bool invariant = false;
        for (int j = 0; j < kmax && matvecs < max_matvecs; ++j) {
            m.apply(vs[j].data(), u.data());
            ++matvecs;
            reorthogonalize(u, us);
            double a = norm2(u);
            if (a <= 1e-14) {
                if (j == 0) {
                    // v0 in the null space (possibly the zero matrix)
                    if (++dead_starts >= 3) {
                        result.value = 0.0;
                        result.degenerate = true;
                        result.converged = true;
                        result.matvecs = matvecs;
                        return result;
                    }
                    v0 = seeded_unit(cols, seed++);
                    dead = true;
                } else {
                    invariant = true;
                }
                break;
            }
            scale(u, 1.0 / a);
            us.push_back(u);
            alpha.push_back(a);

            m.apply_t(us[j].data(), v.data());
            ++matvecs;
            reorthogonalize(v, vs);
            double b = norm2(v);

            // top singular value of B via EVD of B^T B (k x k)
            const int k = j + 1;
            std::vector<double> btb(static_cast<std::size_t>(k) * k, 0.0);
            for (int i = 0; i < k; ++i) {
                double di = alpha[i], si = (i > 0) ? beta[i - 1] : 0.0;
                btb[i * k + i] = di * di + si * si;
                if (i + 1 < k) btb[i * k + i + 1] = btb[(i + 1) * k + i] = alpha[i] * beta[i];
            }
            std::vector<double> eval, q;
            dense_sym_evd(btb, k, eval, q);
            const double sigma = std::sqrt(std::max(eval[0], 0.0));
            const double s_last = q[(k - 1) * k + 0];
            const double resid = std::abs(b * s_last);  // ||M^T u - sigma v|| estimate
            if (sigma > 0 && resid <= tol * std::max(1.0, sigma) && b > 1e-13) {
                std::vector<double> rv(cols, 0.0);
                for (int i = 0; i < k; ++i) axpy(q[i * k + 0], vs[i], rv);
                double nrm = norm2(rv);
                if (nrm > 0) scale(rv, 1.0 / nrm);
                finish(sigma, std::move(rv));
                return result;
            }
            if (b <= 1e-13) {
                invariant = true;
                break;
            }
            beta.push_back(b);
            scale(v, 1.0 / b);
            vs.push_back(v);
        }
        if (dead) continue;
        // restart from best right Ritz vector
        const int k = static_cast<int>(alpha.size());
        if (k == 0) break;
        std::vector<double> btb(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i) {
            double di = alpha[i], si = (i > 0) ? beta[i - 1] : 0.0;
            btb[i * k + i] = di * di + si * si;
            if (i + 1 < k && i < static_cast<int>(beta.size()))
                btb[i * k + i + 1] = btb[(i + 1) * k + i] = alpha[i] * beta[i];
        }
        std::vector<double> eval, q;
        dense_sym_evd(btb, k, eval, q);
        std::vector<double> rv(cols, 0.0);
        for (int i = 0; i < k; ++i) axpy(q[i * k + 0], vs[i], rv);
        double nrm = norm2(rv);
        if (nrm > 0) scale(rv, 1.0 / nrm);
        result.value = std::sqrt(std::max(eval[0], 0.0));
        result.right = rv;
        if (invariant) {
            // the bidiagonalization closed on an invariant subspace: the top
            // Ritz pair is an exact singular pair of the restriction, but
            // possibly not the leading one. Accept once a generically
            // perturbed restart fails to improve it.
            const double sigma = result.value;
            if (best_right.empty() || sigma > best_sigma + tol * std::max(1.0, best_sigma)) {
                best_sigma = sigma;
                best_right = rv;
                confirms = 0;
            } else {
                ++confirms;
            }
            if (k == static_cast<int>(std::min(rows, cols)) || confirms >= 1) {
                finish(best_sigma, std::move(best_right));
                return result;
            }
            v0 = perturbed_unit(best_right, 1e-2, seed++);
        } else {
            v0 = std::move(rv);
        }
    }
    result.converged = false;
    result.matvecs = matvecs;
    return result;
}

void dense_sym_evd(std::span<const double> m_data, std::size_t m, std::vector<double>& eigenvalues,
                   std::vector<double>& q) {
    if (m_data.size() != m * m) throw std::invalid_argument("matrix size mismatch");
    std::vector<double> a(m_data.begin(), m_data.end());
    q.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) q[i * m + i] = 1.0;

    double fro = 0.0;
    for (double v : a) fro += v * v;
    fro = std::sqrt(fro);
    const double stop = 1e-30 + 1e-28 * fro * fro;

    // cyclic Jacobi
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t r = p + 1; r < m; ++r) off += a[p * m + r] * a[p * m + r];
        if (off <= stop) break;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t r = p + 1; r < m; ++r) {
                const double apq = a[p * m + r];
                if (std::abs(apq) < 1e-300) continue;
                const double app = a[p * m + p], aqq = a[r * m + r];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    const double aip = a[i * m + p], aiq = a[i * m + r];
                    a[i * m + p] = c * aip - s * aiq;
                    a[i * m + r] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double api = a[p * m + i], aqi = a[r * m + i];
                    a[p * m + i] = c * api - s * aqi;
                    a[r * m + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const double qip = q[i * m + p], qiq = q[i * m + r];
                    q[i * m + p] = c * qip - s * qiq;
                    q[i * m + r] = s * qip + c * qiq;
                }
            }
        }
    }
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a[i * m + i] > a[j * m + j]; });
    eigenvalues.resize(m);
    std::vector<double> qs(m * m);
    for (std::size_t j = 0; j < m; ++j) {
        eigenvalues[j] = a[order[j] * m + order[j]];
        for (std::size_t i = 0; i < m; ++i) qs[i * m + j] = q[i * m + order[j]];
    }
    q = std::move(qs);
}

SpectralGap spectral_gap_top(const LinearOperator& m, double tol, int max_matvecs) {
    if (m.rows != m.cols) throw std::invalid_argument("operator must be square");
    const std::size_t n = m.rows;
    SpectralGap g;
    if (n == 1) {
        std::vector<double> x{1.0}, y{0.0};
        m.apply(x.data(), y.data());
        g.top = y[0];
        g.second = y[0];
        g.gap = 0.0;
        g.converged = true;
        return g;
    }
    if (n <= 400) {
        std::vector<double> dense(n * n);
        std::vector<double> e(n, 0.0), col(n);
        for (std::size_t j = 0; j < n; ++j) {
            e[j] = 1.0;
            m.apply(e.data(), col.data());
            e[j] = 0.0;
            for (std::size_t i = 0; i < n; ++i) dense[i * n + j] = col[i];
        }
        std::vector<double> eval, q;
        dense_sym_evd(dense, n, eval, q);
        g.top = eval[0];
        g.second = eval[1];
        g.gap = std::max(0.0, g.top - g.second);
        g.converged = true;
        return g;
    }
    EigenPair top = leading_eigpair_sym(m, tol, max_matvecs);
    EigenPair bottom = leading_eigpair_sym(
        LinearOperator{n, n,
                       [&m, n](const double* x, double* y) {
                           m.apply(x, y);
                           for (std::size_t i = 0; i < n; ++i) y[i] = -y[i];
                       },
                       nullptr},
        tol, max_matvecs);
    // shift the top eigenvector below the bottom of the spectrum, then the
    // leading algebraic eigenvalue of the deflated operator is the second one
    const double shift = top.value + std::abs(bottom.value) + 1.0;
    const std::vector<double> v1 = top.vector;
    LinearOperator defl{n, n,
                        [&m, &v1, shift, n](const double* x, double* y) {
                            m.apply(x, y);
                            double c = 0.0;
                            for (std::size_t i = 0; i < n; ++i) c += v1[i] * x[i];
                            for (std::size_t i = 0; i < n; ++i) y[i] -= shift * c * v1[i];
                        },
                        nullptr};
    EigenPair second = leading_eigpair_sym(defl, tol, max_matvecs);
    g.top = top.value;
    g.second = second.value;
    g.gap = std::max(0.0, g.top - g.second);
    g.converged = top.converged && second.converged && bottom.converged;
    return g;
}

SpectralGap singular_gap_top(const LinearOperator& m, double tol, int max_matvecs) {
    if (!m.apply_t) throw std::invalid_argument("operator needs a transpose multiply");
    const std::size_t rows = m.rows;
    SpectralGap g;
    if (rows <= 400) {
        // dense EVD of M M^T
        std::vector<double> gram(rows * rows);
        std::vector<double> e(rows, 0.0), t(m.cols), col(rows);
        for (std::size_t j = 0; j < rows; ++j) {
            e[j] = 1.0;
            m.apply_t(e.data(), t.data());
            m.apply(t.data(), col.data());
            e[j] = 0.0;
            for (std::size_t i = 0; i < rows; ++i) gram[i * rows + j] = col[i];
        }
        std::vector<double> eval, q;
        dense_sym_evd(gram, rows, eval, q);
        g.top = std::sqrt(std::max(eval[0], 0.0));
        g.second = rows > 1 ? std::sqrt(std::max(eval[1], 0.0)) : g.top;
        g.gap = std::max(0.0, g.top - g.second);
        g.converged = true;
        return g;
    }
    SingularTriple top = leading_singular_triple(m, tol, max_matvecs);
    const std::vector<double> u1 = top.left, w1 = top.right;
    const double s1 = top.value;
    LinearOperator defl;
    defl.rows = rows;
    defl.cols = m.cols;
    defl.apply = [&m, &u1, &w1, s1, rows](const double* x, double* y) {
        m.apply(x, y);
        double c = 0.0;
        for (std::size_t i = 0; i < w1.size(); ++i) c += w1[i] * x[i];
        for (std::size_t i = 0; i < rows; ++i) y[i] -= s1 * c * u1[i];
    };
    defl.apply_t = [&m, &u1, &w1, s1](const double* x, double* y) {
        m.apply_t(x, y);
        double c = 0.0;
        for (std::size_t i = 0; i < u1.size(); ++i) c += u1[i] * x[i];
        for (std::size_t i = 0; i < w1.size(); ++i) y[i] -= s1 * c * w1[i];
    };
    SingularTriple second = leading_singular_triple(defl, tol, max_matvecs);
    g.top = top.value;
    g.second = second.value;
    g.gap = std::max(0.0, g.top - g.second);
    g.converged = top.converged && second.converged;
    return g;
}

}  // namespace tenspec
