#include <doctest.h>

#include "tenspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace tenspec;

namespace {

std::vector<double> random_sym(std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> a(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) a[i * m + j] = a[j * m + i] = g(rng);
    return a;
}

std::vector<double> random_rect(std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<double> a(r * c);
    for (auto& x : a) x = g(rng);
    return a;
}

// Dense oracle for the largest algebraic eigenvalue via Jacobi.
double top_eig_oracle(std::span<const double> a, std::size_t m, std::vector<double>* vec = nullptr) {
    std::vector<double> eval, q;
    dense_sym_evd(a, m, eval, q);
    if (vec) {
        vec->resize(m);
        for (std::size_t i = 0; i < m; ++i) (*vec)[i] = q[i * m + 0];
    }
    return eval[0];
}

double sym_residual(std::span<const double> a, std::size_t m, std::span<const double> v,
                    double theta) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += a[i * m + j] * v[j];
        s -= theta * v[i];
        r2 += s * s;
    }
    return std::sqrt(r2);
}

}  // namespace

TEST_CASE("dense_sym_evd reconstructs the matrix with orthonormal descending factors") {
    std::mt19937_64 rng(21);
    for (std::size_t m : {1u, 2u, 5u, 12u, 30u}) {
        std::vector<double> a = random_sym(m, rng);
        std::vector<double> eval, q;
        dense_sym_evd(a, m, eval, q);
        REQUIRE(eval.size() == m);
        REQUIRE(q.size() == m * m);
        for (std::size_t j = 0; j + 1 < m; ++j) CHECK(eval[j] >= eval[j + 1]);
        // Q^T Q = I
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) {
                double d = 0.0;
                for (std::size_t i = 0; i < m; ++i) d += q[i * m + j] * q[i * m + k];
                CHECK(std::abs(d - (j == k ? 1.0 : 0.0)) <= 1e-12);
            }
        // A = Q diag(eval) Q^T
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                double s = 0.0;
                for (std::size_t j = 0; j < m; ++j) s += q[i * m + j] * eval[j] * q[k * m + j];
                CHECK(std::abs(s - a[i * m + k]) <= 1e-10 * std::max(1.0, std::abs(a[i * m + k])));
            }
    }
}

TEST_CASE("leading_eigpair_sym matches the dense oracle on random symmetric matrices") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t m = 2 + rng() % 60;
        std::vector<double> a = random_sym(m, rng);
        double oracle = top_eig_oracle(a, m);
        EigenPair p = leading_eigpair_sym(dense_operator(a, m, m));
        REQUIRE(p.converged);
        CHECK(std::abs(p.value - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
        CHECK(sym_residual(a, m, p.vector, p.value) <= 1e-7 * std::max(1.0, std::abs(oracle)));
        double nrm = 0.0;
        for (double v : p.vector) nrm += v * v;
        CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("leading_eigpair_sym handles repeated eigenvalues and tiny invariant subspaces") {
    // Identity: every vector is an eigenvector; the Krylov space closes at k=1.
    std::size_t m = 25;
    std::vector<double> eye(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) eye[i * m + i] = 1.0;
    EigenPair p = leading_eigpair_sym(dense_operator(eye, m, m));
    REQUIRE(p.converged);
    CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));

    // Top eigenvalue with multiplicity 3 plus an exact-zero block.
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 9;
        std::vector<double> d(n, 0.0);
        d[0] = d[1] = d[2] = 2.5;
        d[3] = 1.0;
        // rotate by a random orthogonal basis from QR of a gaussian matrix
        std::vector<double> g = random_sym(n, rng);
        std::vector<double> eval, q;
        dense_sym_evd(g, n, eval, q);
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) a[i * n + k] += q[i * n + j] * d[j] * q[k * n + j];
        EigenPair r = leading_eigpair_sym(dense_operator(a, n, n));
        REQUIRE(r.converged);
        CHECK(std::abs(r.value - 2.5) <= 1e-8);
        CHECK(sym_residual(a, n, r.vector, r.value) <= 1e-7);
    }
}

TEST_CASE("warm starts at a non-leading eigenvector still reach the top") {
    // diag(3,2,1,...) warm-started exactly at a lower eigenvector: the method
    // must not accept the stagnant Ritz value.
    std::size_t m = 10;
    std::vector<double> a(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) a[i * m + i] = double(m - i);
    for (std::size_t bad = 1; bad < m; ++bad) {
        std::vector<double> w(m, 0.0);
        w[bad] = 1.0;
        EigenPair p = leading_eigpair_sym(dense_operator(a, m, m), kSpectralTol,
                                          kSpectralMaxMatvecs, w);
        REQUIRE(p.converged);
        CHECK(p.value == doctest::Approx(double(m)).epsilon(1e-9));
    }
}

TEST_CASE("leading_singular_triple matches the dense Gram oracle") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = 2 + rng() % 30, c = 2 + rng() % 30;
        std::vector<double> a = random_rect(r, c, rng);
        // oracle: sqrt of top eigenvalue of A^T A
        std::vector<double> gram(c * c, 0.0);
        for (std::size_t i = 0; i < c; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < r; ++k) s += a[k * c + i] * a[k * c + j];
                gram[i * c + j] = s;
            }
        double oracle = std::sqrt(std::max(0.0, top_eig_oracle(gram, c)));
        SingularTriple t = leading_singular_triple(dense_operator(a, r, c));
        REQUIRE(t.converged);
        CHECK(std::abs(t.value - oracle) <= 1e-8 * std::max(1.0, oracle));
        // M v = sigma u within tolerance
        double r2 = 0.0;
        for (std::size_t i = 0; i < r; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < c; ++j) s += a[i * c + j] * t.right[j];
            s -= t.value * t.left[i];
            r2 += s * s;
        }
        CHECK(std::sqrt(r2) <= 1e-7 * std::max(1.0, oracle));
    }
}

TEST_CASE("zero operator reports a degenerate singular triple") {
    std::vector<double> z(12, 0.0);
    SingularTriple t = leading_singular_triple(dense_operator(z, 3, 4));
    CHECK(t.degenerate);
    CHECK(t.value == doctest::Approx(0.0));
}

TEST_CASE("spectral_gap_top returns the two extreme top eigenvalues") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t m = 3 + rng() % 40;
        std::vector<double> a = random_sym(m, rng);
        std::vector<double> eval, q;
        dense_sym_evd(a, m, eval, q);
        SpectralGap g = spectral_gap_top(dense_operator(a, m, m));
        REQUIRE(g.converged);
        CHECK(std::abs(g.top - eval[0]) <= 1e-8 * std::max(1.0, std::abs(eval[0])));
        CHECK(std::abs(g.second - eval[1]) <= 1e-7 * std::max(1.0, std::abs(eval[1])));
        CHECK(g.gap == doctest::Approx(g.top - g.second).epsilon(1e-10));
    }
}

TEST_CASE("singular_gap_top returns the two leading singular values") {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t r = 3 + rng() % 20, c = 3 + rng() % 20;
        std::vector<double> a = random_rect(r, c, rng);
        std::vector<double> gram(c * c, 0.0);
        for (std::size_t i = 0; i < c; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < r; ++k) s += a[k * c + i] * a[k * c + j];
                gram[i * c + j] = s;
            }
        std::vector<double> eval, q;
        dense_sym_evd(gram, c, eval, q);
        double s1 = std::sqrt(std::max(0.0, eval[0]));
        double s2 = std::sqrt(std::max(0.0, eval[1]));
        SpectralGap g = singular_gap_top(dense_operator(a, r, c));
        REQUIRE(g.converged);
        CHECK(std::abs(g.top - s1) <= 1e-8 * std::max(1.0, s1));
        CHECK(std::abs(g.second - s2) <= 1e-6 * std::max(1.0, s2));
    }
}
