#include <doctest.h>

#include "tenspec/generators.hpp"
#include "tenspec/tensor.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace tenspec;

TEST_CASE("hilbert entries follow 1/(i1+...+id-d+1)") {
    DenseTensor a = hilbert(3, 4);
    std::vector<int> idx;
    idx = {0, 0, 0};
    CHECK(a.at(idx) == doctest::Approx(1.0));
    idx = {1, 2, 3};  // 1-based (2,3,4): 1/(2+3+4-3+1) = 1/7
    CHECK(a.at(idx) == doctest::Approx(1.0 / 7.0));
    idx = {3, 3, 3};  // 1/(12-3+1) = 1/10
    CHECK(a.at(idx) == doctest::Approx(0.1));
    CHECK(is_symmetric(a, 1e-15));
}

TEST_CASE("log arctan and fraction entries follow their sums of univariate terms") {
    int n = 5;
    DenseTensor lg = log_tensor(4, n);
    DenseTensor at = arctan_tensor(4, n);
    DenseTensor fr = fraction_tensor(4, n);
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<int> idx(4);
        for (auto& i : idx) i = int(rng() % std::size_t(n));
        double elog = 0.0, eatan = 0.0, efrac = 0.0;
        for (int i0 : idx) {
            double i = double(i0 + 1);  // 1-based index value
            double s = (i0 % 2 == 0) ? -1.0 : 1.0;  // (-1)^i for 1-based i
            elog += s * std::log(i);
            eatan += std::atan(s * i / double(n));
            efrac += s / i;
        }
        CHECK(lg.at(idx) == doctest::Approx(elog).epsilon(1e-13));
        CHECK(at.at(idx) == doctest::Approx(eatan).epsilon(1e-13));
        CHECK(fr.at(idx) == doctest::Approx(efrac).epsilon(1e-13));
    }
    CHECK(is_symmetric(lg, 1e-14));
    CHECK(is_symmetric(at, 1e-14));
    CHECK(is_symmetric(fr, 1e-14));
}

TEST_CASE("random generators are symmetric and seed-deterministic") {
    DenseTensor a = random_sparse_nonneg(3, 5, 0.4, 77);
    DenseTensor b = random_sparse_nonneg(3, 5, 0.4, 77);
    DenseTensor c = random_sparse_nonneg(3, 5, 0.4, 78);
    CHECK(is_symmetric(a, 1e-12));
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical = identical && a[i] == b[i];
        differs = differs || a[i] != c[i];
    }
    CHECK(identical);
    CHECK(differs);
    int zeros = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] >= 0.0);
        CHECK(a[i] <= 1.0);
        if (a[i] == 0.0) ++zeros;
    }
    CHECK(zeros > 0);  // zero_frac=0.4 on 125 entries leaves some zero orbits

    DenseTensor g1 = random_gaussian_sym(3, 6, 123);
    DenseTensor g2 = random_gaussian_sym(3, 6, 123);
    DenseTensor g3 = random_gaussian_sym(3, 6, 124);
    CHECK(is_symmetric(g1, 1e-12));
    identical = true;
    differs = false;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        identical = identical && g1[i] == g2[i];
        differs = differs || g1[i] != g3[i];
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("from_monomials reproduces the polynomial it encodes") {
    // p(x) = 2(x1^2+x2^2+x3^2)^2 expanded, plus a mixed term
    std::vector<Monomial> terms = {
        {{4, 0, 0}, 2.0}, {{0, 4, 0}, 2.0}, {{0, 0, 4}, 2.0},
        {{2, 2, 0}, 4.0}, {{2, 0, 2}, 4.0}, {{0, 2, 2}, 4.0},
        {{1, 2, 1}, -3.0},
    };
    DenseTensor a = from_monomials(4, 3, terms);
    CHECK(is_symmetric(a, 1e-13));
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> x = {g(rng), g(rng), g(rng)};
        double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        double expect = 2.0 * r2 * r2 - 3.0 * x[0] * x[1] * x[1] * x[2];
        CHECK(rayleigh(a, x) == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("from_monomials handles odd order and a cross monomials") {
    std::vector<Monomial> terms = {{{3, 0}, 1.0}, {{1, 2}, 6.0}};
    DenseTensor a = from_monomials(3, 2, terms);
    CHECK(is_symmetric(a, 1e-14));
    std::vector<double> x = {0.7, -1.3};
    CHECK(rayleigh(a, x) ==
          doctest::Approx(x[0] * x[0] * x[0] + 6.0 * x[0] * x[1] * x[1]).epsilon(1e-12));
}
