#include "tenspec/generators.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tenspec {

namespace {

// Visits every index tuple (0-based, odometer order) together with its
// linear offset.
template <typename F>
void for_each_tuple(int order, int dim, F&& f) {
    std::vector<int> idx(order, 0);
    const std::size_t total = pow_size(dim, order);
    for (std::size_t lin = 0; lin < total; ++lin) {
        f(lin, idx);
        for (int k = order - 1; k >= 0; --k) {
            if (++idx[k] < dim) break;
            idx[k] = 0;
        }
    }
}

template <typename Term>
DenseTensor separable_tensor(int order, int dim, Term&& term) {
    DenseTensor a(order, dim);
    for_each_tuple(order, dim, [&](std::size_t lin, const std::vector<int>& idx) {
        double s = 0.0;
        for (int k = 0; k < order; ++k) s += term(idx[k] + 1);
        a[lin] = s;
    });
    return a;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(std::mt19937_64& rng) {
    // Box-Muller; uses the generator's own uniforms so the stream is
    // reproducible across standard libraries.
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Fills every permutation position of the orbit of the (sorted) tuple.
void fill_orbit(DenseTensor& a, std::vector<int> tuple, double value) {
    std::sort(tuple.begin(), tuple.end());
    do {
        a.set(tuple, value);
    } while (std::next_permutation(tuple.begin(), tuple.end()));
}

// Visits each orbit once, as its non-decreasing representative tuple.
template <typename F>
void for_each_orbit(int order, int dim, F&& f) {
    std::vector<int> idx(order, 0);
    while (true) {
        f(idx);
        int k = order - 1;
        while (k >= 0 && idx[k] == dim - 1) --k;
        if (k < 0) break;
        const int v = idx[k] + 1;
        for (int j = k; j < order; ++j) idx[j] = v;
    }
}

}  // namespace

DenseTensor hilbert(int order, int dim) {
    DenseTensor a(order, dim);
    const int d = order;
    for_each_tuple(order, dim, [&](std::size_t lin, const std::vector<int>& idx) {
        long sum = 0;
        for (int k = 0; k < d; ++k) sum += idx[k] + 1;
        a[lin] = 1.0 / static_cast<double>(sum - d + 1);
    });
    return a;
}

DenseTensor log_tensor(int order, int dim) {
    return separable_tensor(order, dim, [](int i) {
        return (i % 2 == 0 ? 1.0 : -1.0) * std::log(static_cast<double>(i));
    });
}

DenseTensor arctan_tensor(int order, int dim) {
    return separable_tensor(order, dim, [dim](int i) {
        const double s = (i % 2 == 0) ? 1.0 : -1.0;
        return std::atan(s * static_cast<double>(i) / static_cast<double>(dim));
    });
}

DenseTensor fraction_tensor(int order, int dim) {
    return separable_tensor(order, dim, [](int i) {
        return (i % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(i);
    });
}

DenseTensor random_sparse_nonneg(int order, int dim, double zero_frac, std::uint64_t seed) {
    if (zero_frac < 0.0 || zero_frac >= 1.0)
        throw std::invalid_argument("zero_frac must lie in [0, 1)");
    std::mt19937_64 rng(seed);
    DenseTensor a(order, dim);
    for_each_orbit(order, dim, [&](const std::vector<int>& rep) {
        const double value = uniform01(rng);
        const bool zero = uniform01(rng) < zero_frac;
        fill_orbit(a, rep, zero ? 0.0 : value);
    });
    return a;
}

DenseTensor random_gaussian_sym(int order, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DenseTensor a(order, dim);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = standard_normal(rng);
    return symmetrize(a);
}

DenseTensor from_monomials(int order, int dim, const std::vector<Monomial>& terms) {
    // coefficient per orbit: coeff * prod(alpha_j!) / d!
    double dfact = 1.0;
    for (int i = 2; i <= order; ++i) dfact *= i;
    std::map<std::vector<int>, double> orbit_value;
    for (const auto& term : terms) {
        if (static_cast<int>(term.exponents.size()) != dim)
            throw std::invalid_argument("exponent vector length must equal dim");
        int total = 0;
        double afact = 1.0;
        for (int e : term.exponents) {
            if (e < 0) throw std::invalid_argument("exponents must be nonnegative");
            total += e;
            for (int i = 2; i <= e; ++i) afact *= i;
        }
        if (total != order)
            throw std::invalid_argument("each monomial degree must equal the tensor order");
        orbit_value[term.exponents] += term.coeff * afact / dfact;
    }
    DenseTensor a(order, dim);
    std::vector<int> content(dim);
    for_each_orbit(order, dim, [&](const std::vector<int>& rep) {
        std::fill(content.begin(), content.end(), 0);
        for (int k : rep) ++content[k];
        auto it = orbit_value.find(content);
        if (it != orbit_value.end()) fill_orbit(a, rep, it->second);
    });
    return a;
}

}  // namespace tenspec
