#pragma once

#include "tenspec/tensor.hpp"

#include <cstdint>
#include <vector>

namespace tenspec {

// Structured families. Entry formulas use 1-based indices i_1..i_d.

// A(i_1,...,i_d) = 1 / (i_1 + ... + i_d - d + 1)
DenseTensor hilbert(int order, int dim);

// A(i_1,...,i_d) = (-1)^{i_1} ln(i_1) + ... + (-1)^{i_d} ln(i_d)
DenseTensor log_tensor(int order, int dim);

// A(i_1,...,i_d) = arctan((-1)^{i_1} i_1/n) + ... + arctan((-1)^{i_d} i_d/n)
DenseTensor arctan_tensor(int order, int dim);

// A(i_1,...,i_d) = (-1)^{i_1}/i_1 + ... + (-1)^{i_d}/i_d
DenseTensor fraction_tensor(int order, int dim);

/// Symmetric nonnegative tensor with uniform [0,1] entries; whole index
/// orbits are zeroed with probability zero_frac so symmetry survives.
/// Draw order is orbit-major over non-decreasing index tuples: one uniform
/// for the value, one for the keep decision.
DenseTensor random_sparse_nonneg(int order, int dim, double zero_frac, std::uint64_t seed);

/// Symmetrization of i.i.d. standard normal entries (Box-Muller over the
/// flat buffer in storage order).
DenseTensor random_gaussian_sym(int order, int dim, std::uint64_t seed);

struct Monomial {
    std::vector<int> exponents;  // length n, entries sum to the tensor order
    double coeff = 0.0;
};

/// Symmetric tensor A with <A, x^{od}> equal to the polynomial
/// sum_t coeff_t * prod_j x_j^{alpha_tj}.
DenseTensor from_monomials(int order, int dim, const std::vector<Monomial>& terms);

}  // namespace tenspec
