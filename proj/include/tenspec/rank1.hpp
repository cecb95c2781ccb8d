#pragma once

#include "tenspec/tensor.hpp"

#include <span>
#include <vector>

namespace tenspec {

struct Rank1Extract {
    std::vector<double> x;  // unit vector
    int sign = 1;           // +1 for even order; chosen to align with X for odd order
    double err = 0.0;       // || X/||X||_F - sign * x^{od} ||_F
};

/// Projects a near-rank-1 (partially) symmetric tensor onto a unit rank-1
/// tensor via the leading left singular vector of the mode-1 unfolding.
Rank1Extract extract(const DenseTensor& x_tensor, double tol = 1e-12);

/// Fast path from a factored iterate: even order passes the single unit
/// factor z in R^{n^{d/2}}; odd order passes z1 in R^{n^{floor(d/2)}} and
/// z2 in R^{n^{ceil(d/2)}}. Agrees with extract() on the materialized tensor.
Rank1Extract extract_from_factor(std::span<const double> z1, std::span<const double> z2, int order,
                                 int dim);

}  // namespace tenspec
