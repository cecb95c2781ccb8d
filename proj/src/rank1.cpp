#include "tenspec/rank1.hpp"

#include "tenspec/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace tenspec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// || T/||T||_F - sign * x^{od} ||_F computed entrywise; the algebraically
// equivalent sqrt(2 - 2<T/||T||, sign x^{od}>) loses half the digits to
// cancellation when the distance is near zero.
double rank1_err(const DenseTensor& t, double nrm, std::span<const double> x, int sign, int d) {
    DenseTensor p = outer_power(x, d);
    double s2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double diff = t[i] / nrm - double(sign) * p[i];
        s2 += diff * diff;
    }
    return std::sqrt(s2);
}

}  // namespace

Rank1Extract extract(const DenseTensor& x_tensor, double tol) {
    const double nrm = frob_norm(x_tensor);
    if (nrm == 0.0) throw std::invalid_argument("cannot extract from the zero tensor");
    const int d = x_tensor.order();
    const int n = x_tensor.dim();

    Rank1Extract out;
    if (d == 1) {
        out.x.assign(x_tensor.data().begin(), x_tensor.data().end());
        for (double& v : out.x) v /= nrm;
        out.sign = 1;
        out.err = 0.0;
        return out;
    }

    // mode-1 unfolding is the flat buffer viewed as n x n^{d-1}
    const std::size_t cols = x_tensor.size() / static_cast<std::size_t>(n);
    LinearOperator unfold = dense_operator(x_tensor.data(), static_cast<std::size_t>(n), cols);
    SingularTriple top = leading_singular_triple(unfold, tol);
    if (top.degenerate) throw std::invalid_argument("cannot extract from the zero tensor");
    out.x = top.left;

    const double val = rayleigh(x_tensor, out.x) / nrm;
    out.sign = 1;
    if (d % 2 == 1 && val < 0.0) out.sign = -1;
    out.err = rank1_err(x_tensor, nrm, out.x, out.sign, d);
    return out;
}

Rank1Extract extract_from_factor(std::span<const double> z1, std::span<const double> z2, int order,
                                 int dim) {
    const int half = order / 2;
    if (z1.size() != pow_size(dim, half))
        throw std::invalid_argument("factor length must be dim^floor(order/2)");

    // Entrywise distance between the factored X (entry z1[r]*z2[c] of its
    // matricization) and sign * x^{od} (entry xk1[r]*xk2[c]).
    auto factored_err = [](std::span<const double> f1, std::span<const double> f2,
                           std::span<const double> k1, std::span<const double> k2, int sign) {
        double n2 = 0.0;
        for (double v : f1) n2 += v * v;
        double m2 = 0.0;
        for (double v : f2) m2 += v * v;
        const double nrm = std::sqrt(n2 * m2);
        double s2 = 0.0;
        for (std::size_t r = 0; r < f1.size(); ++r)
            for (std::size_t c = 0; c < f2.size(); ++c) {
                const double diff = f1[r] * f2[c] / nrm - double(sign) * k1[r] * k2[c];
                s2 += diff * diff;
            }
        return std::sqrt(s2);
    };

    Rank1Extract out;
    if (order % 2 == 0) {
        out = extract(tensorize(z1, half, dim));
        out.sign = 1;
        DenseTensor xk = outer_power(out.x, half);
        out.err = factored_err(z1, z1, xk.data(), xk.data(), 1);
        return out;
    }
    if (z2.size() != pow_size(dim, order - half))
        throw std::invalid_argument("second factor length must be dim^ceil(order/2)");
    out = extract(tensorize(z1, half, dim));
    DenseTensor xk1 = outer_power(out.x, half);
    DenseTensor xk2 = outer_power(out.x, order - half);
    const double p = dot(z1, xk1.data()) * dot(z2, xk2.data());
    out.sign = (p < 0.0) ? -1 : 1;
    out.err = factored_err(z1, z2, xk1.data(), xk2.data(), out.sign);
    return out;
}

}  // namespace tenspec
