#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tenspec {

/// Dense real cubical tensor of order d and dimension n.
///
/// Storage is a flat array of n^d values in row-major order over the index
/// tuple, i.e. the last index varies fastest. Indices are 0-based.
class DenseTensor {
public:
    DenseTensor(int order, int dim);
    DenseTensor(int order, int dim, std::vector<double> data);

    int order() const { return order_; }
    int dim() const { return dim_; }
    std::size_t size() const { return data_.size(); }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    // 0-based multi-index access.
    double at(std::span<const int> idx) const;
    void set(std::span<const int> idx, double value);

    std::size_t linear_index(std::span<const int> idx) const;

private:
    int order_;
    int dim_;
    std::vector<double> data_;
};

/// View of a tensor reshaped to an n^floor(d/2) x n^ceil(d/2) matrix.
/// Shares the tensor's storage; entry (r,c) sits at flat index r*cols + c.
struct MatricizedView {
    std::size_t rows;
    std::size_t cols;
    std::span<const double> data;

    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

using PermIndex = std::vector<int>;

std::size_t pow_size(int dim, int order);

// result(i_{pi(1)},...,i_{pi(d)}) = A(i_1,...,i_d); pi is 0-based here.
DenseTensor permute(const DenseTensor& a, const PermIndex& pi);

// Average of all d! index permutations; the orthogonal projection onto
// symmetric tensors.
DenseTensor symmetrize(const DenseTensor& a);

// max_{i} |A_i - Sym(A)_i|
double max_asymmetry(const DenseTensor& a);

bool is_symmetric(const DenseTensor& a, double tol);

MatricizedView matricize(const DenseTensor& a);
DenseTensor tensorize(std::span<const double> flat, int order, int dim);

double inner(const DenseTensor& a, const DenseTensor& b);
double frob_norm(const DenseTensor& a);

// x^{od}: rank-1 tensor with entries prod_j x_{i_j}.
DenseTensor outer_power(std::span<const double> x, int order);

// (A x^{o(d-1)})_i = sum A(i,i2,...,id) x_{i2}...x_{id}
std::vector<double> apply(const DenseTensor& a, std::span<const double> x);

// <A, x^{od}> evaluated by iterated contraction.
double rayleigh(const DenseTensor& a, std::span<const double> x);

// TNSR/1 text format. Lines starting with '#' before the header are ignored.
DenseTensor read_tnsr(const std::string& path);
void write_tnsr(const DenseTensor& a, const std::string& path, bool coo = false,
                const std::string& comment = "");

}  // namespace tenspec
