#include "tenspec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tenspec {

std::size_t pow_size(int dim, int order) {
    std::size_t s = 1;
    for (int i = 0; i < order; ++i) s *= static_cast<std::size_t>(dim);
    return s;
}

DenseTensor::DenseTensor(int order, int dim)
    : order_(order), dim_(dim), data_(pow_size(dim, order), 0.0) {
    if (order < 1 || dim < 1) throw std::invalid_argument("tensor order and dim must be >= 1");
}

DenseTensor::DenseTensor(int order, int dim, std::vector<double> data)
    : order_(order), dim_(dim), data_(std::move(data)) {
    if (order < 1 || dim < 1) throw std::invalid_argument("tensor order and dim must be >= 1");
    if (data_.size() != pow_size(dim, order))
        throw std::invalid_argument("tensor data length must be dim^order");
    for (double v : data_)
        if (!std::isfinite(v)) throw std::invalid_argument("tensor entries must be finite");
}

std::size_t DenseTensor::linear_index(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw std::invalid_argument("index tuple length must equal tensor order");
    std::size_t lin = 0;
    for (int k = 0; k < order_; ++k) {
        if (idx[k] < 0 || idx[k] >= dim_) throw std::out_of_range("tensor index out of range");
        lin = lin * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx[k]);
    }
    return lin;
}

double DenseTensor::at(std::span<const int> idx) const { return data_[linear_index(idx)]; }
void DenseTensor::set(std::span<const int> idx, double value) { data_[linear_index(idx)] = value; }

DenseTensor permute(const DenseTensor& a, const PermIndex& pi) {
    const int d = a.order();
    if (static_cast<int>(pi.size()) != d)
        throw std::invalid_argument("permutation length must equal tensor order");
    std::vector<bool> seen(d, false);
    for (int p : pi) {
        if (p < 0 || p >= d || seen[p]) throw std::invalid_argument("not a permutation");
        seen[p] = true;
    }
    const int n = a.dim();
    // result(j_1,...,j_d) = A(i) with i_{pi(k)} = j_k, i.e. the input entry
    // sits at linear offset sum_k j_k * stride[pi(k)].
    std::vector<std::size_t> stride(d);
    stride[d - 1] = 1;
    for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * static_cast<std::size_t>(n);
    std::vector<std::size_t> pstride(d);
    for (int k = 0; k < d; ++k) pstride[k] = stride[pi[k]];

    DenseTensor out(d, n);
    std::vector<int> j(d, 0);
    std::size_t src = 0;
    const std::size_t total = a.size();
    for (std::size_t lin = 0; lin < total; ++lin) {
        out[lin] = a[src];
        // odometer increment of j, maintaining src.
        for (int k = d - 1; k >= 0; --k) {
            if (++j[k] < n) {
                src += pstride[k];
                break;
            }
            j[k] = 0;
            src -= pstride[k] * static_cast<std::size_t>(n - 1);
        }
    }
    return out;
}

DenseTensor symmetrize(const DenseTensor& a) {
    const int d = a.order();
    const int n = a.dim();
    DenseTensor acc(d, n);
    PermIndex pi(d);
    std::iota(pi.begin(), pi.end(), 0);
    std::size_t count = 0;
    do {
        DenseTensor p = permute(a, pi);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
        ++count;
    } while (std::next_permutation(pi.begin(), pi.end()));
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= inv;
    return acc;
}

double max_asymmetry(const DenseTensor& a) {
    DenseTensor s = symmetrize(a);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - s[i]));
    return m;
}

bool is_symmetric(const DenseTensor& a, double tol) {
    if (tol < 0) throw std::invalid_argument("tolerance must be nonnegative");
    return max_asymmetry(a) <= tol;
}

MatricizedView matricize(const DenseTensor& a) {
    const int d = a.order();
    const std::size_t rows = pow_size(a.dim(), d / 2);
    const std::size_t cols = pow_size(a.dim(), d - d / 2);
    return MatricizedView{rows, cols, a.data()};
}

DenseTensor tensorize(std::span<const double> flat, int order, int dim) {
    if (flat.size() != pow_size(dim, order))
        throw std::invalid_argument("flat length must equal dim^order");
    return DenseTensor(order, dim, std::vector<double>(flat.begin(), flat.end()));
}

double inner(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() != b.order() || a.dim() != b.dim())
        throw std::invalid_argument("inner product requires same tensor shape");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double frob_norm(const DenseTensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * a[i];
    return std::sqrt(s);
}

DenseTensor outer_power(std::span<const double> x, int order) {
    const int n = static_cast<int>(x.size());
    DenseTensor out(order, n);
    // out[lin] over the odometer is the running product of the digits' x values.
    std::vector<int> idx(order, 0);
    const std::size_t total = out.size();
    for (std::size_t lin = 0; lin < total; ++lin) {
        double p = 1.0;
        for (int k = 0; k < order; ++k) p *= x[idx[k]];
        out[lin] = p;
        for (int k = order - 1; k >= 0; --k) {
            if (++idx[k] < n) break;
            idx[k] = 0;
        }
    }
    return out;
}

namespace {

// Contracts the last mode against x, in place: buf of length n^m becomes n^{m-1}.
void contract_last(std::vector<double>& buf, std::span<const double> x, std::size_t out_len) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < out_len; ++i) {
        double s = 0.0;
        const double* row = buf.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
        buf[i] = s;
    }
}

}  // namespace

std::vector<double> apply(const DenseTensor& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.dim())
        throw std::invalid_argument("vector length must equal tensor dim");
    std::vector<double> buf(a.data().begin(), a.data().end());
    std::size_t len = a.size();
    for (int m = a.order(); m > 1; --m) {
        len /= static_cast<std::size_t>(a.dim());
        contract_last(buf, x, len);
    }
    buf.resize(len);
    return buf;
}

double rayleigh(const DenseTensor& a, std::span<const double> x) {
    std::vector<double> ax = apply(a, x);
    double s = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) s += ax[i] * x[i];
    return s;
}

DenseTensor read_tnsr(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    // skip comment lines before the header
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') break;
    }
    std::istringstream hdr(line);
    std::string magic, body;
    int version = 0, d = 0, n = 0;
    hdr >> magic >> version >> d >> n >> body;
    if (magic != "tnsr" || version != 1 || d < 1 || n < 1 || (body != "dense" && body != "coo"))
        throw std::runtime_error("bad TNSR/1 header in " + path);
    const std::size_t total = pow_size(n, d);
    if (body == "dense") {
        std::vector<double> data(total);
        for (std::size_t i = 0; i < total; ++i) {
            if (!(in >> data[i])) throw std::runtime_error("truncated dense body in " + path);
        }
        return DenseTensor(d, n, std::move(data));
    }
    DenseTensor out(d, n);
    std::vector<bool> filled(total, false);
    std::vector<int> idx(d);
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        for (int k = 0; k < d; ++k) {
            int v;
            if (!(ls >> v)) throw std::runtime_error("bad coo line in " + path);
            if (v < 1 || v > n) throw std::runtime_error("coo index out of range in " + path);
            idx[k] = v - 1;
        }
        double value;
        if (!(ls >> value)) throw std::runtime_error("bad coo line in " + path);
        const std::size_t lin = out.linear_index(idx);
        if (filled[lin]) throw std::runtime_error("duplicate coo index tuple in " + path);
        filled[lin] = true;
        out[lin] = value;
    }
    return out;
}

void write_tnsr(const DenseTensor& a, const std::string& path, bool coo,
                const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "tnsr 1 " << a.order() << " " << a.dim() << " " << (coo ? "coo" : "dense") << "\n";
    if (!coo) {
        for (std::size_t i = 0; i < a.size(); ++i) out << a[i] << "\n";
        return;
    }
    const int d = a.order(), n = a.dim();
    std::vector<int> idx(d, 0);
    for (std::size_t lin = 0; lin < a.size(); ++lin) {
        if (a[lin] != 0.0) {
            for (int k = 0; k < d; ++k) out << (idx[k] + 1) << " ";
            out << a[lin] << "\n";
        }
        for (int k = d - 1; k >= 0; --k) {
            if (++idx[k] < n) break;
            idx[k] = 0;
        }
    }
}

}  // namespace tenspec
