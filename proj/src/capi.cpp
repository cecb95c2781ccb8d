#include "tenspec.h"

#include "tenspec/admm.hpp"
#include "tenspec/generators.hpp"
#include "tenspec/tensor.hpp"

#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <vector>

struct ts_tensor {
    tenspec::DenseTensor t;
};

struct ts_report {
    tenspec::SolverReport r;
};

namespace {

thread_local std::string g_last_error;

ts_status fail(ts_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

ts_status guard(const std::exception& e) {
    g_last_error = e.what();
    const std::string w = e.what();
    if (w.find("cannot open") != std::string::npos) return TS_EIO;
    if (w.find("TNSR") != std::string::npos || w.find("coo") != std::string::npos ||
        w.find("truncated") != std::string::npos)
        return TS_EPARSE;
    return TS_EINVAL;
}

template <typename F>
ts_status wrap(F&& f) {
    try {
        return f();
    } catch (const std::bad_alloc&) {
        return fail(TS_EINTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return guard(e);
    } catch (...) {
        return fail(TS_EINTERNAL, "unknown error");
    }
}

ts_status make_tensor(tenspec::DenseTensor&& t, ts_tensor** out) {
    if (!out) return fail(TS_EINVAL, "out pointer is null");
    *out = new ts_tensor{std::move(t)};
    return TS_OK;
}

}  // namespace

extern "C" {

const char* ts_last_error(void) { return g_last_error.c_str(); }
const char* ts_version(void) { return "1.0.0"; }

ts_status ts_tensor_create(int order, int dim, const double* data, ts_tensor** out) {
    return wrap([&] {
        tenspec::DenseTensor t(order, dim);
        if (data) std::memcpy(t.data().data(), data, t.size() * sizeof(double));
        return make_tensor(std::move(t), out);
    });
}

ts_status ts_tensor_copy(const ts_tensor* t, ts_tensor** out) {
    if (!t) return fail(TS_EINVAL, "tensor is null");
    return wrap([&] { return make_tensor(tenspec::DenseTensor(t->t), out); });
}

void ts_tensor_free(ts_tensor* t) { delete t; }

ts_status ts_tensor_read(const char* path, ts_tensor** out) {
    if (!path) return fail(TS_EINVAL, "path is null");
    return wrap([&] { return make_tensor(tenspec::read_tnsr(path), out); });
}

ts_status ts_tensor_write(const ts_tensor* t, const char* path, int coo, const char* comment) {
    if (!t || !path) return fail(TS_EINVAL, "tensor or path is null");
    return wrap([&] {
        tenspec::write_tnsr(t->t, path, coo != 0, comment ? comment : "");
        return TS_OK;
    });
}

int ts_tensor_order(const ts_tensor* t) { return t ? t->t.order() : 0; }
int ts_tensor_dim(const ts_tensor* t) { return t ? t->t.dim() : 0; }
size_t ts_tensor_size(const ts_tensor* t) { return t ? t->t.size() : 0; }
const double* ts_tensor_data(const ts_tensor* t) { return t ? t->t.data().data() : nullptr; }

double ts_tensor_frob_norm(const ts_tensor* t) { return t ? tenspec::frob_norm(t->t) : 0.0; }
double ts_tensor_max_asymmetry(const ts_tensor* t) {
    return t ? tenspec::max_asymmetry(t->t) : 0.0;
}

void ts_tensor_negate(ts_tensor* t) {
    if (!t) return;
    for (double& v : t->t.data()) v = -v;
}

ts_status ts_rayleigh(const ts_tensor* t, const double* x, double* out) {
    if (!t || !x || !out) return fail(TS_EINVAL, "null argument");
    return wrap([&] {
        *out = tenspec::rayleigh(t->t, {x, static_cast<std::size_t>(t->t.dim())});
        return TS_OK;
    });
}

ts_status ts_eig_residual(const ts_tensor* t, const double* x, double sigma, double* out) {
    if (!t || !x || !out) return fail(TS_EINVAL, "null argument");
    return wrap([&] {
        *out = tenspec::eig_residual(t->t, {x, static_cast<std::size_t>(t->t.dim())}, sigma);
        return TS_OK;
    });
}

ts_status ts_gen_hilbert(int order, int dim, ts_tensor** out) {
    return wrap([&] { return make_tensor(tenspec::hilbert(order, dim), out); });
}
ts_status ts_gen_log(int order, int dim, ts_tensor** out) {
    return wrap([&] { return make_tensor(tenspec::log_tensor(order, dim), out); });
}
ts_status ts_gen_arctan(int order, int dim, ts_tensor** out) {
    return wrap([&] { return make_tensor(tenspec::arctan_tensor(order, dim), out); });
}
ts_status ts_gen_fraction(int order, int dim, ts_tensor** out) {
    return wrap([&] { return make_tensor(tenspec::fraction_tensor(order, dim), out); });
}
ts_status ts_gen_sparse_nonneg(int order, int dim, double zero_frac, uint64_t seed,
                               ts_tensor** out) {
    return wrap(
        [&] { return make_tensor(tenspec::random_sparse_nonneg(order, dim, zero_frac, seed), out); });
}
ts_status ts_gen_gaussian(int order, int dim, uint64_t seed, ts_tensor** out) {
    return wrap([&] { return make_tensor(tenspec::random_gaussian_sym(order, dim, seed), out); });
}

ts_status ts_from_monomials(int order, int dim, int n_terms, const int* exponents,
                            const double* coeffs, ts_tensor** out) {
    if (n_terms < 0 || (!exponents && n_terms > 0) || (!coeffs && n_terms > 0))
        return fail(TS_EINVAL, "null monomial arrays");
    return wrap([&] {
        std::vector<tenspec::Monomial> terms(static_cast<std::size_t>(n_terms));
        for (int t = 0; t < n_terms; ++t) {
            terms[t].exponents.assign(exponents + t * dim, exponents + (t + 1) * dim);
            terms[t].coeff = coeffs[t];
        }
        return make_tensor(tenspec::from_monomials(order, dim, terms), out);
    });
}

void ts_solver_config_default(ts_solver_config* cfg) {
    if (!cfg) return;
    tenspec::SolverConfig d;
    cfg->tau = d.tau;
    cfg->eps = d.eps;
    cfg->max_iter = d.max_iter;
    cfg->normalize = d.normalize ? 1 : 0;
    cfg->spectral_tol = d.spectral_tol;
    cfg->spectral_max_matvecs = d.spectral_max_matvecs;
    cfg->warm_start = d.warm_start_subproblems ? 1 : 0;
}

ts_status ts_solve(const ts_tensor* t, const ts_solver_config* cfg, ts_report** out) {
    if (!t || !out) return fail(TS_EINVAL, "null argument");
    return wrap([&] {
        tenspec::SolverConfig c;
        if (cfg) {
            c.tau = cfg->tau;
            c.eps = cfg->eps;
            c.max_iter = cfg->max_iter;
            c.normalize = cfg->normalize != 0;
            c.spectral_tol = cfg->spectral_tol;
            c.spectral_max_matvecs = cfg->spectral_max_matvecs;
            c.warm_start_subproblems = cfg->warm_start != 0;
        }
        tenspec::SolverReport r = tenspec::solve(t->t, c);
        *out = new ts_report{std::move(r)};
        return TS_OK;
    });
}

void ts_report_free(ts_report* r) { delete r; }

double ts_report_eigenvalue(const ts_report* r) { return r ? r->r.eigenvalue : 0.0; }

const double* ts_report_eigenvector(const ts_report* r, int* len) {
    if (!r) {
        if (len) *len = 0;
        return nullptr;
    }
    if (len) *len = static_cast<int>(r->r.eigenvector.size());
    return r->r.eigenvector.data();
}

int ts_report_iterations(const ts_report* r) { return r ? r->r.iterations : 0; }

ts_solve_status ts_report_status(const ts_report* r) {
    return (r && r->r.status == tenspec::SolveStatus::Converged) ? TS_SOLVE_CONVERGED
                                                                 : TS_SOLVE_MAX_ITER;
}

ts_certificate ts_report_certificate(const ts_report* r) {
    if (!r) return TS_CERT_STATIONARY;
    switch (r->r.certificate) {
        case tenspec::Certificate::GlobalCertified: return TS_CERT_GLOBAL;
        case tenspec::Certificate::Degenerate: return TS_CERT_DEGENERATE;
        default: return TS_CERT_STATIONARY;
    }
}

double ts_report_residual(const ts_report* r) { return r ? r->r.residual : 0.0; }
double ts_report_extraction_err(const ts_report* r) { return r ? r->r.extraction_err : 0.0; }

int ts_report_trace_len(const ts_report* r) {
    return r ? static_cast<int>(r->r.trace.size()) : 0;
}

ts_status ts_report_trace_row(const ts_report* r, int i, int* iter, double* primal_gap,
                              double* dx, double* dy_rel, double* objective) {
    if (!r || i < 0 || i >= static_cast<int>(r->r.trace.size()))
        return fail(TS_EINVAL, "trace index out of range");
    const tenspec::TraceRow& row = r->r.trace[static_cast<std::size_t>(i)];
    if (iter) *iter = row.iter;
    if (primal_gap) *primal_gap = row.primal_gap;
    if (dx) *dx = row.dx;
    if (dy_rel) *dy_rel = row.dy_rel;
    if (objective) *objective = row.objective;
    return TS_OK;
}

}  // extern "C"
