/* C interface to the tenspec library: symmetric-tensor construction, I/O,
 * and the leading Z-eigenpair solver. All objects are opaque handles freed
 * with the matching *_free call. Functions return TS_OK (0) on success; on
 * failure ts_last_error() describes the most recent error on the calling
 * thread. */
#ifndef TENSPEC_H
#define TENSPEC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ts_tensor ts_tensor;
typedef struct ts_report ts_report;

typedef enum ts_status {
    TS_OK = 0,
    TS_EINVAL = 1,   /* bad argument or invalid input tensor */
    TS_EIO = 2,      /* file could not be opened/read/written */
    TS_EPARSE = 3,   /* malformed tensor file */
    TS_EINTERNAL = 4 /* unexpected internal failure */
} ts_status;

const char* ts_last_error(void);
const char* ts_version(void);

/* ---- tensors ---- */

/* data may be NULL for a zero tensor; otherwise dim^order values,
 * row-major with the last index fastest. */
ts_status ts_tensor_create(int order, int dim, const double* data, ts_tensor** out);
ts_status ts_tensor_copy(const ts_tensor* t, ts_tensor** out);
void ts_tensor_free(ts_tensor* t);

ts_status ts_tensor_read(const char* path, ts_tensor** out);
/* coo nonzero writes sparse coordinate form; comment may be NULL. */
ts_status ts_tensor_write(const ts_tensor* t, const char* path, int coo, const char* comment);

int ts_tensor_order(const ts_tensor* t);
int ts_tensor_dim(const ts_tensor* t);
size_t ts_tensor_size(const ts_tensor* t);
const double* ts_tensor_data(const ts_tensor* t);

double ts_tensor_frob_norm(const ts_tensor* t);
double ts_tensor_max_asymmetry(const ts_tensor* t);
void ts_tensor_negate(ts_tensor* t);

/* <A, x^{od}> and A x^{o(d-1)} - sigma x (2-norm), x of length dim. */
ts_status ts_rayleigh(const ts_tensor* t, const double* x, double* out);
ts_status ts_eig_residual(const ts_tensor* t, const double* x, double sigma, double* out);

/* ---- generators ---- */

ts_status ts_gen_hilbert(int order, int dim, ts_tensor** out);
ts_status ts_gen_log(int order, int dim, ts_tensor** out);
ts_status ts_gen_arctan(int order, int dim, ts_tensor** out);
ts_status ts_gen_fraction(int order, int dim, ts_tensor** out);
ts_status ts_gen_sparse_nonneg(int order, int dim, double zero_frac, uint64_t seed,
                               ts_tensor** out);
ts_status ts_gen_gaussian(int order, int dim, uint64_t seed, ts_tensor** out);

/* n_terms monomials; exponents is n_terms*dim ints, each row summing to
 * order; the resulting symmetric tensor satisfies
 * <A, x^{od}> = sum_t coeffs[t] * prod_j x_j^{exponents[t*dim+j]}. */
ts_status ts_from_monomials(int order, int dim, int n_terms, const int* exponents,
                            const double* coeffs, ts_tensor** out);

/* ---- solver ---- */

typedef struct ts_solver_config {
    double tau;       /* <= 0 selects the default (0.1 even order, 0.5 odd) */
    double eps;       /* stopping tolerance */
    int max_iter;
    int normalize;    /* scale A to unit Frobenius norm internally */
    double spectral_tol;
    int spectral_max_matvecs;
    int warm_start;   /* warm-start the per-iteration spectral solves */
} ts_solver_config;

void ts_solver_config_default(ts_solver_config* cfg);

typedef enum ts_solve_status { TS_SOLVE_CONVERGED = 0, TS_SOLVE_MAX_ITER = 1 } ts_solve_status;
typedef enum ts_certificate {
    TS_CERT_GLOBAL = 0,
    TS_CERT_STATIONARY = 1,
    TS_CERT_DEGENERATE = 2
} ts_certificate;

ts_status ts_solve(const ts_tensor* t, const ts_solver_config* cfg, ts_report** out);
void ts_report_free(ts_report* r);

double ts_report_eigenvalue(const ts_report* r);
const double* ts_report_eigenvector(const ts_report* r, int* len);
int ts_report_iterations(const ts_report* r);
ts_solve_status ts_report_status(const ts_report* r);
ts_certificate ts_report_certificate(const ts_report* r);
double ts_report_residual(const ts_report* r);
double ts_report_extraction_err(const ts_report* r);

int ts_report_trace_len(const ts_report* r);
ts_status ts_report_trace_row(const ts_report* r, int i, int* iter, double* primal_gap,
                              double* dx, double* dy_rel, double* objective);

#ifdef __cplusplus
}
#endif

#endif /* TENSPEC_H */
