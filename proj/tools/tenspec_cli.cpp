// tenspec command line: generate tensors, solve for the leading Z-eigenpair,
// verify eigenpairs, and run benchmark suites. Talks to the library strictly
// through the C API in tenspec.h.

#include "tenspec.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMaxIter = 3;
constexpr int kExitBadTensor = 4;

struct TensorDeleter {
    void operator()(ts_tensor* t) const { ts_tensor_free(t); }
};
struct ReportDeleter {
    void operator()(ts_report* r) const { ts_report_free(r); }
};
using TensorPtr = std::unique_ptr<ts_tensor, TensorDeleter>;
using ReportPtr = std::unique_ptr<ts_report, ReportDeleter>;

[[noreturn]] void die(int code, const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(code);
}

TensorPtr load_tensor(const std::string& path) {
    ts_tensor* raw = nullptr;
    ts_status st = ts_tensor_read(path.c_str(), &raw);
    if (st != TS_OK) die(kExitUsage, ts_last_error());
    return TensorPtr(raw);
}

void require_symmetric(const ts_tensor* t) {
    const double asym = ts_tensor_max_asymmetry(t);
    const double scale = std::max(1.0, ts_tensor_frob_norm(t));
    if (asym > 1e-8 * scale)
        die(kExitBadTensor,
            "input tensor is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    if (ts_tensor_frob_norm(t) == 0.0) die(kExitBadTensor, "input tensor is zero");
}

const char* cert_name(ts_certificate c) {
    switch (c) {
        case TS_CERT_GLOBAL: return "global";
        case TS_CERT_DEGENERATE: return "degenerate";
        default: return "stationary";
    }
}

TensorPtr generate(const std::string& family, int d, int n, uint64_t seed, double zero_frac,
                   const std::string& spec_path) {
    ts_tensor* raw = nullptr;
    ts_status st;
    if (family == "hilbert") st = ts_gen_hilbert(d, n, &raw);
    else if (family == "log") st = ts_gen_log(d, n, &raw);
    else if (family == "arctan") st = ts_gen_arctan(d, n, &raw);
    else if (family == "fraction") st = ts_gen_fraction(d, n, &raw);
    else if (family == "sparse-nonneg") st = ts_gen_sparse_nonneg(d, n, zero_frac, seed, &raw);
    else if (family == "gaussian") st = ts_gen_gaussian(d, n, seed, &raw);
    else if (family == "monomials") {
        if (spec_path.empty()) die(kExitUsage, "family 'monomials' needs --spec FILE");
        std::ifstream in(spec_path);
        if (!in) die(kExitUsage, "cannot open " + spec_path);
        // each line: coeff e1 ... en  (comments with '#')
        std::vector<int> exps;
        std::vector<double> coeffs;
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            double c;
            if (!(ls >> c)) continue;
            std::vector<int> row(n);
            for (int j = 0; j < n; ++j)
                if (!(ls >> row[j])) die(kExitUsage, "bad monomial line: " + line);
            coeffs.push_back(c);
            exps.insert(exps.end(), row.begin(), row.end());
        }
        st = ts_from_monomials(d, n, static_cast<int>(coeffs.size()), exps.data(), coeffs.data(),
                               &raw);
    } else {
        die(kExitUsage, "unknown family '" + family + "'");
    }
    if (st != TS_OK) die(kExitUsage, ts_last_error());
    return TensorPtr(raw);
}

struct SolveOutcome {
    double value = 0.0;
    std::vector<double> x;
    int iters = 0;
    bool converged = false;
    ts_certificate cert = TS_CERT_STATIONARY;
    double residual = 0.0;
    double extraction_err = 0.0;
    double seconds = 0.0;
    std::string error;
};

SolveOutcome run_solve(const ts_tensor* t, const ts_solver_config& cfg) {
    SolveOutcome out;
    ts_report* raw = nullptr;
    const auto t0 = Clock::now();
    ts_status st = ts_solve(t, &cfg, &raw);
    out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (st != TS_OK) {
        out.error = ts_last_error();
        return out;
    }
    ReportPtr rep(raw);
    out.value = ts_report_eigenvalue(rep.get());
    int len = 0;
    const double* xv = ts_report_eigenvector(rep.get(), &len);
    out.x.assign(xv, xv + len);
    out.iters = ts_report_iterations(rep.get());
    out.converged = ts_report_status(rep.get()) == TS_SOLVE_CONVERGED;
    out.cert = ts_report_certificate(rep.get());
    out.residual = ts_report_residual(rep.get());
    out.extraction_err = ts_report_extraction_err(rep.get());
    return out;
}

void write_trace(const ts_report* rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) die(kExitUsage, "cannot open " + path + " for writing");
    out << "iter,primal_gap,dx,dy_rel,objective\n";
    const int len = ts_report_trace_len(rep);
    out.precision(17);
    for (int i = 0; i < len; ++i) {
        int it;
        double pg, dx, dy, obj;
        ts_report_trace_row(rep, i, &it, &pg, &dx, &dy, &obj);
        out << it << ',' << pg << ',' << dx << ',' << dy << ',' << obj << '\n';
    }
}

int cmd_solve(const std::string& in_path, ts_solver_config cfg, bool negate,
              const std::string& trace_path, bool as_json) {
    TensorPtr t = load_tensor(in_path);
    require_symmetric(t.get());
    if (negate) ts_tensor_negate(t.get());

    ts_report* raw = nullptr;
    const auto t0 = Clock::now();
    ts_status st = ts_solve(t.get(), &cfg, &raw);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (st != TS_OK) die(kExitUsage, ts_last_error());
    ReportPtr rep(raw);

    if (!trace_path.empty()) write_trace(rep.get(), trace_path);

    int len = 0;
    const double* xv = ts_report_eigenvector(rep.get(), &len);
    const bool converged = ts_report_status(rep.get()) == TS_SOLVE_CONVERGED;

    if (as_json) {
        json j;
        j["schema"] = "tenspec/1";
        j["eigenvalue"] = ts_report_eigenvalue(rep.get());
        j["eigenvector"] = std::vector<double>(xv, xv + len);
        j["iterations"] = ts_report_iterations(rep.get());
        j["status"] = converged ? "converged" : "max-iter";
        j["residual"] = ts_report_residual(rep.get());
        j["certificate"] = cert_name(ts_report_certificate(rep.get()));
        j["extraction_err"] = ts_report_extraction_err(rep.get());
        j["wall_time_s"] = secs;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout.precision(10);
        std::cout << "eigenvalue:  " << ts_report_eigenvalue(rep.get()) << "\n";
        std::cout << "eigenvector:";
        for (int i = 0; i < len; ++i) std::cout << ' ' << xv[i];
        std::cout << "\niterations:  " << ts_report_iterations(rep.get()) << "\n"
                  << "status:      " << (converged ? "converged" : "max-iter") << "\n"
                  << "residual:    " << ts_report_residual(rep.get()) << "\n"
                  << "certificate: " << cert_name(ts_report_certificate(rep.get())) << "\n"
                  << "wall_time_s: " << secs << "\n";
    }
    return converged ? kExitOk : kExitMaxIter;
}

int cmd_check(const std::string& in_path, const std::string& x_path, double sigma) {
    TensorPtr t = load_tensor(in_path);
    require_symmetric(t.get());
    std::ifstream in(x_path);
    if (!in) die(kExitUsage, "cannot open " + x_path);
    std::vector<double> x;
    double v;
    while (in >> v) x.push_back(v);
    if (static_cast<int>(x.size()) != ts_tensor_dim(t.get()))
        die(kExitUsage, "x length does not match tensor dimension");
    double nrm = 0.0;
    for (double xi : x) nrm += xi * xi;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) die(kExitUsage, "x is the zero vector");
    if (std::abs(nrm - 1.0) > 1e-10) {
        std::cerr << "warning: x has norm " << nrm << "; normalizing\n";
        for (double& xi : x) xi /= nrm;
    }
    double resid = 0.0;
    if (ts_eig_residual(t.get(), x.data(), sigma, &resid) != TS_OK)
        die(kExitUsage, ts_last_error());
    double ray = 0.0;
    ts_rayleigh(t.get(), x.data(), &ray);
    const double bound = 1e-4 * ts_tensor_frob_norm(t.get());
    std::cout.precision(10);
    std::cout << "residual:  " << resid << "\n"
              << "rayleigh:  " << ray << "\n"
              << "threshold: " << bound << "\n"
              << (resid <= bound ? "PASS" : "FAIL") << "\n";
    return resid <= bound ? 0 : 1;
}

// ---- bench ----

struct BenchJob {
    std::string family;
    int d = 0;
    int n = 0;
    int reps = 1;
    uint64_t seed = 0;
    double zero_frac = 0.5;
    std::string path;  // family == "file"
    ts_solver_config cfg;
    bool negate = false;
};

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct BenchRow {
    BenchJob job;
    bool failed = false;
    std::string error;
    double time_s = 0.0;
    double iters = 0.0;
    double value = 0.0;
    std::string cert;
    int certified = 0;
};

BenchRow run_bench_job(const BenchJob& job) {
    BenchRow row;
    row.job = job;
    std::vector<double> times, iters, values;
    std::vector<ts_certificate> certs;
    for (int r = 0; r < job.reps; ++r) {
        TensorPtr t;
        if (job.family == "file") {
            ts_tensor* raw = nullptr;
            if (ts_tensor_read(job.path.c_str(), &raw) != TS_OK) {
                row.failed = true;
                row.error = ts_last_error();
                return row;
            }
            t.reset(raw);
        } else {
            ts_tensor* raw = nullptr;
            ts_status st;
            if (job.family == "hilbert") st = ts_gen_hilbert(job.d, job.n, &raw);
            else if (job.family == "log") st = ts_gen_log(job.d, job.n, &raw);
            else if (job.family == "arctan") st = ts_gen_arctan(job.d, job.n, &raw);
            else if (job.family == "fraction") st = ts_gen_fraction(job.d, job.n, &raw);
            else if (job.family == "sparse-nonneg")
                st = ts_gen_sparse_nonneg(job.d, job.n, job.zero_frac, job.seed + r, &raw);
            else if (job.family == "gaussian")
                st = ts_gen_gaussian(job.d, job.n, job.seed + r, &raw);
            else {
                row.failed = true;
                row.error = "unknown family " + job.family;
                return row;
            }
            if (st != TS_OK) {
                row.failed = true;
                row.error = ts_last_error();
                return row;
            }
            t.reset(raw);
        }
        if (job.negate) ts_tensor_negate(t.get());
        SolveOutcome out = run_solve(t.get(), job.cfg);
        if (!out.error.empty()) {
            row.failed = true;
            row.error = out.error;
            return row;
        }
        times.push_back(out.seconds);
        iters.push_back(out.iters);
        values.push_back(out.value);
        certs.push_back(out.cert);
        if (out.cert == TS_CERT_GLOBAL) ++row.certified;
    }
    row.time_s = median(times);
    row.iters = median(iters);
    row.value = median(values);
    // the certificate column shows the run realizing the median value
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i] - row.value) < std::abs(values[best] - row.value)) best = i;
    row.cert = certs.empty() ? "n/a" : cert_name(certs[best]);
    return row;
}

bool is_random_family(const std::string& f) {
    return f == "gaussian" || f == "sparse-nonneg";
}

std::vector<BenchJob> parse_suite(const std::string& path, int reps_random) {
    std::ifstream in(path);
    if (!in) die(kExitUsage, "cannot open " + path);
    std::vector<BenchJob> jobs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        BenchJob job;
        ts_solver_config_default(&job.cfg);
        job.cfg.max_iter = 50000;
        if (!(ls >> job.family)) continue;
        if (job.family != "file" && !(ls >> job.d >> job.n))
            die(kExitUsage, "suite line " + std::to_string(lineno) + ": expected 'family d n'");
        job.reps = is_random_family(job.family) ? reps_random : 1;
        std::string kv;
        while (ls >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                die(kExitUsage, "suite line " + std::to_string(lineno) + ": bad token " + kv);
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "reps") job.reps = std::stoi(val);
            else if (key == "seed") job.seed = std::stoull(val);
            else if (key == "zero-frac") job.zero_frac = std::stod(val);
            else if (key == "tau") job.cfg.tau = std::stod(val);
            else if (key == "eps") job.cfg.eps = std::stod(val);
            else if (key == "max-iter") job.cfg.max_iter = std::stoi(val);
            else if (key == "normalize") job.cfg.normalize = std::stoi(val);
            else if (key == "negate") job.negate = std::stoi(val) != 0;
            else if (key == "path") job.path = val;
            else die(kExitUsage, "suite line " + std::to_string(lineno) + ": unknown key " + key);
        }
        if (job.family == "file" && job.path.empty())
            die(kExitUsage, "suite line " + std::to_string(lineno) + ": file needs path=");
        jobs.push_back(std::move(job));
    }
    return jobs;
}

int cmd_bench(const std::string& suite_path, int jobs_limit, int reps_random,
              const std::string& out_path) {
    std::vector<BenchJob> jobs = parse_suite(suite_path, reps_random);
    std::vector<BenchRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::max(1, std::min<int>(jobs_limit, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) break;
                rows[i] = run_bench_job(jobs[i]);
            }
        });
    for (std::thread& th : pool) th.join();

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) die(kExitUsage, "cannot open " + out_path + " for writing");
        os = &file;
    }
    (*os) << "family,d,n,reps,time_s,iters,V,cert,certified\n";
    os->precision(10);
    for (const BenchRow& r : rows) {
        if (r.failed) {
            (*os) << r.job.family << ',' << r.job.d << ',' << r.job.n << ',' << r.job.reps
                  << ",,,,error: " << r.error << ",\n";
            continue;
        }
        (*os) << r.job.family << ',' << r.job.d << ',' << r.job.n << ',' << r.job.reps << ','
              << r.time_s << ',' << r.iters << ',' << r.value << ',' << r.cert << ','
              << r.certified << '\n';
    }
    return 0;
}

int cmd_tau_sweep(const std::string& in_path, bool negate, double eps,
                  const std::vector<double>& taus, int max_iter, const std::string& out_path) {
    TensorPtr t = load_tensor(in_path);
    require_symmetric(t.get());
    if (negate) ts_tensor_negate(t.get());

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) die(kExitUsage, "cannot open " + out_path + " for writing");
        os = &file;
    }
    (*os) << "tau,time_s,iters,V,cert\n";
    os->precision(10);
    for (double tau : taus) {
        ts_solver_config cfg;
        ts_solver_config_default(&cfg);
        cfg.tau = tau;
        cfg.eps = eps;
        cfg.max_iter = max_iter;
        cfg.normalize = 0;
        SolveOutcome out = run_solve(t.get(), cfg);
        if (!out.error.empty()) {
            (*os) << tau << ",,,error: " << out.error << ",\n";
            continue;
        }
        (*os) << tau << ',' << out.seconds << ',' << out.iters << ',' << out.value << ','
              << cert_name(out.cert) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tenspec: leading Z-eigenpair of symmetric tensors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ts_version()));

    // gen
    auto* gen = app.add_subcommand("gen", "generate a tensor and write a TNSR/1 file");
    std::string g_family, g_out, g_spec;
    int g_d = 0, g_n = 0;
    uint64_t g_seed = 0;
    double g_zero_frac = 0.5;
    bool g_coo = false;
    gen->add_option("family", g_family,
                    "hilbert|log|arctan|fraction|sparse-nonneg|gaussian|monomials")
        ->required();
    gen->add_option("d", g_d, "tensor order")->required();
    gen->add_option("n", g_n, "dimension")->required();
    gen->add_option("out", g_out, "output path")->required();
    gen->add_option("--seed", g_seed, "RNG seed (random families)");
    gen->add_option("--zero-frac", g_zero_frac, "orbit zeroing probability (sparse-nonneg)");
    gen->add_option("--spec", g_spec, "monomial spec file: 'coeff e1 ... en' per line");
    gen->add_flag("--coo", g_coo, "write sparse coordinate format");

    // solve
    auto* solve = app.add_subcommand("solve", "compute the leading Z-eigenpair");
    std::string s_in, s_trace;
    bool s_no_normalize = false, s_negate = false, s_json = false;
    ts_solver_config s_cfg;
    ts_solver_config_default(&s_cfg);
    solve->add_option("input", s_in, "TNSR/1 file")->required();
    solve->add_option("--tau", s_cfg.tau, "penalty parameter (<=0: auto)");
    solve->add_option("--eps", s_cfg.eps, "stopping tolerance");
    solve->add_option("--max-iter", s_cfg.max_iter, "iteration cap");
    solve->add_flag("--no-normalize", s_no_normalize, "skip Frobenius normalization");
    solve->add_flag("--negate", s_negate, "solve for -A");
    solve->add_option("--trace", s_trace, "write per-iteration CSV trace");
    solve->add_flag("--json", s_json, "machine-readable JSON report");
    solve->set_config("--config", "", "key=value option file");

    // check
    auto* check = app.add_subcommand("check", "verify an eigenpair residual");
    std::string c_in, c_x;
    double c_sigma = 0.0;
    check->add_option("input", c_in, "TNSR/1 file")->required();
    check->add_option("x-file", c_x, "whitespace-separated eigenvector")->required();
    check->add_option("sigma", c_sigma, "claimed eigenvalue")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark suite to CSV");
    std::string b_suite, b_out, b_sweep;
    int b_jobs = 1, b_reps_random = 5, b_max_iter = 50000;
    bool b_negate = false;
    double b_eps = 1e-4;
    std::vector<double> b_taus = {1e-3, 1e-2, 1e-1, 0.5, 1.0, 10.0, 1e2, 1e3};
    bench->add_option("suite", b_suite, "suite file: 'family d n [key=value...]' per line");
    bench->add_option("--jobs", b_jobs, "max concurrent solves");
    bench->add_option("--reps-random", b_reps_random, "repetitions for random families");
    bench->add_option("-o,--out", b_out, "output CSV path (default stdout)");
    bench->add_option("--tau-sweep", b_sweep, "sweep tau over a grid on one TNSR/1 file");
    bench->add_flag("--negate", b_negate, "negate the sweep tensor");
    bench->add_option("--eps", b_eps, "sweep stopping tolerance");
    bench->add_option("--max-iter", b_max_iter, "sweep iteration cap");
    bench->add_option("--taus", b_taus, "sweep grid")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            TensorPtr t = generate(g_family, g_d, g_n, g_seed, g_zero_frac, g_spec);
            if (ts_tensor_write(t.get(), g_out.c_str(), g_coo ? 1 : 0, nullptr) != TS_OK)
                die(kExitUsage, ts_last_error());
            return kExitOk;
        }
        if (solve->parsed()) {
            s_cfg.normalize = s_no_normalize ? 0 : 1;
            return cmd_solve(s_in, s_cfg, s_negate, s_trace, s_json);
        }
        if (check->parsed()) return cmd_check(c_in, c_x, c_sigma);
        if (bench->parsed()) {
            if (!b_sweep.empty())
                return cmd_tau_sweep(b_sweep, b_negate, b_eps, b_taus, b_max_iter, b_out);
            if (b_suite.empty()) die(kExitUsage, "bench needs a suite file or --tau-sweep");
            return cmd_bench(b_suite, b_jobs, b_reps_random, b_out);
        }
    } catch (const std::exception& e) {
        die(kExitUsage, e.what());
    }
    return kExitUsage;
}
