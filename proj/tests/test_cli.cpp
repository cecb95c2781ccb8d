#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

#ifndef TENSPEC_CLI_PATH
#error "TENSPEC_CLI_PATH must be defined by the build"
#endif

const std::string kCli = TENSPEC_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    std::string cmd = kCli + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int st = pclose(p);
    r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Pull "key:  value..." from the plain-text solve report.
std::string field(const std::string& out, const std::string& key) {
    auto pos = out.find(key + ":");
    REQUIRE(pos != std::string::npos);
    pos += key.size() + 1;
    auto end = out.find('\n', pos);
    std::string v = out.substr(pos, end - pos);
    auto a = v.find_first_not_of(" \t");
    return v.substr(a);
}

}  // namespace

TEST_CASE("gen writes deterministic files by seed") {
    RunResult a = run("gen gaussian 3 4 cli_g1.tnsr --seed 42");
    CHECK(a.exit_code == 0);
    RunResult b = run("gen gaussian 3 4 cli_g2.tnsr --seed 42");
    CHECK(b.exit_code == 0);
    RunResult c = run("gen gaussian 3 4 cli_g3.tnsr --seed 43");
    CHECK(c.exit_code == 0);
    CHECK(slurp("cli_g1.tnsr") == slurp("cli_g2.tnsr"));
    CHECK(slurp("cli_g1.tnsr") != slurp("cli_g3.tnsr"));
    std::remove("cli_g1.tnsr");
    std::remove("cli_g2.tnsr");
    std::remove("cli_g3.tnsr");
}

TEST_CASE("solve prints a parseable report and exits 0 on convergence") {
    REQUIRE(run("gen hilbert 3 6 cli_h36.tnsr").exit_code == 0);
    RunResult r = run("solve cli_h36.tnsr");
    CHECK(r.exit_code == 0);
    CHECK(field(r.out, "status") == "converged");
    double sigma = std::stod(field(r.out, "eigenvalue"));
    CHECK(sigma > 0.0);
    int iters = std::stoi(field(r.out, "iterations"));
    CHECK(iters >= 1);
    double resid = std::stod(field(r.out, "residual"));
    CHECK(resid >= 0.0);
    CHECK(r.out.find("certificate:") != std::string::npos);

    // --trace writes a CSV with one row per iteration
    RunResult t = run("solve cli_h36.tnsr --trace cli_trace.csv");
    CHECK(t.exit_code == 0);
    std::string csv = slurp("cli_trace.csv");
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == iters + 1);  // header + rows
    std::remove("cli_trace.csv");

    // JSON mode carries the same eigenvalue
    RunResult j = run("solve cli_h36.tnsr --json");
    CHECK(j.exit_code == 0);
    auto pos = j.out.find("\"eigenvalue\":");
    REQUIRE(pos != std::string::npos);
    double jsigma = std::stod(j.out.substr(pos + 13));
    CHECK(jsigma == doctest::Approx(sigma).epsilon(1e-9));
    CHECK(j.out.find("\"schema\": \"tenspec/1\"") != std::string::npos);
    std::remove("cli_h36.tnsr");
}

TEST_CASE("solve options change the run as requested") {
    REQUIRE(run("gen hilbert 4 4 cli_h44.tnsr").exit_code == 0);
    RunResult base = run("solve cli_h44.tnsr --eps 1e-6");
    CHECK(base.exit_code == 0);
    double sigma = std::stod(field(base.out, "eigenvalue"));

    // --negate flips the problem; the reported value changes
    RunResult neg = run("solve cli_h44.tnsr --eps 1e-6 --negate");
    double nsigma = std::stod(field(neg.out, "eigenvalue"));
    CHECK(nsigma != doctest::Approx(sigma).epsilon(1e-6));

    // --max-iter 1 cannot converge: exit code 3, status max-iter
    RunResult capped = run("solve cli_h44.tnsr --max-iter 1");
    CHECK(capped.exit_code == 3);
    CHECK(field(capped.out, "status") == "max-iter");

    // --no-normalize solves the raw-scale problem but finds the same value
    RunResult raw = run("solve cli_h44.tnsr --eps 1e-6 --no-normalize");
    CHECK(raw.exit_code == 0);
    CHECK(std::stod(field(raw.out, "eigenvalue")) == doctest::Approx(sigma).epsilon(1e-4));
    std::remove("cli_h44.tnsr");
}

TEST_CASE("check verifies a solved eigenpair") {
    REQUIRE(run("gen hilbert 3 5 cli_h35.tnsr").exit_code == 0);
    RunResult r = run("solve cli_h35.tnsr --eps 1e-8");
    REQUIRE(r.exit_code == 0);
    std::string vec = field(r.out, "eigenvector");
    std::string sigma = field(r.out, "eigenvalue");
    std::ofstream("cli_x.txt") << vec << "\n";
    RunResult chk = run("check cli_h35.tnsr cli_x.txt " + sigma);
    CHECK(chk.exit_code == 0);
    // a wrong eigenvalue fails the check
    RunResult bad = run("check cli_h35.tnsr cli_x.txt 123.0");
    CHECK(bad.exit_code == 1);
    std::remove("cli_h35.tnsr");
    std::remove("cli_x.txt");
}

TEST_CASE("usage and bad-input exit codes") {
    CHECK(run("").exit_code != 0);
    CHECK(run("solve").exit_code == 2);                       // missing argument
    CHECK(run("gen nosuchfamily 3 3 cli_x.tnsr").exit_code == 2);
    CHECK(run("solve no_such_file.tnsr").exit_code == 2);

    // asymmetric tensor is refused with its own exit code
    std::ofstream f("cli_asym.tnsr");
    f << "tnsr 1 2 2 dense\n0\n1\n0\n0\n";
    f.close();
    RunResult r = run("solve cli_asym.tnsr");
    CHECK(r.exit_code == 4);
    std::remove("cli_asym.tnsr");
}

TEST_CASE("bench tau sweep emits one CSV row per tau") {
    REQUIRE(run("gen hilbert 4 4 cli_b.tnsr").exit_code == 0);
    RunResult r = run("bench --tau-sweep cli_b.tnsr --eps 1e-6 --taus 0.1,1.0");
    CHECK(r.exit_code == 0);
    std::istringstream ss(r.out);
    std::string line;
    std::getline(ss, line);
    CHECK(line.find("tau") != std::string::npos);
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    std::remove("cli_b.tnsr");
}
