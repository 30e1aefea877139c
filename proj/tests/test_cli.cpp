#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_binary;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    std::string out_path = "cli_stdout.tmp", err_path = "cli_stderr.tmp";
    std::string cmd = g_binary + " " + args + " >" + out_path + " 2>" + err_path;
    int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

const std::string kPair = "--set k0=1 --set mu1=0.1 --set mu2=0.1 ";

} // namespace

TEST_CASE("usage and help") {
    CHECK(run("").code == 2);  // a subcommand is required
    CHECK(run("--help").code == 0);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("potential: fourth-order CSV values and far-zone warning") {
    RunResult r = run("potential " + kPair + "--set r=10");
    CHECK(r.code == 0);
    CHECK(r.out.substr(0, r.out.find('\n')) == "r,V,V_4th,rel_dev,err_est");
    // V r^7 = -23 alpha1 alpha2 / 4 pi with alpha = 0.02
    std::istringstream line(r.out.substr(r.out.find('\n') + 1));
    std::string rf, vf;
    std::getline(line, rf, ',');
    std::getline(line, vf, ',');
    CHECK(rf == "10");
    double v = std::stod(vf);
    CHECK(v == doctest::Approx(-23.0 * 4e-4 / (4.0 * M_PI * 1e7)).epsilon(1e-12));
    // r k0 = 10 is inside the far zone: stderr carries the summary, no warning
    CHECK(r.err.find("far zone") == std::string::npos);

    RunResult near = run("potential " + kPair + "--set r=2");
    CHECK(near.code == 0);
    CHECK(near.err.find("far zone") != std::string::npos);
}

TEST_CASE("potential output is byte-identical across runs") {
    std::string args = "potential " + kPair +
                       "--set r_min=10 --set r_max=40 --set n_r=4 --set order=all";
    RunResult a = run(args);
    RunResult b = run(args);
    CHECK(a.code == 0);
    CHECK(!a.out.empty());
    CHECK(a.out == b.out);
}

TEST_CASE("potential: json format and --out file") {
    RunResult r = run("potential " + kPair + "--set r=10 --format json");
    CHECK(r.code == 0);
    CHECK(r.out.front() == '{');
    CHECK(r.out.find("\"samples\"") != std::string::npos);

    std::string path = "cli_out_test.csv";
    RunResult w = run("potential " + kPair + "--set r=10 --out " + path);
    CHECK(w.code == 0);
    // data goes to the file; stdout carries only the human-readable summary
    CHECK(w.out.find("r,V,") == std::string::npos);
    CHECK(w.out.find("V(r=10)") != std::string::npos);
    std::string content = slurp(path);
    std::remove(path.c_str());
    CHECK(content.find("r,V,") == 0);
}

TEST_CASE("config errors exit 2 with a named key") {
    RunResult r = run("potential --set mu1=0.1 --set mu2=0.1 --set r=10");
    CHECK(r.code == 2);
    CHECK(r.err.find("'k0'") != std::string::npos);
    CHECK(run("potential " + kPair + "--set nope=1 --set r=10").code == 2);
    CHECK(run("potential " + kPair + "--set r=banana").code == 2);
    CHECK(run("potential " + kPair + "--set r").code == 2);  // not key=value
}

TEST_CASE("unstable coupling exits 3 via the pole guard") {
    RunResult r =
        run("potential --set k0=1 --set mu1=2 --set mu2=2 --set r=0.5 --set order=all");
    CHECK(r.code == 3);
    CHECK(r.err.find("convergence error") != std::string::npos);
}

TEST_CASE("integrals command hits the golden values") {
    RunResult r = run("integrals");
    CHECK(r.code == 0);
    CHECK(r.out.find("I1") != std::string::npos);
    CHECK(r.out.find("I2") != std::string::npos);
}

TEST_CASE("identities pass on a regular grid at weak coupling") {
    RunResult r = run("identities --set k0=1 --set mu1=3e-5 --set mu2=4e-5 --set r=2");
    CHECK(r.code == 0);
    for (const char* name : {"commutator", "closed_vs_oracle", "ratio_r_t",
                             "ratio_tau_lambda", "matrix_inverse", "identity_F1",
                             "identity_F2", "e0_routes"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("identities reject degenerate grids with exit 2") {
    // a single shell sitting exactly at k0
    RunResult r = run("identities --set k0=1 --set mu1=1e-5 --set mu2=1e-5 --set r=2 "
                      "--set grid_shells=1 --set grid_k_min=1 --set grid_k_max=1");
    CHECK(r.code == 2);
}

TEST_CASE("converge runs and reports the three sweeps") {
    RunResult r = run("converge " + kPair);
    CHECK(r.code == 0);
    CHECK(r.out.find("cutoff") != std::string::npos);
    CHECK(r.out.find("shells") != std::string::npos);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cpq-binary> [doctest args]\n");
        return 1;
    }
    g_binary = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
