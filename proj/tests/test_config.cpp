#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cpq/config.hpp"

using namespace cpq;

TEST_CASE("set parses and stores every physics key") {
    RunConfig c;
    c.set("k0", "2.5");
    c.set("mu1", "0.1");
    c.set("mu2", "0.2");
    c.set("r", "4");
    CHECK(*c.k0 == 2.5);
    OscillatorPair p = c.pair();
    CHECK(p.mu2 == 0.2);
    CHECK(p.r == 4.0);

    c.set("cutoff_kind", "sharp");
    c.set("cutoff_lambda", "55");
    CHECK(c.cutoff.kind == CutoffKind::Sharp);
    CHECK(c.cutoff.lambda == 55.0);
    c.set("quad_rel_tol", "1e-9");
    c.set("damping_ladder", "0.1, 0.05, 0.025");
    CHECK(c.quad.damping_ladder[2] == 0.025);
    c.set("grid_ladder", "geometric");
    c.set("grid_shells", "7");
    c.set("grid_directions", "14");
    c.set("grid_seed", "42");
    CHECK(c.grid.ladder == ShellGridSpec::Ladder::Geometric);
    CHECK(c.grid.seed == 42u);
    c.set("branch", "minus");
    CHECK(c.branch == Branch::Minus);
    c.set("order", "all");
    c.set("format", "json");
    c.set("out", "data.json");
    CHECK(c.out == "data.json");
}

TEST_CASE("unknown keys and malformed values are hard errors") {
    RunConfig c;
    CHECK_THROWS_WITH_AS(c.set("k_0", "1.0"), doctest::Contains("unknown key"),
                         ConfigError);
    CHECK_THROWS_AS(c.set("k0", "abc"), ConfigError);
    CHECK_THROWS_AS(c.set("k0", "1.0x"), ConfigError);
    CHECK_THROWS_AS(c.set("k0", "-1.0"), ConfigError);
    CHECK_THROWS_AS(c.set("n_r", "3.5"), ConfigError);
    CHECK_THROWS_AS(c.set("cutoff_kind", "gaussian"), ConfigError);
    CHECK_THROWS_AS(c.set("grid_ladder", "log"), ConfigError);
    CHECK_THROWS_AS(c.set("branch", "retarded"), ConfigError);
    CHECK_THROWS_AS(c.set("order", "2nd"), ConfigError);
    CHECK_THROWS_AS(c.set("format", "yaml"), ConfigError);
    CHECK_THROWS_AS(c.set("damping_ladder", "0.1,0.05"), ConfigError);
}

TEST_CASE("pair() names the missing required key") {
    RunConfig c;
    CHECK_THROWS_WITH_AS(c.pair(), doctest::Contains("'k0'"), ConfigError);
    c.set("k0", "1.0");
    CHECK_THROWS_WITH_AS(c.pair(), doctest::Contains("'mu1'"), ConfigError);
    c.set("mu1", "0.1");
    CHECK_THROWS_WITH_AS(c.pair(), doctest::Contains("'mu2'"), ConfigError);
}

TEST_CASE("r_samples: single point, log-spaced range, errors") {
    RunConfig c;
    CHECK_THROWS_AS(c.r_samples(), ConfigError);
    c.set("r_min", "1");
    c.set("r_max", "100");
    c.set("n_r", "5");
    std::vector<double> rs = c.r_samples();
    REQUIRE(rs.size() == 5);
    CHECK(rs.front() == 1.0);
    CHECK(rs.back() == 100.0);
    // log spacing: constant ratio
    CHECK(rs[1] / rs[0] == doctest::Approx(rs[4] / rs[3]).epsilon(1e-12));
    c.set("n_r", "1");
    CHECK_THROWS_AS(c.r_samples(), ConfigError);
    c.set("n_r", "4");
    c.set("r", "7.0");  // explicit r wins over the range
    rs = c.r_samples();
    REQUIRE(rs.size() == 1);
    CHECK(rs[0] == 7.0);
}

TEST_CASE("load_file parses comments, blanks and whitespace") {
    std::string path = "test_config_tmp.cfg";
    {
        std::ofstream f(path);
        f << "# run parameters\n"
          << "\n"
          << "k0 = 1.0\n"
          << "  mu1=0.05\t\n"
          << "mu2 = 0.05\n"
          << "order=all\n";
    }
    RunConfig c;
    c.load_file(path);
    std::remove(path.c_str());
    CHECK(*c.k0 == 1.0);
    CHECK(*c.mu1 == 0.05);
    CHECK(c.order == "all");
}

TEST_CASE("load_file: missing file and bad lines") {
    RunConfig c;
    CHECK_THROWS_AS(c.load_file("no_such_file.cfg"), ConfigError);
    std::string path = "test_config_bad.cfg";
    {
        std::ofstream f(path);
        f << "k0 1.0\n";
    }
    CHECK_THROWS_WITH_AS(c.load_file(path), doctest::Contains("line 1"), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("later assignments override earlier ones (flags over file)") {
    std::string path = "test_config_prec.cfg";
    {
        std::ofstream f(path);
        f << "k0=1.0\nmu1=0.1\nmu2=0.1\nr=2\n";
    }
    RunConfig c;
    c.load_file(path);
    std::remove(path.c_str());
    c.set("r", "9");  // a --set override applied after the file
    CHECK(c.pair().r == 9.0);
}

TEST_CASE("validate catches inconsistent settings") {
    RunConfig c;
    c.set("r_min", "5");
    c.set("r_max", "2");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    RunConfig d;
    d.set("grid_shells", "0");
    CHECK_THROWS_AS(d.validate(), ConfigError);
    RunConfig e;
    e.mu1 = -0.5;  // not reachable through set(); validate still guards it
    CHECK_THROWS_AS(e.validate(), ConfigError);
}
