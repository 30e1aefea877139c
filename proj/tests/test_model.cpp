#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cpq/model.hpp"

using namespace cpq;

static OscillatorPair make_pair() {
    OscillatorPair p;
    p.k0 = 1.0;
    p.mu1 = 0.1;
    p.mu2 = 0.2;
    p.r = 3.0;
    return p;
}

TEST_CASE("validation rejects bad parameters") {
    OscillatorPair p = make_pair();
    p.k0 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = make_pair();
    p.r = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = make_pair();
    p.mu1 = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_pair().mu(3), std::invalid_argument);
}

TEST_CASE("coupling constant is purely imaginary, f*f real non-positive") {
    OscillatorPair p = make_pair();
    Mode m;
    m.kvec = {0.0, 0.6, 0.8};
    m.k = 1.0;
    m.pol = {1.0, 0.0, 0.0};
    for (int which : {1, 2})
        for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
            complexd f = coupling_constant(p, which, a, m, 1.0);
            CHECK(f.real() == 0.0);
            complexd ff = f * f;
            CHECK(ff.imag() == 0.0);
            CHECK(ff.real() <= 0.0);
        }
    // magnitude: |f| = mu |e_l| sqrt(2 pi k / V)
    complexd fx = coupling_constant(p, 1, Axis::X, m, 1.0);
    CHECK(std::abs(fx) == doctest::Approx(0.1 * std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    CHECK(std::abs(coupling_constant(p, 1, Axis::Y, m, 1.0)) == doctest::Approx(0.0));
}

TEST_CASE("coupling scales with weight and volume") {
    OscillatorPair p = make_pair();
    Mode m;
    m.kvec = {2.0, 0.0, 0.0};
    m.k = 2.0;
    m.pol = {0.0, 1.0, 0.0};
    m.weight = 0.25;
    complexd a = coupling_constant(p, 2, Axis::Y, m, 1.0);
    m.weight = 1.0;
    complexd b = coupling_constant(p, 2, Axis::Y, m, 4.0);
    CHECK(std::abs(a - b) < 1e-16);
    CHECK_THROWS_AS(coupling_constant(p, 2, Axis::Y, m, 0.0), std::invalid_argument);
}

TEST_CASE("static polarizability alpha = 2 mu^2 / k0") {
    OscillatorPair p = make_pair();
    CHECK(static_polarizability(p, 1) == doctest::Approx(0.02));
    CHECK(static_polarizability(p, 2) == doctest::Approx(0.08));
}

TEST_CASE("angular moments: delta_ll' structure and values") {
    OscillatorPair p = make_pair();
    double kp = 0.7;
    for (int l = 0; l < 3; ++l)
        for (int lp = 0; lp < 3; ++lp) {
            double same = angular_coupling_moment(p, 1, 1, static_cast<Axis>(l),
                                                  static_cast<Axis>(lp), kp, false, p.r);
            double cross = angular_coupling_moment(p, 1, 2, static_cast<Axis>(l),
                                                   static_cast<Axis>(lp), kp, true, p.r);
            if (l != lp) {
                CHECK(same == 0.0);
                CHECK(cross == 0.0);
            } else {
                CHECK(same ==
                      doctest::Approx(-(2.0 / (3.0 * M_PI)) * kp * 0.01).epsilon(1e-14));
                CHECK(cross == doctest::Approx(-(kp / M_PI) *
                                               h_kernel(static_cast<Axis>(l), kp * p.r) *
                                               0.1 * 0.2)
                                   .epsilon(1e-14));
            }
        }
}

TEST_CASE("angular moment r -> 0 limit uses h(0) = 2/3") {
    OscillatorPair p = make_pair();
    double cross = angular_coupling_moment(p, 1, 2, Axis::Z, Axis::Z, 1.3, true, 1e-9);
    CHECK(cross == doctest::Approx(-(1.3 / M_PI) * (2.0 / 3.0) * 0.02).epsilon(1e-9));
}
