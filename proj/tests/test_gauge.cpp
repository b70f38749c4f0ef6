#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "gaugelab/gauge.hpp"

using namespace gaugelab;
using std::numbers::pi;

namespace {

ScalarField random_state(const Grid& g, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField f(g);
    for (auto& v : f.values) v = cdouble(u(rng), u(rng));
    normalize(f);
    return f;
}

ScalarField gaussian_state(const Grid& g, double sigma) {
    ScalarField f = sample_scalar(g, [&](double x, double y) {
        return std::exp(-(x * x + y * y) / (2 * sigma * sigma));
    });
    normalize(f);
    return f;
}

double potentials_distance(const Potentials& p1, const Potentials& p2, double t) {
    double d = sup_norm(p1.a0_field(t) - p2.a0_field(t));
    VectorField a1 = p1.a_field(t), a2 = p2.a_field(t);
    for (int c = 0; c < p1.grid.dim; ++c) d = std::max(d, sup_norm(a1[c] - a2[c]));
    return d;
}

} // namespace

TEST_CASE("identity gauge leaves potentials unchanged", "[gauge]") {
    Grid g = Grid::periodic_1d(64, 20.0);
    Potentials p = make_named_potentials(g, "soft_coulomb", {{"kappa", 1.0}, {"soft", 0.5}});
    Potentials tp = transform_potentials(p, make_named_gauge(g, "zero", {}));
    REQUIRE(potentials_distance(p, tp, 0.0) == 0.0);
    REQUIRE(potentials_distance(p, tp, 1.3) == 0.0);
    REQUIRE(tp.static_flag);
}

TEST_CASE("temporal gauge cancels the scalar potential", "[gauge]") {
    Grid g = Grid::periodic_1d(128, 40.0);
    Potentials p = make_named_potentials(g, "soft_coulomb", {{"kappa", 1.0}, {"soft", 0.5}});
    GaugeFunction chi = make_temporal_gauge(p);
    Potentials tp = transform_potentials(p, chi);

    REQUIRE(sup_norm(tp.a0_field(0.0)) == 0.0);
    REQUIRE(sup_norm(tp.a0_field(0.7)) == 0.0);

    // a' = t grad a0
    const double t = 0.7;
    VectorField expect = p.grad_a0_field(0.0);
    VectorField got = tp.a_field(t);
    REQUIRE(sup_norm(got[0] - t * expect[0]) < 1e-14);
    REQUIRE_FALSE(tp.static_flag);
}

TEST_CASE("spatially constant rate shifts a0 only", "[gauge]") {
    Grid g = Grid::periodic_1d(64, 16.0);
    Potentials p = make_named_potentials(g, "soft_coulomb", {});
    const double c = 0.8;
    Potentials tp = transform_potentials(p, make_named_gauge(g, "constant_rate", {{"c", c}}));
    VectorField a1 = p.a_field(0.4), a2 = tp.a_field(0.4);
    REQUIRE(sup_norm(a2[0] - a1[0]) == 0.0);
    ScalarField d = tp.a0_field(0.4) - p.a0_field(0.4);
    for (int i = 0; i < g.size(); ++i) REQUIRE(std::abs(d[i] + c) < 1e-15);
    REQUIRE(tp.static_flag);  // chi = ct keeps the transformed pair static
}

TEST_CASE("gauge transform composes and inverts", "[gauge]") {
    Grid g = Grid::periodic_2d(24, 24, 8.0, 8.0);
    Potentials p = make_named_potentials(g, "transverse_fourier", {{"seed", 5.0}, {"amp", 0.3}});
    GaugeFunction g1 = make_fourier_gauge(g, 11, 0.4);
    GaugeFunction g2 = make_fourier_gauge(g, 12, 0.2);

    Potentials once = transform_potentials(transform_potentials(p, g1), g2);
    Potentials both = transform_potentials(p, composed(g1, g2));
    REQUIRE(potentials_distance(once, both, 0.9) < 1e-13);

    Potentials back = transform_potentials(transform_potentials(p, g1), negated(g1));
    REQUIRE(potentials_distance(p, back, 0.6) < 1e-13);
}

TEST_CASE("non-periodic gauge functions are rejected on the torus", "[gauge]") {
    Grid g = Grid::periodic_1d(32, 10.0);
    Potentials p = make_vacuum(g);
    GaugeFunction lin = make_named_gauge(g, "linear", {{"k", 0.5}});
    REQUIRE_THROWS_AS(transform_potentials(p, lin), NonPeriodicGauge);

    Grid gd = Grid::dirichlet_1d(32, 10.0);
    Potentials pd = make_vacuum(gd);
    REQUIRE_NOTHROW(transform_potentials(pd, lin));
}

TEST_CASE("state transform is a pointwise phase", "[gauge]") {
    Grid g = Grid::periodic_1d(64, 12.0);
    ScalarField psi = random_state(g, 3);
    const double q = 1.3, c = 0.77;

    ScalarField tpsi = transform_state(psi, make_named_gauge(g, "constant", {{"c", c}}), 0.0, q);
    for (int i = 0; i < g.size(); ++i) {
        REQUIRE(std::abs(std::abs(tpsi[i]) - std::abs(psi[i])) < 1e-15);
        REQUIRE(std::abs(tpsi[i] - psi[i] * std::polar(1.0, q * c)) < 1e-15);
    }

    ScalarField same = transform_state(psi, make_named_gauge(g, "zero", {}), 0.0, q);
    REQUIRE(sup_norm(same - psi) == 0.0);
}

TEST_CASE("state transform is unitary", "[gauge]") {
    Grid g = Grid::periodic_2d(16, 16, 6.0, 6.0);
    GaugeFunction chi = make_fourier_gauge(g, 21, 0.6);
    ScalarField f = random_state(g, 31), h = random_state(g, 32);
    const double q = 0.9, t = 0.42;
    ScalarField tf = transform_state(f, chi, t, q), th = transform_state(h, chi, t, q);
    REQUIRE(std::abs(norm(tf) - 1.0) < 1e-14);
    REQUIRE(std::abs(inner_product(tf, th) - inner_product(f, h)) < 1e-14);
}

TEST_CASE("spinor transform phases both components", "[gauge]") {
    Grid g = Grid::periodic_1d(48, 10.0);
    SpinorField s(g);
    s.upper = random_state(g, 41);
    s.lower = random_state(g, 42);
    normalize(s);
    GaugeFunction chi = make_fourier_gauge(g, 43, 0.5);
    SpinorField ts = transform_state(s, chi, 0.2, 1.1);
    REQUIRE(std::abs(norm(ts) - 1.0) < 1e-14);
    ScalarField cf = chi.chi_at(g, 0.2);
    for (int i = 0; i < g.size(); ++i) {
        cdouble ph = std::polar(1.0, 1.1 * cf[i].real());
        REQUIRE(std::abs(ts.upper[i] - ph * s.upper[i]) < 1e-15);
        REQUIRE(std::abs(ts.lower[i] - ph * s.lower[i]) < 1e-15);
    }
}

TEST_CASE("electrostatic field strength from the Coulomb analog", "[gauge]") {
    Grid g = Grid::periodic_1d(128, 30.0);
    Potentials p = make_named_potentials(g, "soft_coulomb", {{"kappa", 1.5}, {"soft", 0.5}});
    FieldStrength f = fields_from_potentials(p, 0.0);
    REQUIRE_FALSE(f.b.has_value());
    VectorField expect = p.grad_a0_field(0.0);
    REQUIRE(sup_norm(f.e[0] - (-1.0) * expect[0]) == 0.0);
}

TEST_CASE("temporal-gauge pair has identical field strengths", "[gauge]") {
    Grid g = Grid::periodic_1d(96, 24.0);
    Potentials p = make_named_potentials(g, "soft_coulomb", {});
    Potentials tp = transform_potentials(p, make_temporal_gauge(p));
    for (double t : {0.0, 0.5, 1.0}) {
        FieldStrength f1 = fields_from_potentials(p, t);
        FieldStrength f2 = fields_from_potentials(tp, t);
        REQUIRE(sup_norm(f2.e - f1.e) < 1e-10);
    }
}

TEST_CASE("uniform-field gauges give the same interior B", "[gauge]") {
    const double B = 1.7;
    Grid g = Grid::dirichlet_2d(24, 24, 8.0, 8.0);
    Potentials sym = make_named_potentials(g, "uniform_b_symmetric", {{"b", B}});
    Potentials lan = make_named_potentials(g, "uniform_b_landau", {{"b", B}});
    ScalarField b1 = *fields_from_potentials(sym, 0.0).b;
    ScalarField b2 = *fields_from_potentials(lan, 0.0).b;
    for (int ix = 1; ix < 23; ++ix)
        for (int iy = 1; iy < 23; ++iy) {
            REQUIRE(std::abs(b1.at(ix, iy) - B) < 1e-13);
            REQUIRE(std::abs(b2.at(ix, iy) - B) < 1e-13);
        }
}

TEST_CASE("field strengths are gauge invariant", "[gauge]") {
    Grid g = Grid::periodic_2d(32, 32, 10.0, 10.0);
    Potentials p = make_named_potentials(g, "transverse_fourier", {{"seed", 7.0}, {"amp", 0.4}});
    GaugeFunction chi = make_fourier_gauge(g, 51, 0.5);

    GaugeInvarianceReport zero = gauge_invariance_check(p, make_named_gauge(g, "zero", {}), {0.0, 1.0});
    REQUIRE(zero.max_e_deviation == 0.0);
    REQUIRE(zero.max_b_deviation == 0.0);

    GaugeInvarianceReport rep = gauge_invariance_check(p, chi, {0.0, 0.3, 0.9});
    REQUIRE(rep.max_e_deviation < 1e-10);
    REQUIRE(rep.max_b_deviation < 1e-10);
}

TEST_CASE("time-difference fallback is second order", "[gauge]") {
    Grid g = Grid::periodic_1d(48, 10.0);
    GaugeFunction chi = make_fourier_gauge(g, 61, 0.8, 4, 3, 2.0);
    auto fd_error = [&](double step) {
        GaugeFunction fd = make_gauge_from_chi(chi.chi, step);
        return sup_norm(fd.dchi_dt_at(g, 0.37) - chi.dchi_dt_at(g, 0.37));
    };
    double order = std::log2(fd_error(2e-3) / fd_error(1e-3));
    REQUIRE(order > 1.8);
    REQUIRE(order < 2.2);

    // the invariance check itself stays at roundoff even with the fallback,
    // because both sides consume the same difference quotient
    Potentials p = make_named_potentials(g, "soft_coulomb", {});
    GaugeInvarianceReport rep = gauge_invariance_check(p, make_gauge_from_chi(chi.chi), {0.2, 0.8});
    REQUIRE(rep.used_fd_time_derivative);
    REQUIRE(rep.max_e_deviation < 1e-10);
}

TEST_CASE("analytic gradient closures agree with the stencil at second order", "[gauge]") {
    GaugeFunction c32 = make_fourier_gauge(Grid::periodic_1d(32, 10.0), 71, 0.5);
    double d32 = c32.consistency_defect(Grid::periodic_1d(32, 10.0), 0.1);
    double d64 = c32.consistency_defect(Grid::periodic_1d(64, 10.0), 0.1);
    double order = std::log2(d32 / d64);
    REQUIRE(order > 1.8);
    REQUIRE(order < 2.2);
}

TEST_CASE("constant gauge produces no expectation shift", "[gauge]") {
    Grid g = Grid::periodic_1d(64, 14.0);
    ScalarField psi = random_state(g, 81);
    ExpectationShiftReport rep =
        expectation_shift_check(psi, make_named_gauge(g, "constant", {{"c", 2.2}}), 0.0, 1.4);
    REQUIRE(rep.max_deviation < 1e-13);
    REQUIRE(std::abs(rep.shift_measured[0]) < 1e-13);
}

TEST_CASE("linear gauge shifts momentum by q k", "[gauge]") {
    const double q = 1.0, k = 0.5, L = 20.0;
    auto run = [&](int n) {
        Grid g = Grid::dirichlet_1d(n, L);
        ScalarField psi = gaussian_state(g, 2.0);
        return expectation_shift_check(psi, make_named_gauge(g, "linear", {{"k", k}}), 0.0, q);
    };
    ExpectationShiftReport rep = run(256);
    REQUIRE(std::abs(rep.shift_measured[0] - q * k) < 1e-2);
    // both sides share the stencil, so the residual shrinks at O(h^2)
    double order = std::log2(run(255).max_deviation / run(511).max_deviation);
    REQUIRE(order > 1.8);
    REQUIRE(order < 2.2);
}

TEST_CASE("smooth-gauge expectation shift converges at second order", "[gauge]") {
    const double L = 12.0;
    auto dev = [&](int n) {
        Grid g = Grid::periodic_2d(n, n, L, L);
        ScalarField psi = gaussian_state(g, 1.5);
        GaugeFunction chi = make_fourier_gauge(g, 91, 0.7);
        return expectation_shift_check(psi, chi, 0.15, 1.2).max_deviation;
    };
    double order = std::log2(dev(32) / dev(64));
    REQUIRE(order > 1.8);
    REQUIRE(order < 2.2);
}

TEST_CASE("expectation shift requires a normalized state", "[gauge]") {
    Grid g = Grid::periodic_1d(32, 8.0);
    ScalarField psi = random_state(g, 101);
    for (auto& v : psi.values) v *= 2.0;
    REQUIRE_THROWS_AS(expectation_shift_check(psi, make_named_gauge(g, "zero", {}), 0.0, 1.0),
                      NotNormalized);
}
