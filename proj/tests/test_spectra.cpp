#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gaugelab/gauge.hpp>
#include <gaugelab/grid.hpp>
#include <gaugelab/operators.hpp>
#include <gaugelab/spectra.hpp>

using namespace gaugelab;

namespace {

HermitianOperator diag_operator(const std::vector<double>& entries) {
    const int n = static_cast<int>(entries.size());
    std::vector<Eigen::Triplet<cdouble>> trips;
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, entries[static_cast<size_t>(i)]);
    return detail::seal_operator(n, trips);
}

double hermiticity_of(const Eigen::SparseMatrix<cdouble>& m) {
    Eigen::SparseMatrix<cdouble> diff = m - Eigen::SparseMatrix<cdouble>(m.adjoint());
    double d = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(diff, k); it; ++it)
            d = std::max(d, std::abs(it.value()));
    return d;
}

Potentials soft_coulomb_on(const Grid& g) {
    return make_named_potentials(g, "soft_coulomb", {{"kappa", 1.0}, {"soft", 0.5}});
}

}  // namespace

TEST_CASE("dense spectrum reproduces closed-form stencil eigenvalues") {
    SECTION("identity") {
        std::vector<Eigen::Triplet<cdouble>> trips;
        for (int i = 0; i < 16; ++i) trips.emplace_back(i, i, 1.0);
        const Spectrum s = dense_spectrum(detail::seal_operator(16, trips));
        REQUIRE(s.method == SpectrumMethod::Dense);
        REQUIRE(s.eigenvalues.size() == 16);
        for (double v : s.eigenvalues) REQUIRE(v == Catch::Approx(1.0).margin(1e-13));
        for (double r : s.residuals) REQUIRE(r <= 1e-13);
    }
    SECTION("free periodic kinetic, N = 8") {
        const int n = 8;
        const double length = 4.0, m = 1.0;
        const Grid g = Grid::periodic_1d(n, length);
        const Spectrum s = dense_spectrum(schrodinger_hamiltonian(g, make_vacuum(g), 0.0, 1.0, m));
        std::vector<double> expect;
        for (int j = 0; j < n; ++j)
            expect.push_back((1.0 - std::cos(2.0 * std::numbers::pi * j / n)) / (m * g.h[0] * g.h[0]));
        std::sort(expect.begin(), expect.end());
        for (int j = 0; j < n; ++j)
            REQUIRE(s.eigenvalues[static_cast<size_t>(j)] ==
                    Catch::Approx(expect[static_cast<size_t>(j)]).margin(1e-12));
    }
    SECTION("free Dirichlet kinetic, N = 16") {
        const int n = 16;
        const double length = 8.5, m = 1.0;
        const Grid g = Grid::dirichlet_1d(n, length);
        const Spectrum s = dense_spectrum(schrodinger_hamiltonian(g, make_vacuum(g), 0.0, 1.0, m));
        for (int j = 1; j <= n; ++j) {
            const double expect =
                (1.0 - std::cos(std::numbers::pi * j / (n + 1))) / (m * g.h[0] * g.h[0]);
            REQUIRE(s.eigenvalues[static_cast<size_t>(j - 1)] == Catch::Approx(expect).margin(1e-11));
        }
    }
    SECTION("diagonal operator sorts its entries") {
        const std::vector<double> vals{3.5, -2.0, 0.25, 9.0, -7.5, 4.0};
        const Spectrum s = dense_spectrum(diag_operator(vals));
        std::vector<double> expect = vals;
        std::sort(expect.begin(), expect.end());
        for (size_t i = 0; i < vals.size(); ++i)
            REQUIRE(s.eigenvalues[i] == Catch::Approx(expect[i]).margin(1e-14));
    }
}

TEST_CASE("dense residual certification and size cap") {
    const Grid g = Grid::dirichlet_1d(128, 40.0);
    const HermitianOperator h = schrodinger_hamiltonian(g, soft_coulomb_on(g), 0.0, 1.0, 1.0);
    const double scale = std::max(1.0, detail::operator_scale(h));

    const Spectrum s = dense_spectrum(h);
    double worst = 0.0;
    for (double r : s.residuals) worst = std::max(worst, r);
    REQUIRE(worst <= 1e-12 * scale);
    REQUIRE(worst <= kResidualTol * scale);
    REQUIRE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));

    REQUIRE_THROWS_AS(dense_spectrum(h, 64), SizeExceeded);
    HermitianOperator big;
    big.n = kDenseCap + 1;
    big.entries.resize(big.n, big.n);
    REQUIRE_THROWS_AS(dense_spectrum(big), SizeExceeded);
}

TEST_CASE("lowest_k agrees with the dense solver") {
    SECTION("diagonal operator, k smallest entries") {
        std::mt19937_64 rng(11u);
        std::uniform_real_distribution<double> dist(-5.0, 5.0);
        std::vector<double> vals(40);
        for (double& v : vals) v = dist(rng);
        const Spectrum s = lowest_k(diag_operator(vals), 7);
        REQUIRE(s.method == SpectrumMethod::IterativeLowK);
        std::vector<double> expect = vals;
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < 7; ++i)
            REQUIRE(s.eigenvalues[static_cast<size_t>(i)] ==
                    Catch::Approx(expect[static_cast<size_t>(i)]).margin(1e-12));
    }
    SECTION("k = n on a degenerate periodic kinetic, N = 24") {
        const Grid g = Grid::periodic_1d(24, 3.0);
        const HermitianOperator h = schrodinger_hamiltonian(g, make_vacuum(g), 0.0, 1.0, 1.0);
        const Spectrum dense = dense_spectrum(h);
        const Spectrum iter = lowest_k(h, 24);
        for (int i = 0; i < 24; ++i)
            REQUIRE(iter.eigenvalues[static_cast<size_t>(i)] ==
                    Catch::Approx(dense.eigenvalues[static_cast<size_t>(i)]).margin(1e-10));
    }
    SECTION("soft-Coulomb lowest three, N = 512") {
        const Grid g = Grid::dirichlet_1d(512, 40.0);
        const HermitianOperator h = schrodinger_hamiltonian(g, soft_coulomb_on(g), 0.0, 1.0, 1.0);
        const Spectrum dense = dense_spectrum(h);
        const Spectrum iter = lowest_k(h, 3);
        const SpectrumComparison cmp = spectrum_compare(dense, iter, 3, 1e-9);
        INFO("deviation " << cmp.max_deviation);
        REQUIRE(cmp.within);
        const double scale = std::max(1.0, detail::operator_scale(h));
        for (double r : iter.residuals) REQUIRE(r <= kResidualTol * scale);
    }
}

TEST_CASE("degenerate pairs are found with their multiplicity") {
    const Grid g = Grid::periodic_1d(64, 6.4);
    const HermitianOperator h = schrodinger_hamiltonian(g, make_vacuum(g), 0.0, 1.0, 1.0);
    const Spectrum dense = dense_spectrum(h);
    const Spectrum iter = lowest_k(h, 5);
    for (int i = 0; i < 5; ++i)
        REQUIRE(iter.eigenvalues[static_cast<size_t>(i)] ==
                Catch::Approx(dense.eigenvalues[static_cast<size_t>(i)]).margin(1e-10));
    // ground mode is simple, the next two levels are +/- momentum pairs
    const std::vector<int> clusters = degeneracy_clusters(iter.eigenvalues, 1e-8);
    REQUIRE(clusters == std::vector<int>{1, 2, 2});
}

TEST_CASE("lowest_k prefix consistency") {
    const Grid g = Grid::dirichlet_1d(256, 40.0);
    const HermitianOperator h = schrodinger_hamiltonian(g, soft_coulomb_on(g), 0.0, 1.0, 1.0);
    const Spectrum s3 = lowest_k(h, 3);
    const Spectrum s7 = lowest_k(h, 7);
    for (int i = 0; i < 3; ++i)
        REQUIRE(s3.eigenvalues[static_cast<size_t>(i)] ==
                Catch::Approx(s7.eigenvalues[static_cast<size_t>(i)]).margin(1e-10));
    const Spectrum dense = dense_spectrum(h);
    REQUIRE(spectrum_compare(dense, s7, 7, 1e-9).within);
}

TEST_CASE("harmonic well reproduces the continuum ladder") {
    // half-integer levels of the unit-frequency well; O(h^2) lattice error
    const Grid g = Grid::dirichlet_1d(1023, 20.0);
    const Potentials p = make_named_potentials(g, "harmonic_well", {{"k", 1.0}});
    const HermitianOperator h = schrodinger_hamiltonian(g, p, 0.0, 1.0, 1.0);
    const Spectrum s = lowest_k(h, 4);
    for (int j = 0; j < 4; ++j) {
        INFO("level " << j << " = " << s.eigenvalues[static_cast<size_t>(j)]);
        REQUIRE(s.eigenvalues[static_cast<size_t>(j)] ==
                Catch::Approx(j + 0.5).margin(2e-3));
    }
}

TEST_CASE("spectrum_compare semantics") {
    const Grid g = Grid::dirichlet_1d(64, 40.0);
    const HermitianOperator h = schrodinger_hamiltonian(g, soft_coulomb_on(g), 0.0, 1.0, 1.0);
    const Spectrum s = dense_spectrum(h);

    SECTION("identical spectra compare to zero") {
        const SpectrumComparison cmp = spectrum_compare(s, s, 64, 1e-12);
        REQUIRE(cmp.max_deviation == 0.0);
        REQUIRE(cmp.within);
        REQUIRE(cmp.compared == 64);
    }
    SECTION("constant shift moves every eigenvalue by exactly |qc|") {
        const double qc = 0.37;
        Eigen::SparseMatrix<cdouble> id(h.n, h.n);
        id.setIdentity();
        HermitianOperator shifted{h.n, h.entries - qc * id, h.hermiticity_defect};
        const Spectrum s2 = dense_spectrum(shifted);
        const SpectrumComparison cmp = spectrum_compare(s, s2, 64, 1.0);
        REQUIRE(std::abs(cmp.max_deviation - qc) <= 1e-12);
        double smallest = 1e300;
        for (int i = 0; i < 64; ++i)
            smallest = std::min(smallest, std::abs(s.eigenvalues[static_cast<size_t>(i)] -
                                                   s2.eigenvalues[static_cast<size_t>(i)]));
        REQUIRE(std::abs(smallest - qc) <= 1e-12);  // every value shifts, not just the worst
    }
    SECTION("insufficient values are loud") {
        Spectrum tiny;
        tiny.eigenvalues = {1.0, 2.0, 3.0};
        REQUIRE_THROWS_AS(spectrum_compare(tiny, s, 5), InsufficientData);
        REQUIRE_THROWS_AS(spectrum_compare(s, s, 0), ConfigError);
        REQUIRE(spectrum_compare(tiny, s, 3, 10.0).compared == 3);
    }
}

TEST_CASE("diagonal-phase conjugation preserves the spectrum") {
    const Grid g = Grid::periodic_1d(96, 12.0);
    const Potentials p = soft_coulomb_on(g);
    const HermitianOperator h = schrodinger_hamiltonian(g, p, 0.0, 1.0, 1.0);

    SECTION("random phases") {
        std::mt19937_64 rng(7u);
        std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
        std::vector<cdouble> u(static_cast<size_t>(h.n));
        for (auto& z : u) z = std::exp(cdouble(0.0, dist(rng)));
        std::vector<Eigen::Triplet<cdouble>> trips;
        for (int k = 0; k < h.entries.outerSize(); ++k)
            for (Eigen::SparseMatrix<cdouble>::InnerIterator it(h.entries, k); it; ++it)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                                   u[static_cast<size_t>(it.row())] * it.value() *
                                       std::conj(u[static_cast<size_t>(it.col())]));
        Eigen::SparseMatrix<cdouble> m(h.n, h.n);
        m.setFromTriplets(trips.begin(), trips.end());
        HermitianOperator conj{h.n, m, hermiticity_of(m)};
        const SpectrumComparison cmp =
            spectrum_compare(dense_spectrum(h), dense_spectrum(conj), h.n, 1e-9);
        INFO("deviation " << cmp.max_deviation);
        REQUIRE(cmp.within);
    }
    SECTION("static gauge transform") {
        const GaugeFunction gf = make_named_gauge(
            g, "static_fourier", {{"seed", 5.0}, {"amp", 0.4}, {"nmodes", 3.0}, {"kmax", 2.0}});
        const HermitianOperator hp =
            schrodinger_hamiltonian(g, transform_potentials(p, gf), 0.0, 1.0, 1.0);
        const SpectrumComparison cmp =
            spectrum_compare(dense_spectrum(h), dense_spectrum(hp), h.n, 1e-9);
        INFO("deviation " << cmp.max_deviation);
        REQUIRE(cmp.within);
    }
}

TEST_CASE("non-convergence is loud and carries the partial count") {
    const Grid g = Grid::periodic_1d(64, 6.4);
    const HermitianOperator h = schrodinger_hamiltonian(g, make_vacuum(g), 0.0, 1.0, 1.0);

    SECTION("zero restart budget") {
        LowestKOptions opts;
        opts.restart_cap_per_eig = 0;
        REQUIRE_THROWS_AS(lowest_k(h, 3, opts), NoConvergence);
    }
    SECTION("an unreachable certification threshold still reports partials") {
        LowestKOptions opts;
        opts.restart_cap_per_eig = 1;
        opts.residual_tol = 0.0;  // no pair can certify, so the cap must trip
        try {
            (void)lowest_k(h, 5, opts);
            FAIL("expected NoConvergence");
        } catch (const NoConvergence& e) {
            REQUIRE(e.converged_count >= 5);
        }
    }
    SECTION("bad k is rejected") {
        REQUIRE_THROWS_AS(lowest_k(h, 0), ConfigError);
        REQUIRE_THROWS_AS(lowest_k(h, 65), ConfigError);
    }
}
