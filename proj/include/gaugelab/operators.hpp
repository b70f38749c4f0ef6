#pragma once

#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <vector>

#include "gaugelab/gauge.hpp"
#include "gaugelab/grid.hpp"
#include "gaugelab/helmholtz.hpp"

namespace gaugelab {

// How the vector potential enters the kinetic term.
//  Compact:     hopping terms carry link phases exp(-iq∫A·dl) (Gauss-Legendre
//               integrals of the closures). Gauge covariance H' = U H U† holds
//               exactly on the lattice, for any chi.
//  Symmetrized: literal continuum expansion (1/2m)[p² - q(p·A + A·p) + q²A²];
//               covariance only to O(h²). Kept for term-by-term comparisons.
enum class Coupling { Compact, Symmetrized };

enum class OperatorKind { Schrodinger, Dirac };

struct HermitianOperator {
    int n = 0;
    Eigen::SparseMatrix<cdouble> entries;
    double hermiticity_defect = 0.0;  // ‖M − M†‖∞ recorded at build

    [[nodiscard]] std::vector<cdouble> apply(const std::vector<cdouble>& v) const {
        if (static_cast<int>(v.size()) != n)
            throw GridMismatch("HermitianOperator::apply: size mismatch");
        Eigen::Map<const Eigen::VectorXcd> in(v.data(), n);
        Eigen::VectorXcd out = entries * in;
        return {out.data(), out.data() + n};
    }
    [[nodiscard]] Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        return entries * v;
    }
};

inline std::vector<cdouble> flatten(const ScalarField& f) { return f.values; }

// spinors flatten as [upper | lower]
inline std::vector<cdouble> flatten(const SpinorField& s) {
    std::vector<cdouble> v;
    v.reserve(2 * s.upper.values.size());
    v.insert(v.end(), s.upper.values.begin(), s.upper.values.end());
    v.insert(v.end(), s.lower.values.begin(), s.lower.values.end());
    return v;
}

inline ScalarField unflatten_scalar(const Grid& g, const std::vector<cdouble>& v) {
    ScalarField f(g);
    f.values = v;
    return f;
}

inline SpinorField unflatten_spinor(const Grid& g, const std::vector<cdouble>& v) {
    SpinorField s(g);
    const auto half = static_cast<size_t>(g.size());
    std::copy(v.begin(), v.begin() + static_cast<ptrdiff_t>(half), s.upper.values.begin());
    std::copy(v.begin() + static_cast<ptrdiff_t>(half), v.end(), s.lower.values.begin());
    return s;
}

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1]
inline constexpr std::array<double, 8> kGlNodes{
    0.0950125098376375, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> kGlWeights{
    0.1894506104550686, 0.1826034150449236, 0.1691565193950026, 0.1495959888165768,
    0.1246289712555340, 0.0951585116824926, 0.0622535239386477, 0.0271524594117540};

// ∫ f dl along the axis-aligned segment of length len starting at (x, y)
inline double line_integral(const ScalarClosure& f, int axis, double x, double y, double len,
                            double t) {
    double acc = 0.0;
    for (int j = 0; j < 8; ++j) {
        for (double sign : {-1.0, 1.0}) {
            const double s = 0.5 * (1.0 + sign * kGlNodes[static_cast<size_t>(j)]);
            const double px = axis == 0 ? x + s * len : x;
            const double py = axis == 1 ? y + s * len : y;
            acc += kGlWeights[static_cast<size_t>(j)] * f(px, py, t);
        }
    }
    return 0.5 * len * acc;
}

// forward link phases u[i] = exp(iq ∫_{site i}^{site i+1} A·dl) along axis.
// Closure-backed potentials integrate exactly (Gauss-Legendre); sampler-backed
// ones fall back to the trapezoid rule on lattice samples, O(h²).
inline std::vector<cdouble> forward_link_phases(const Grid& g, const Potentials& p, double t,
                                                double q, int axis) {
    std::vector<cdouble> u(static_cast<size_t>(g.size()), cdouble(1.0, 0.0));
    const double h = g.h[static_cast<size_t>(axis)];
    if (p.has_closures()) {
        const ScalarClosure& a = p.a[static_cast<size_t>(axis)];
        for (int ix = 0; ix < g.n[0]; ++ix)
            for (int iy = 0; iy < (g.dim == 2 ? g.n[1] : 1); ++iy) {
                const double theta =
                    q * line_integral(a, axis, g.x(ix), g.dim == 2 ? g.y(iy) : 0.0, h, t);
                u[static_cast<size_t>(g.index(ix, iy))] = std::polar(1.0, theta);
            }
        return u;
    }
    VectorField av = p.a_field(t);
    const ScalarField& ac = av[axis];
    for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < (g.dim == 2 ? g.n[1] : 1); ++iy) {
            const cdouble here = ac.at(ix, iy);
            const cdouble next = gaugelab::detail::shifted_value(ac, ix, iy, axis, +1);
            const double theta = q * 0.5 * h * std::real(here + next);
            u[static_cast<size_t>(g.index(ix, iy))] = std::polar(1.0, theta);
        }
    return u;
}

inline HermitianOperator seal_operator(int n, std::vector<Eigen::Triplet<cdouble>>& trips) {
    HermitianOperator op;
    op.n = n;
    op.entries.resize(n, n);
    op.entries.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseMatrix<cdouble> diff = op.entries;
    diff -= Eigen::SparseMatrix<cdouble>(op.entries.adjoint());
    double defect = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(diff, k); it; ++it)
            defect = std::max(defect, std::abs(it.value()));
    op.hermiticity_defect = defect;
    return op;
}

// does site (ix, iy) have a forward neighbor along axis, and which one
inline bool forward_neighbor(const Grid& g, int ix, int iy, int axis, int& jx, int& jy) {
    jx = ix;
    jy = iy;
    int& ja = axis == 0 ? jx : jy;
    ++ja;
    if (ja == g.n[static_cast<size_t>(axis)]) {
        if (g.boundary == Boundary::Dirichlet) return false;
        ja = 0;
    }
    return true;
}

template <class F>
void for_each_site(const Grid& g, F&& f) {
    for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < (g.dim == 2 ? g.n[1] : 1); ++iy) f(ix, iy);
}

// covariant kinetic part (1/2m)(p − qA)² as triplets; compact mode attaches
// link phases, symmetrized mode adds the literal cross and |A|² terms
inline void add_schrodinger_kinetic(std::vector<Eigen::Triplet<cdouble>>& trips, const Grid& g,
                                    const Potentials& p, double t, double q, double m,
                                    Coupling coupling) {
    for (int axis = 0; axis < g.dim; ++axis) {
        const double h = g.h[static_cast<size_t>(axis)];
        const double w = 1.0 / (2.0 * m * h * h);
        std::vector<cdouble> u;
        if (coupling == Coupling::Compact) u = forward_link_phases(g, p, t, q, axis);
        for_each_site(g, [&](int ix, int iy) {
            const int i = g.index(ix, iy);
            trips.emplace_back(i, i, cdouble(2.0 * w));
            int jx, jy;
            if (!forward_neighbor(g, ix, iy, axis, jx, jy)) return;
            const int j = g.index(jx, jy);
            const cdouble phase =
                coupling == Coupling::Compact ? u[static_cast<size_t>(i)] : cdouble(1.0);
            trips.emplace_back(i, j, -w * std::conj(phase));
            trips.emplace_back(j, i, -w * phase);
        });
    }
    if (coupling == Coupling::Symmetrized) {
        VectorField av = p.a_field(t);
        // cross term iq/(2m)(D·diag(A) + diag(A)·D), shared central stencil
        for (int axis = 0; axis < g.dim; ++axis) {
            const double h = g.h[static_cast<size_t>(axis)];
            const ScalarField& ac = av[axis];
            for_each_site(g, [&](int ix, int iy) {
                const int i = g.index(ix, iy);
                int jx, jy;
                if (!forward_neighbor(g, ix, iy, axis, jx, jy)) return;
                const int j = g.index(jx, jy);
                const cdouble coeff = cdouble(0.0, 1.0) * q / (2.0 * m) *
                                      (std::real(ac.at(ix, iy)) + std::real(ac.at(jx, jy))) /
                                      (2.0 * h);
                trips.emplace_back(i, j, coeff);
                trips.emplace_back(j, i, std::conj(coeff));
            });
        }
        for_each_site(g, [&](int ix, int iy) {
            const int i = g.index(ix, iy);
            double a2 = 0.0;
            for (int c = 0; c < g.dim; ++c) a2 += std::pow(std::real(av[c].at(ix, iy)), 2);
            trips.emplace_back(i, i, cdouble(q * q * a2 / (2.0 * m)));
        });
    }
}

// a0_values == nullptr omits the scalar-potential term entirely (used by the
// Yang operator: assembling H and then subtracting q·diag(A⁰) would reintroduce
// one rounding step per diagonal entry; omission keeps the identity exact)
inline HermitianOperator build_schrodinger(const Grid& g, const Potentials& p, double t, double q,
                                           double m, Coupling coupling,
                                           const ScalarField* a0_values) {
    if (m <= 0.0) throw ConfigError("schrodinger_hamiltonian: mass must be positive");
    require_same_grid(g, p.grid, "schrodinger_hamiltonian");
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(g.size()) * static_cast<size_t>(3 * g.dim + 1));
    add_schrodinger_kinetic(trips, g, p, t, q, m, coupling);
    if (a0_values != nullptr) {
        for (int i = 0; i < g.size(); ++i)
            trips.emplace_back(i, i, cdouble(q * std::real((*a0_values)[i])));
    }
    return seal_operator(g.size(), trips);
}

// 2N x 2N Dirac Hamiltonian alpha(p − qA) + beta m + q·diag(A⁰) with
// alpha = sigma_1, beta = sigma_3 on the [upper | lower] layout
inline HermitianOperator build_dirac(const Grid& g, const Potentials& p, double t, double q,
                                     double m, Coupling coupling, double wilson_r,
                                     const ScalarField* a0_values) {
    if (g.dim != 1) throw DimensionUnsupported("dirac_hamiltonian_1p1: 1D grids only");
    if (m <= 0.0) throw ConfigError("dirac_hamiltonian_1p1: mass must be positive");
    require_same_grid(g, p.grid, "dirac_hamiltonian_1p1");
    const int nsite = g.size();
    const double h = g.h[0];
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(nsite) * 10);

    std::vector<cdouble> u(static_cast<size_t>(nsite), cdouble(1.0));
    if (coupling == Coupling::Compact) u = detail::forward_link_phases(g, p, t, q, 0);
    std::vector<double> asym;
    if (coupling == Coupling::Symmetrized) {
        VectorField av = p.a_field(t);
        asym.resize(static_cast<size_t>(nsite));
        for (int i = 0; i < nsite; ++i) asym[static_cast<size_t>(i)] = std::real(av[0][i]);
    }

    for (int i = 0; i < nsite; ++i) {
        // mass term on the diagonal of each block
        trips.emplace_back(i, i, cdouble(m));
        trips.emplace_back(nsite + i, nsite + i, cdouble(-m));
        if (a0_values != nullptr) {
            const cdouble v(q * std::real((*a0_values)[i]));
            trips.emplace_back(i, i, v);
            trips.emplace_back(nsite + i, nsite + i, v);
        }
        // sigma_1 couples the blocks through P = p − qA
        if (coupling == Coupling::Symmetrized) {
            const cdouble diag(-q * asym[static_cast<size_t>(i)]);
            trips.emplace_back(i, nsite + i, diag);
            trips.emplace_back(nsite + i, i, diag);
        }
        int jx, jy;
        if (!detail::forward_neighbor(g, i, 0, 0, jx, jy)) continue;
        const int j = jx;
        const cdouble phase = coupling == Coupling::Compact ? u[static_cast<size_t>(i)] : cdouble(1.0);
        const cdouble hop = cdouble(0.0, -1.0) / (2.0 * h) * std::conj(phase);
        // P[i,j] = -i·conj(u)/2h, P[j,i] = +i·u/2h; placed in both sigma_1 blocks
        trips.emplace_back(i, nsite + j, hop);
        trips.emplace_back(nsite + i, j, hop);
        trips.emplace_back(j, nsite + i, std::conj(hop));
        trips.emplace_back(nsite + j, i, std::conj(hop));
        if (wilson_r != 0.0) {
            // beta·(−r/2h)·covariant second difference, pushing doublers up
            const double wr = wilson_r / (2.0 * h);
            trips.emplace_back(i, j, -wr * std::conj(phase));
            trips.emplace_back(j, i, -wr * phase);
            trips.emplace_back(nsite + i, nsite + j, wr * std::conj(phase));
            trips.emplace_back(nsite + j, nsite + i, wr * phase);
        }
    }
    if (wilson_r != 0.0) {
        const double wr = wilson_r / (2.0 * h);
        for (int i = 0; i < nsite; ++i) {
            trips.emplace_back(i, i, cdouble(2.0 * wr));
            trips.emplace_back(nsite + i, nsite + i, cdouble(-2.0 * wr));
        }
    }
    return seal_operator(2 * nsite, trips);
}

}  // namespace detail

// canonical momentum −i∂ along axis, central difference
inline HermitianOperator canonical_momentum(const Grid& g, int axis) {
    if (axis < 0 || axis >= g.dim)
        throw DimensionUnsupported("canonical_momentum: axis out of range");
    const double h = g.h[static_cast<size_t>(axis)];
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(g.size()) * 2);
    detail::for_each_site(g, [&](int ix, int iy) {
        const int i = g.index(ix, iy);
        int jx, jy;
        if (!detail::forward_neighbor(g, ix, iy, axis, jx, jy)) return;
        const int j = g.index(jx, jy);
        const cdouble v = cdouble(0.0, -1.0) / (2.0 * h);
        trips.emplace_back(i, j, v);
        trips.emplace_back(j, i, std::conj(v));
    });
    return detail::seal_operator(g.size(), trips);
}

// kinetic momentum P = p − q·diag(a_axis)
inline HermitianOperator kinetic_momentum(const Grid& g, int axis, const VectorField& a,
                                          double q) {
    require_same_grid(g, a.grid, "kinetic_momentum");
    HermitianOperator op = canonical_momentum(g, axis);
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        trips.emplace_back(i, i, cdouble(-q * std::real(a[axis][i])));
    Eigen::SparseMatrix<cdouble> diag(g.size(), g.size());
    diag.setFromTriplets(trips.begin(), trips.end());
    op.entries += diag;
    return op;
}

struct CommutatorReport {
    double residual;            // against the stencil-matched field-strength term
    double residual_pointwise;  // against pointwise (curl2d a)·psi, O(h²) by construction
};

// checks the lattice Lie algebra [Pˣ,Pʸ]ψ = iq·B·ψ. The exact lattice identity
// applies B = D(a) through neighbor averages (M_x, M_y below); the pointwise
// product differs from it at O(h²) even for linear A, so both numbers are
// reported and the matched one is the contract.
inline CommutatorReport commutator_field_check(const Grid& g, const VectorField& a, double q,
                                               const ScalarField& psi) {
    if (g.dim != 2) throw DimensionUnsupported("commutator_field_check: 2D grids only");
    require_same_grid(g, a.grid, "commutator_field_check");
    require_same_grid(g, psi.grid, "commutator_field_check");

    HermitianOperator px = kinetic_momentum(g, 0, a, q);
    HermitianOperator py = kinetic_momentum(g, 1, a, q);
    Eigen::Map<const Eigen::VectorXcd> v(psi.values.data(), g.size());
    Eigen::VectorXcd comm = px.entries * (py.entries * v) - py.entries * (px.entries * v);

    ScalarField day_dx = derivative(a[1], 0);  // central-difference field strength
    ScalarField dax_dy = derivative(a[0], 1);
    ScalarField mx = 0.5 * (shifted(psi, 0, +1) + shifted(psi, 0, -1));
    ScalarField my = 0.5 * (shifted(psi, 1, +1) + shifted(psi, 1, -1));

    ScalarField b = curl2d(a);
    double num_matched = 0.0, num_pointwise = 0.0;
    const cdouble iq(0.0, q);
    for (int i = 0; i < g.size(); ++i) {
        const cdouble matched = iq * (day_dx[i] * mx[i] - dax_dy[i] * my[i]);
        const cdouble pointwise = iq * b[i] * psi[i];
        num_matched += std::norm(comm[i] - matched);
        num_pointwise += std::norm(comm[i] - pointwise);
    }
    const double den = norm(psi) / std::sqrt(g.cell());
    return {std::sqrt(num_matched) / den, std::sqrt(num_pointwise) / den};
}

inline HermitianOperator schrodinger_hamiltonian(const Grid& g, const Potentials& p, double t,
                                                 double q, double m,
                                                 Coupling coupling = Coupling::Compact) {
    ScalarField a0 = p.a0_field(t);
    return detail::build_schrodinger(g, p, t, q, m, coupling, &a0);
}

inline HermitianOperator dirac_hamiltonian_1p1(const Grid& g, const Potentials& p, double t,
                                               double q, double m, double wilson_r = 0.0,
                                               Coupling coupling = Coupling::Compact) {
    ScalarField a0 = p.a0_field(t);
    return detail::build_dirac(g, p, t, q, m, coupling, wilson_r, &a0);
}

// Yang energy operator 𝒴 = H − q·diag(A⁰); assembled with the scalar term
// omitted, which is the same matrix without the extra rounding
inline HermitianOperator yang_operator(const Grid& g, const Potentials& p, double t, double q,
                                       double m, OperatorKind kind,
                                       Coupling coupling = Coupling::Compact,
                                       double wilson_r = 0.0) {
    if (kind == OperatorKind::Schrodinger)
        return detail::build_schrodinger(g, p, t, q, m, coupling, nullptr);
    return detail::build_dirac(g, p, t, q, m, coupling, wilson_r, nullptr);
}

// Chen energy operator H(A⁰_phys, A): scalar term replaced by the
// gauge-invariant potential from the decomposition, vector term kept in full
inline HermitianOperator chen_energy_operator(const Grid& g, const Potentials& p, double t,
                                              double q, double m, OperatorKind kind,
                                              Coupling coupling = Coupling::Compact,
                                              double wilson_r = 0.0) {
    ChenPotentials cp = chen_potentials(p, t);
    if (kind == OperatorKind::Schrodinger)
        return detail::build_schrodinger(g, p, t, q, m, coupling, &cp.a0_phys);
    return detail::build_dirac(g, p, t, q, m, coupling, wilson_r, &cp.a0_phys);
}

// entrywise sup distance between two operators of equal dimension
inline double operator_distance(const HermitianOperator& a, const HermitianOperator& b) {
    if (a.n != b.n) throw GridMismatch("operator_distance: dimension mismatch");
    Eigen::SparseMatrix<cdouble> diff = a.entries - b.entries;
    double d = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(diff, k); it; ++it)
            d = std::max(d, std::abs(it.value()));
    return d;
}

// diag(e^{iq·chi}) on scalar (n = N) or spinor (n = 2N) layout
inline Eigen::SparseMatrix<cdouble> phase_matrix(const Grid& g, const GaugeFunction& gf, double t,
                                                 double q, bool spinor = false) {
    ScalarField chi = gf.chi_at(g, t);
    const int nsite = g.size();
    const int n = spinor ? 2 * nsite : nsite;
    std::vector<Eigen::Triplet<cdouble>> trips;
    trips.reserve(static_cast<size_t>(n));
    for (int i = 0; i < nsite; ++i) {
        const cdouble u = std::polar(1.0, q * std::real(chi[i]));
        trips.emplace_back(i, i, u);
        if (spinor) trips.emplace_back(nsite + i, nsite + i, u);
    }
    Eigen::SparseMatrix<cdouble> m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace gaugelab
