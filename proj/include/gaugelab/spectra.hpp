#pragma once

// Eigenvalue computation and spectrum comparison. Every invariance claim in
// the library reduces to "these two sorted spectra agree to a tolerance", so
// both solvers certify residuals and the iterative path additionally checks
// its eigenvalue counts against LDLT inertia before reporting a prefix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "errors.hpp"
#include "operators.hpp"

namespace gaugelab {

enum class SpectrumMethod { Dense, IterativeLowK };

struct Spectrum {
    std::vector<double> eigenvalues;               // ascending
    std::optional<Eigen::MatrixXcd> eigenvectors;  // columns, same order
    std::vector<double> residuals;                 // per pair, ‖Hv − λv‖ / ‖v‖
    SpectrumMethod method = SpectrumMethod::Dense;
};

inline constexpr int kDenseCap = 4096;
inline constexpr double kResidualTol = 1e-9;  // certified against max(1, ‖H‖∞)

namespace detail {

inline double operator_scale(const HermitianOperator& op) {
    std::vector<double> row(static_cast<size_t>(op.n), 0.0);
    for (int k = 0; k < op.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(op.entries, k); it; ++it)
            row[static_cast<size_t>(it.row())] += std::abs(it.value());
    double m = 0.0;
    for (double r : row) m = std::max(m, r);
    return m;
}

inline std::vector<double> residuals_for(const HermitianOperator& op,
                                         const std::vector<double>& vals,
                                         const Eigen::MatrixXcd& vecs) {
    std::vector<double> res(vals.size(), 0.0);
    for (size_t j = 0; j < vals.size(); ++j) {
        Eigen::VectorXcd v = vecs.col(static_cast<Eigen::Index>(j));
        const double nv = v.norm();
        if (nv > 0.0)
            res[j] = (op.entries * v - vals[j] * v).norm() / nv;
    }
    return res;
}

// Gershgorin bounds of a Hermitian sparse matrix (row centers are the real
// diagonal, radii the off-diagonal absolute row sums)
inline std::pair<double, double> gershgorin_bounds(const Eigen::SparseMatrix<cdouble>& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<double> center(static_cast<size_t>(n), 0.0);
    std::vector<double> radius(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(m, k); it; ++it) {
            if (it.row() == it.col())
                center[static_cast<size_t>(it.row())] += std::real(it.value());
            else
                radius[static_cast<size_t>(it.row())] += std::abs(it.value());
        }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        lo = std::min(lo, center[static_cast<size_t>(i)] - radius[static_cast<size_t>(i)]);
        hi = std::max(hi, center[static_cast<size_t>(i)] + radius[static_cast<size_t>(i)]);
    }
    return {lo, hi};
}

// Number of eigenvalues of H strictly below tau, via the inertia of the real
// symmetric embedding [[Re, -Im], [Im, Re]] of H − tau·I (which doubles every
// eigenvalue). Returns nullopt when a pivot is too ambiguous to trust —
// callers nudge tau and retry, and treat a persistent nullopt as inconclusive.
inline std::optional<int> count_below(const Eigen::SparseMatrix<cdouble>& h, double tau,
                                      double scale) {
    const int n = static_cast<int>(h.rows());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(4 * h.nonZeros() + 2 * n));
    for (int k = 0; k < h.outerSize(); ++k)
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(h, k); it; ++it) {
            const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
            const double re = std::real(it.value()) - (i == j ? tau : 0.0);
            const double im = std::imag(it.value());
            trips.emplace_back(i, j, re);
            trips.emplace_back(i + n, j + n, re);
            if (im != 0.0) {
                trips.emplace_back(i, j + n, -im);
                trips.emplace_back(i + n, j, im);
            }
        }
    // make sure every diagonal slot exists so the shift is applied everywhere
    for (int i = 0; i < n; ++i) {
        bool has_diag = false;
        for (Eigen::SparseMatrix<cdouble>::InnerIterator it(h, i); it; ++it)
            if (it.row() == i) { has_diag = true; break; }
        if (!has_diag) {
            trips.emplace_back(i, i, -tau);
            trips.emplace_back(i + n, i + n, -tau);
        }
    }
    Eigen::SparseMatrix<double> s(2 * n, 2 * n);
    s.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(s);
    if (ldlt.info() != Eigen::Success) return std::nullopt;
    const auto d = ldlt.vectorD();
    int neg = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (std::abs(d(i)) < 1e-12 * std::max(scale, 1.0)) return std::nullopt;
        if (d(i) < 0.0) ++neg;
    }
    if (neg % 2 != 0) return std::nullopt;
    return neg / 2;
}

// Validate that `vals` (ascending, with eigenvalue error bounded by `err`)
// really is the bottom of the spectrum: inertia below the lowest value must
// be zero and inertia at each gap between well-separated clusters must match
// the number of values reported below it. Degenerate copies that Lanczos
// silently dropped show up as a count mismatch. Inconclusive pivots pass.
inline bool prefix_certified(const Eigen::SparseMatrix<cdouble>& h,
                             const std::vector<double>& vals, double err, double scale) {
    if (vals.empty()) return true;
    const double gap_min = std::max(1e-9 * scale, 64.0 * err);
    auto counted = [&](double tau) -> std::optional<int> {
        for (int attempt = 0; attempt < 3; ++attempt) {
            auto c = count_below(h, tau, scale);
            if (c) return c;
            tau += gap_min * 0.13 * (attempt + 1);  // deterministic nudge off a bad pivot
        }
        return std::nullopt;
    };
    const double bottom = vals.front() - std::max(gap_min, 1e-8 * scale);
    if (auto c = counted(bottom); c && *c != 0) return false;
    for (size_t i = 0; i + 1 < vals.size(); ++i) {
        if (vals[i + 1] - vals[i] <= gap_min) continue;  // same cluster, nothing to slice
        const double mid = 0.5 * (vals[i] + vals[i + 1]);
        if (auto c = counted(mid); c && *c != static_cast<int>(i) + 1) return false;
    }
    return true;
}

}  // namespace detail

// Full Hermitian eigendecomposition; the oracle for everything else.
inline Spectrum dense_spectrum(const HermitianOperator& op, int dense_cap = kDenseCap) {
    if (op.n > dense_cap)
        throw SizeExceeded("dense_spectrum: n = " + std::to_string(op.n) + " exceeds cap " +
                           std::to_string(dense_cap));
    Eigen::MatrixXcd dense(op.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success)
        throw NoConvergence("dense_spectrum: eigensolver did not converge", 0);
    Spectrum s;
    s.method = SpectrumMethod::Dense;
    s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + op.n);
    s.eigenvectors = es.eigenvectors();
    s.residuals = detail::residuals_for(op, s.eigenvalues, *s.eigenvectors);
    return s;
}

struct LowestKOptions {
    double residual_tol = kResidualTol;  // reporting certification, × max(1, ‖H‖∞)
    double lock_tol = 1e-11;             // Ritz locking threshold, × max(1, ‖H‖∞)
    int restart_cap_per_eig = 50;        // loud NoConvergence past restart_cap_per_eig·k cycles
    std::uint64_t seed = 0x5eed0117u;    // start vectors; fixed so runs are reproducible
};

// k smallest eigenpairs by shift-inverted Lanczos with full
// reorthogonalization and deflation locking. The shift sits slightly below
// the Gershgorin lower bound, so the inverted operator is positive definite
// and its dominant directions are exactly the low end of the spectrum.
// Values inside a near-degenerate cluster are resolved only to the cluster
// spread; use dense_spectrum when sub-cluster structure matters.
inline Spectrum lowest_k(const HermitianOperator& op, int k, LowestKOptions opts = {}) {
    const int n = op.n;
    if (k < 1 || k > n)
        throw ConfigError("lowest_k: need 1 <= k <= n, got k = " + std::to_string(k) +
                          ", n = " + std::to_string(n));
    const double scale = std::max(1.0, detail::operator_scale(op));
    if (op.hermiticity_defect > 1e-8 * scale)
        throw ConfigError("lowest_k: operator fails the hermiticity check");

    const auto [glo, ghi] = detail::gershgorin_bounds(op.entries);
    const double span = std::max(ghi - glo, 1.0);
    const double sigma = glo - 1e-3 * span;

    Eigen::SparseMatrix<cdouble> id(n, n);
    id.setIdentity();
    Eigen::SparseMatrix<cdouble> shifted = op.entries - sigma * id;
    shifted.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cdouble>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success)
        throw NoConvergence("lowest_k: shift-invert factorization failed", 0);

    std::mt19937_64 rng(opts.seed);
    auto random_unit = [&]() {
        std::normal_distribution<double> dist(0.0, 1.0);
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) v(i) = cdouble(dist(rng), dist(rng));
        v.normalize();
        return v;
    };
    auto orth_against = [](Eigen::VectorXcd& w, const std::vector<Eigen::VectorXcd>& basis) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b.dot(w) * b;
    };

    std::vector<Eigen::VectorXcd> locked;
    std::vector<double> locked_vals;
    const int cap = opts.restart_cap_per_eig * k;
    Eigen::VectorXcd start = random_unit();

    auto finalize = [&]() -> std::optional<Spectrum> {
        if (static_cast<int>(locked.size()) < k) return std::nullopt;
        // Rayleigh-Ritz over everything locked, then keep the k lowest
        const int L = static_cast<int>(locked.size());
        Eigen::MatrixXcd b(n, L);
        for (int j = 0; j < L; ++j) b.col(j) = locked[static_cast<size_t>(j)];
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
        Eigen::MatrixXcd qthin = qr.householderQ() * Eigen::MatrixXcd::Identity(n, L);
        Eigen::MatrixXcd hq = op.entries * qthin;
        Eigen::MatrixXcd small = qthin.adjoint() * hq;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (small + small.adjoint()));
        if (es.info() != Eigen::Success) return std::nullopt;
        Spectrum s;
        s.method = SpectrumMethod::IterativeLowK;
        s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
        s.eigenvectors = qthin * es.eigenvectors().leftCols(k);
        s.residuals = detail::residuals_for(op, s.eigenvalues, *s.eigenvectors);
        double worst = 0.0;
        for (double r : s.residuals) worst = std::max(worst, r);
        if (worst > opts.residual_tol * scale) return std::nullopt;
        if (!detail::prefix_certified(op.entries, s.eigenvalues, worst + opts.lock_tol * scale,
                                      scale))
            return std::nullopt;
        return s;
    };

    for (int cycle = 0; cycle < cap; ++cycle) {
        const int have = static_cast<int>(locked.size());
        const int want = std::max(k - have, 1);
        const int m_max = std::min(n - have, std::max(2 * want + 16, 24));
        if (m_max < 1) break;

        Eigen::VectorXcd q0 = start;
        orth_against(q0, locked);
        while (q0.norm() < 1e-8) {
            q0 = random_unit();
            orth_against(q0, locked);
        }
        q0.normalize();

        std::vector<Eigen::VectorXcd> qbasis{q0};
        std::vector<double> alpha, beta;
        double tscale = 1.0;
        for (int j = 0; j < m_max; ++j) {
            Eigen::VectorXcd w = lu.solve(qbasis[static_cast<size_t>(j)]);
            if (lu.info() != Eigen::Success)
                throw NoConvergence("lowest_k: shift-invert solve failed",
                                    static_cast<int>(locked.size()));
            const double a = std::real(qbasis[static_cast<size_t>(j)].dot(w));
            w -= a * qbasis[static_cast<size_t>(j)];
            if (j > 0) w -= beta[static_cast<size_t>(j - 1)] * qbasis[static_cast<size_t>(j - 1)];
            orth_against(w, locked);
            orth_against(w, qbasis);
            alpha.push_back(a);
            tscale = std::max(tscale, std::abs(a));
            if (j + 1 == m_max) break;
            const double bnorm = w.norm();
            if (bnorm < 1e-13 * tscale) break;  // invariant subspace exhausted
            beta.push_back(bnorm);
            qbasis.push_back(w / bnorm);
        }

        const int m = static_cast<int>(alpha.size());
        if (m == 0) {
            start = random_unit();
            continue;
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            tri(i, i) = alpha[static_cast<size_t>(i)];
            if (i + 1 < m) {
                tri(i, i + 1) = beta[static_cast<size_t>(i)];
                tri(i + 1, i) = beta[static_cast<size_t>(i)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(tri);

        Eigen::VectorXcd next_start;
        bool have_next = false;
        for (int idx = m - 1; idx >= 0; --idx) {  // largest theta = smallest lambda first
            Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
            for (int i = 0; i < m; ++i)
                x += tes.eigenvectors()(i, idx) * qbasis[static_cast<size_t>(i)];
            orth_against(x, locked);
            const double nx = x.norm();
            if (nx < 1e-8) continue;  // collapsed into the locked span
            x /= nx;
            const double lam = std::real(x.dot(op.entries * x));
            const double res = (op.entries * x - lam * x).norm();
            if (res <= opts.lock_tol * scale) {
                locked.push_back(x);
                locked_vals.push_back(lam);
            } else if (!have_next) {
                next_start = x;  // best unconverged Ritz vector seeds the next cycle
                have_next = true;
            }
        }
        start = have_next ? next_start : random_unit();

        if (static_cast<int>(locked.size()) >= k) {
            if (auto s = finalize()) return *s;
            // count mismatch or a residual regression: keep hunting from a
            // direction orthogonal to everything already locked
            if (!have_next) start = random_unit();
        }
    }
    throw NoConvergence("lowest_k: restart cap " + std::to_string(cap) + " reached with " +
                            std::to_string(locked.size()) + " of " + std::to_string(k) +
                            " eigenpairs converged",
                        static_cast<int>(locked.size()));
}

struct SpectrumComparison {
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool within = false;
    int compared = 0;
};

// Sorted-value comparison over the first k values of each spectrum.
inline SpectrumComparison spectrum_compare(const Spectrum& s1, const Spectrum& s2, int k,
                                           double tol = 1e-9) {
    if (k < 1) throw ConfigError("spectrum_compare: k must be positive");
    if (static_cast<int>(s1.eigenvalues.size()) < k || static_cast<int>(s2.eigenvalues.size()) < k)
        throw InsufficientData("spectrum_compare: need " + std::to_string(k) + " values, have " +
                               std::to_string(s1.eigenvalues.size()) + " and " +
                               std::to_string(s2.eigenvalues.size()));
    double dev = 0.0;
    for (int i = 0; i < k; ++i)
        dev = std::max(dev, std::abs(s1.eigenvalues[static_cast<size_t>(i)] -
                                     s2.eigenvalues[static_cast<size_t>(i)]));
    return {dev, tol, dev <= tol, k};
}

// Cluster sizes of an ascending value list; an adjacent gap ≤ tol continues
// the current cluster. Used for degeneracy bookkeeping.
inline std::vector<int> degeneracy_clusters(const std::vector<double>& vals, double tol = 1e-10) {
    std::vector<int> sizes;
    for (size_t i = 0; i < vals.size(); ++i) {
        if (i == 0 || vals[i] - vals[i - 1] > tol)
            sizes.push_back(1);
        else
            ++sizes.back();
    }
    return sizes;
}

}  // namespace gaugelab
