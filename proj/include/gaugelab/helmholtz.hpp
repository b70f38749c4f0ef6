#pragma once

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "gaugelab/gauge.hpp"
#include "gaugelab/grid.hpp"

namespace gaugelab {

// Spectral (Fourier) derivatives and solvers. Exact for band-limited fields,
// unlike the finite-difference stencils in grid.hpp; periodic grids only.
namespace spectral {

namespace detail {

// FFTW's planner mutates global state; serialize plan create/destroy so the
// per-call workspaces stay contention-free.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

inline void run_fft(const Grid& g, std::vector<cdouble>& data, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = nullptr;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = (g.dim == 1) ? fftw_plan_dft_1d(g.n[0], ptr, ptr, sign, FFTW_ESTIMATE)
                            : fftw_plan_dft_2d(g.n[0], g.n[1], ptr, ptr, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (sign == FFTW_BACKWARD) {
        const double scale = 1.0 / static_cast<double>(g.size());
        for (auto& v : data) v *= scale;
    }
}

}  // namespace detail

inline void require_periodic(const Grid& g, const char* where) {
    if (g.boundary != Boundary::Periodic)
        throw BoundaryUnsupported(std::string(where) + ": spectral operations need a periodic grid");
}

// forward transform, unnormalized (FFTW convention)
inline std::vector<cdouble> forward(const ScalarField& f) {
    require_periodic(f.grid, "spectral::forward");
    std::vector<cdouble> hat = f.values;
    detail::run_fft(f.grid, hat, FFTW_FORWARD);
    return hat;
}

// inverse transform, normalized by 1/N
inline ScalarField inverse(const Grid& g, std::vector<cdouble> hat, bool real_tag = false) {
    detail::run_fft(g, hat, FFTW_BACKWARD);
    ScalarField out(g);
    out.values = std::move(hat);
    out.real_tagged = real_tag;
    return out;
}

// wavenumbers along one axis in FFT storage order: 2π·j/L for j < n/2,
// negative frequencies above; the Nyquist slot (even n) carries +n/2,
// harmless in the even symbols used here and zeroed in odd ones
inline std::vector<double> wavenumbers(const Grid& g, int axis) {
    const int n = g.n[static_cast<size_t>(axis)];
    const double dk = 2.0 * std::numbers::pi / g.extent(axis);
    std::vector<double> k(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        k[static_cast<size_t>(j)] = dk * ((j <= n / 2) ? j : j - n);
    return k;
}

// iterate the k-lattice applying f(flat_index, kx, ky)
template <class F>
void for_each_mode(const Grid& g, F&& f) {
    if (g.dim == 1) {
        auto kx = wavenumbers(g, 0);
        for (int i = 0; i < g.n[0]; ++i) f(i, kx[static_cast<size_t>(i)], 0.0);
    } else {
        auto kx = wavenumbers(g, 0);
        auto ky = wavenumbers(g, 1);
        for (int ix = 0; ix < g.n[0]; ++ix)
            for (int iy = 0; iy < g.n[1]; ++iy)
                f(g.index(ix, iy), kx[static_cast<size_t>(ix)], ky[static_cast<size_t>(iy)]);
    }
}

// spectral ∂/∂x_axis; the Nyquist factor is zeroed to keep real fields real
inline ScalarField derivative(const ScalarField& f, int axis) {
    require_periodic(f.grid, "spectral::derivative");
    if (axis < 0 || axis >= f.grid.dim)
        throw DimensionUnsupported("spectral::derivative: axis out of range");
    const Grid& g = f.grid;
    const int n = g.n[static_cast<size_t>(axis)];
    const int nyquist = (n % 2 == 0) ? n / 2 : -1;
    auto k = wavenumbers(g, axis);
    std::vector<cdouble> symbol(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        symbol[static_cast<size_t>(j)] = (j == nyquist) ? cdouble(0.0)
                                                        : cdouble(0.0, k[static_cast<size_t>(j)]);
    auto hat = forward(f);
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) hat[static_cast<size_t>(i)] *= symbol[static_cast<size_t>(i)];
    } else {
        for (int ix = 0; ix < g.n[0]; ++ix)
            for (int iy = 0; iy < g.n[1]; ++iy)
                hat[static_cast<size_t>(g.index(ix, iy))] *=
                    symbol[static_cast<size_t>(axis == 0 ? ix : iy)];
    }
    return inverse(g, std::move(hat), f.real_tagged);
}

inline ScalarField divergence(const VectorField& a) {
    require_periodic(a.grid, "spectral::divergence");
    ScalarField out = spectral::derivative(a[0], 0);
    if (a.grid.dim == 2) out = out + spectral::derivative(a[1], 1);
    return out;
}

inline ScalarField curl2d(const VectorField& a) {
    if (a.grid.dim != 2) throw DimensionUnsupported("spectral::curl2d: 2D grids only");
    return spectral::derivative(a[1], 0) - spectral::derivative(a[0], 1);
}

inline VectorField gradient(const ScalarField& f) {
    VectorField out(f.grid);
    for (int c = 0; c < f.grid.dim; ++c) out[c] = spectral::derivative(f, c);
    return out;
}

inline ScalarField laplacian(const ScalarField& f) {
    auto hat = forward(f);
    for_each_mode(f.grid, [&](int idx, double kx, double ky) {
        hat[static_cast<size_t>(idx)] *= -(kx * kx + ky * ky);
    });
    return inverse(f.grid, std::move(hat), f.real_tagged);
}

// zero-mean solution u of ∇²u = f; the k = 0 mode of (∇²)⁻¹ is set to 0
inline ScalarField inverse_laplacian(const ScalarField& f) {
    auto hat = forward(f);
    for_each_mode(f.grid, [&](int idx, double kx, double ky) {
        const double k2 = kx * kx + ky * ky;
        hat[static_cast<size_t>(idx)] = (k2 == 0.0) ? cdouble(0.0) : hat[static_cast<size_t>(idx)] / (-k2);
    });
    return inverse(f.grid, std::move(hat), f.real_tagged);
}

}  // namespace spectral

// longitudinal/transverse split of a vector potential
struct VectorDecomposition {
    VectorField a_pure;   // curl-free part, zero spatial mean
    VectorField a_phys;   // divergence-free part, carries the k = 0 mode
    double residual_div;  // ‖∇·a_phys‖∞, spectral derivative
    double residual_curl; // ‖∇×a_pure‖∞, spectral derivative (2D; 0 in 1D)
};

// full decomposition of a potential pair at fixed time
struct Decomposition {
    VectorField a_pure;
    VectorField a_phys;
    ScalarField a0_pure;
    ScalarField a0_phys;
    double residual_div;
    double residual_curl;
};

inline VectorDecomposition decompose_vector(const VectorField& a) {
    const Grid& g = a.grid;
    spectral::require_periodic(g, "decompose_vector");

    VectorDecomposition out{VectorField(g), VectorField(g), 0.0, 0.0};
    if (g.dim == 1) {
        // the projector degenerates in 1D: every nonzero mode is longitudinal
        cdouble mean = 0.0;
        for (const auto& v : a[0].values) mean += v;
        mean /= static_cast<double>(g.size());
        out.a_phys[0] = ScalarField(g, mean, a[0].real_tagged);
        out.a_pure[0] = a[0] - out.a_phys[0];
        out.residual_div = 0.0;   // a_phys is constant
        out.residual_curl = 0.0;  // no curl in one dimension
        return out;
    }

    auto hx = spectral::forward(a[0]);
    auto hy = spectral::forward(a[1]);
    std::vector<cdouble> px(hx.size()), py(hy.size());
    spectral::for_each_mode(g, [&](int idx, double kx, double ky) {
        const auto i = static_cast<size_t>(idx);
        const double k2 = kx * kx + ky * ky;
        if (k2 == 0.0) {
            px[i] = 0.0;  // mean mode goes to a_phys
            py[i] = 0.0;
            return;
        }
        const cdouble longi = (kx * hx[i] + ky * hy[i]) / k2;
        px[i] = kx * longi;
        py[i] = ky * longi;
    });
    out.a_pure[0] = spectral::inverse(g, std::move(px), a[0].real_tagged);
    out.a_pure[1] = spectral::inverse(g, std::move(py), a[1].real_tagged);
    // subtract in real space so a_pure + a_phys reconstructs the input exactly
    out.a_phys[0] = a[0] - out.a_pure[0];
    out.a_phys[1] = a[1] - out.a_pure[1];
    out.residual_div = sup_norm(spectral::divergence(out.a_phys));
    out.residual_curl = sup_norm(spectral::curl2d(out.a_pure));
    return out;
}

// unique zero-mean solution of the periodic Poisson problem ∇²A⁰_phys = −ρ
inline ScalarField phys_scalar_from_rho(const ScalarField& rho) {
    spectral::require_periodic(rho.grid, "phys_scalar_from_rho");
    cdouble mean = 0.0;
    for (const auto& v : rho.values) mean += v;
    mean /= static_cast<double>(rho.grid.size());
    if (std::abs(mean) > 1e-10 * (1.0 + sup_norm(rho)))
        throw IncompatibleSource("phys_scalar_from_rho: source has nonzero spatial mean " +
                                 std::to_string(std::abs(mean)) +
                                 "; the periodic Poisson problem needs a zero-mean source");
    auto hat = spectral::forward(rho);
    spectral::for_each_mode(rho.grid, [&](int idx, double kx, double ky) {
        const auto i = static_cast<size_t>(idx);
        const double k2 = kx * kx + ky * ky;
        hat[i] = (k2 == 0.0) ? cdouble(0.0) : hat[i] / k2;
    });
    return spectral::inverse(rho.grid, std::move(hat), rho.real_tagged);
}

// A⁰ + ∂_t[(∇²)⁻¹(∇·A)], the gauge-invariant scalar potential; the time
// derivative of A is analytic when the potentials provide one, otherwise a
// symmetric difference with step dt (O(dt²))
inline ScalarField phys_scalar_from_potentials(const Potentials& p, double t, double dt = 1e-4) {
    spectral::require_periodic(p.grid, "phys_scalar_from_potentials");
    ScalarField a0 = p.a0_field(t);
    if (p.static_flag && !p.da_dt_sampler_override) return a0;

    VectorField da(p.grid);
    if (p.da_dt_sampler_override || p.has_da_dt() || p.static_flag) {
        da = p.da_dt_field(t);
    } else {
        VectorField hi = p.a_field(t + dt), lo = p.a_field(t - dt);
        for (int c = 0; c < p.grid.dim; ++c) da[c] = (1.0 / (2.0 * dt)) * (hi[c] - lo[c]);
    }
    ScalarField u = spectral::inverse_laplacian(spectral::divergence(da));
    return a0 + u;
}

// the (A⁰_phys, A) pair feeding the Chen energy operator
struct ChenPotentials {
    ScalarField a0_phys;
    VectorField a;
};

inline ChenPotentials chen_potentials(const Potentials& p, double t) {
    spectral::require_periodic(p.grid, "chen_potentials");
    ScalarField a0p = p.rho.has_value() ? phys_scalar_from_rho(*p.rho)
                                        : phys_scalar_from_potentials(p, t);
    return {std::move(a0p), p.a_field(t)};
}

// convenience assembly of the full decomposition at fixed time
inline Decomposition decompose_potentials(const Potentials& p, double t, double dt = 1e-4) {
    spectral::require_periodic(p.grid, "decompose_potentials");
    VectorDecomposition vd = decompose_vector(p.a_field(t));
    ScalarField a0 = p.a0_field(t);
    ScalarField a0_phys = p.rho.has_value() ? phys_scalar_from_rho(*p.rho)
                                            : phys_scalar_from_potentials(p, t, dt);
    ScalarField a0_pure = a0 - a0_phys;  // exact reconstruction by construction
    return {std::move(vd.a_pure), std::move(vd.a_phys), std::move(a0_pure),
            std::move(a0_phys),   vd.residual_div,      vd.residual_curl};
}

}  // namespace gaugelab
