#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "errors.hpp"

namespace gaugelab {

using cdouble = std::complex<double>;

enum class Boundary { Periodic, Dirichlet };

// Rectangular lattice, 1D or 2D. Row-major flattening with x slowest:
// idx = ix*ny + iy. Periodic grids cover [x0, x0+L) with h = L/n; Dirichlet
// grids store interior points of a hard-wall box, h = L/(n+1).
struct Grid {
    int dim = 1;
    std::array<int, 2> n{8, 1};
    std::array<double, 2> h{1.0, 1.0};
    std::array<double, 2> x0{0.0, 0.0};
    Boundary boundary = Boundary::Periodic;

    static Grid periodic_1d(int nx, double length, double xmin) {
        return Grid{1, {nx, 1}, {length / nx, 1.0}, {xmin, 0.0}, Boundary::Periodic};
    }
    static Grid periodic_1d(int nx, double length) {
        return periodic_1d(nx, length, -length / 2);
    }
    static Grid periodic_2d(int nx, int ny, double lx, double ly) {
        return Grid{2, {nx, ny}, {lx / nx, ly / ny}, {-lx / 2, -ly / 2}, Boundary::Periodic};
    }
    static Grid dirichlet_1d(int nx, double length) {
        const double h = length / (nx + 1);
        return Grid{1, {nx, 1}, {h, 1.0}, {-length / 2 + h, 0.0}, Boundary::Dirichlet};
    }
    static Grid dirichlet_2d(int nx, int ny, double lx, double ly) {
        const double hx = lx / (nx + 1), hy = ly / (ny + 1);
        return Grid{2, {nx, ny}, {hx, hy}, {-lx / 2 + hx, -ly / 2 + hy}, Boundary::Dirichlet};
    }

    [[nodiscard]] int size() const { return dim == 2 ? n[0] * n[1] : n[0]; }
    [[nodiscard]] int index(int ix, int iy = 0) const { return dim == 2 ? ix * n[1] + iy : ix; }
    [[nodiscard]] double x(int ix) const { return x0[0] + ix * h[0]; }
    [[nodiscard]] double y(int iy) const { return x0[1] + iy * h[1]; }
    [[nodiscard]] double cell() const { return dim == 2 ? h[0] * h[1] : h[0]; }
    [[nodiscard]] double extent(int axis) const {
        return boundary == Boundary::Periodic ? n[axis] * h[axis] : (n[axis] + 1) * h[axis];
    }

    friend bool operator==(const Grid& a, const Grid& b) = default;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

struct ScalarField {
    Grid grid;
    std::vector<cdouble> values;
    bool real_tagged = false;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, cdouble fill = 0.0, bool real_tag = false)
        : grid(g), values(static_cast<size_t>(g.size()), fill), real_tagged(real_tag) {}

    cdouble& operator[](int i) { return values[static_cast<size_t>(i)]; }
    const cdouble& operator[](int i) const { return values[static_cast<size_t>(i)]; }
    cdouble& at(int ix, int iy) { return values[static_cast<size_t>(grid.index(ix, iy))]; }
    const cdouble& at(int ix, int iy) const { return values[static_cast<size_t>(grid.index(ix, iy))]; }
};

struct VectorField {
    Grid grid;
    std::vector<ScalarField> components;

    VectorField() = default;
    explicit VectorField(const Grid& g) : grid(g), components(static_cast<size_t>(g.dim), ScalarField(g)) {}

    ScalarField& operator[](int c) { return components[static_cast<size_t>(c)]; }
    const ScalarField& operator[](int c) const { return components[static_cast<size_t>(c)]; }
};

// two-component spinor on a 1D grid, flat layout [upper | lower]
struct SpinorField {
    Grid grid;
    ScalarField upper, lower;

    SpinorField() = default;
    explicit SpinorField(const Grid& g) : grid(g), upper(g), lower(g) {
        if (g.dim != 1) throw DimensionUnsupported("SpinorField: 1D grids only");
    }
};

// closure sampling; F is f(x) in 1D, f(x,y) in 2D (two-argument closures also
// accepted on 1D grids, called with y = 0)
template <class F>
ScalarField sample_scalar(const Grid& g, F&& f) {
    ScalarField out(g);
    if constexpr (std::is_invocable_v<F, double, double>) {
        if (g.dim == 1) {
            for (int i = 0; i < g.n[0]; ++i) out[i] = f(g.x(i), 0.0);
        } else {
            for (int ix = 0; ix < g.n[0]; ++ix)
                for (int iy = 0; iy < g.n[1]; ++iy) out.at(ix, iy) = f(g.x(ix), g.y(iy));
        }
    } else {
        if (g.dim != 1) throw DimensionUnsupported("sample_scalar: 1-argument closure on a 2D grid");
        for (int i = 0; i < g.n[0]; ++i) out[i] = f(g.x(i));
    }
    return out;
}

namespace detail {

// value at site shifted by `step` along `axis`, honoring the boundary rule
inline cdouble shifted_value(const ScalarField& f, int ix, int iy, int axis, int step) {
    const Grid& g = f.grid;
    int idx[2] = {ix, iy};
    idx[axis] += step;
    if (g.boundary == Boundary::Periodic) {
        idx[axis] = (idx[axis] % g.n[axis] + g.n[axis]) % g.n[axis];
    } else if (idx[axis] < 0 || idx[axis] >= g.n[axis]) {
        return 0.0;
    }
    return f.at(idx[0], idx[1]);
}

} // namespace detail

// whole-field shift (periodic wrap or Dirichlet zero fill); used by stencils and tests
inline ScalarField shifted(const ScalarField& f, int axis, int step) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const int ny = g.dim == 2 ? g.n[1] : 1;
    for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            out.at(ix, iy) = detail::shifted_value(f, ix, iy, axis, step);
    return out;
}

inline cdouble inner_product(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid, g.grid, "inner_product");
    cdouble acc = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) acc += std::conj(f.values[i]) * g.values[i];
    return acc * f.grid.cell();
}

inline cdouble inner_product(const SpinorField& f, const SpinorField& g) {
    require_same_grid(f.grid, g.grid, "inner_product");
    return inner_product(f.upper, g.upper) + inner_product(f.lower, g.lower);
}

inline double norm(const ScalarField& f) { return std::sqrt(std::real(inner_product(f, f))); }
inline double norm(const SpinorField& f) { return std::sqrt(std::real(inner_product(f, f))); }

inline double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

inline ScalarField derivative(const ScalarField& f, int axis) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const int ny = g.dim == 2 ? g.n[1] : 1;
    const double inv2h = 1.0 / (2.0 * g.h[axis]);
    for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            out.at(ix, iy) = (detail::shifted_value(f, ix, iy, axis, +1) -
                              detail::shifted_value(f, ix, iy, axis, -1)) *
                             inv2h;
    return out;
}

inline VectorField gradient(const ScalarField& f) {
    VectorField out(f.grid);
    for (int c = 0; c < f.grid.dim; ++c) out[c] = derivative(f, c);
    return out;
}

inline ScalarField divergence(const VectorField& v) {
    ScalarField out(v.grid);
    for (int c = 0; c < v.grid.dim; ++c) {
        ScalarField d = derivative(v[c], c);
        for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += d.values[i];
    }
    return out;
}

inline ScalarField curl2d(const VectorField& v) {
    if (v.grid.dim != 2) throw DimensionUnsupported("curl2d: 2D grids only");
    ScalarField dvy_dx = derivative(v[1], 0);
    ScalarField dvx_dy = derivative(v[0], 1);
    ScalarField out(v.grid);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = dvy_dx.values[i] - dvx_dy.values[i];
    return out;
}

inline ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid;
    ScalarField out(g);
    const int ny = g.dim == 2 ? g.n[1] : 1;
    for (int ix = 0; ix < g.n[0]; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            cdouble acc = 0.0;
            for (int axis = 0; axis < g.dim; ++axis) {
                const double invh2 = 1.0 / (g.h[axis] * g.h[axis]);
                acc += (detail::shifted_value(f, ix, iy, axis, +1) - 2.0 * f.at(ix, iy) +
                        detail::shifted_value(f, ix, iy, axis, -1)) *
                       invh2;
            }
            out.at(ix, iy) = acc;
        }
    return out;
}

// elementwise helpers used across modules
inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid, "field sum");
    ScalarField out = a;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid, b.grid, "field difference");
    ScalarField out = a;
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

inline ScalarField operator*(cdouble s, const ScalarField& a) {
    ScalarField out = a;
    for (auto& v : out.values) v *= s;
    return out;
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid, "field sum");
    VectorField out = a;
    for (int c = 0; c < a.grid.dim; ++c) out[c] = out[c] + b[c];
    return out;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid, b.grid, "field difference");
    VectorField out = a;
    for (int c = 0; c < a.grid.dim; ++c) out[c] = out[c] - b[c];
    return out;
}

inline double sup_norm(const VectorField& v) {
    double m = 0.0;
    for (const auto& c : v.components) m = std::max(m, sup_norm(c));
    return m;
}

inline void normalize(ScalarField& f) {
    const double n = norm(f);
    for (auto& v : f.values) v /= n;
}

inline void normalize(SpinorField& f) {
    const double n = norm(f);
    for (auto& v : f.upper.values) v /= n;
    for (auto& v : f.lower.values) v /= n;
}

} // namespace gaugelab
