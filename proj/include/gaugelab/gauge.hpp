#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grid.hpp"

namespace gaugelab {

// real-valued closure over continuous coordinates; y is ignored on 1D grids
using ScalarClosure = std::function<double(double x, double y, double t)>;

inline ScalarClosure zero_closure() {
    return [](double, double, double) { return 0.0; };
}

namespace detail {

inline ScalarField sample_closure(const Grid& g, const ScalarClosure& f, double t) {
    ScalarField out = sample_scalar(g, [&](double x, double y) { return f(x, y, t); });
    out.real_tagged = true;
    return out;
}

} // namespace detail

// gauge function chi(r, t); when analytic is set, grad_chi and dchi_dt are
// closed forms, otherwise stencil/time-difference fallbacks are used
struct GaugeFunction {
    ScalarClosure chi;
    std::array<ScalarClosure, 2> grad_chi{};
    ScalarClosure dchi_dt;
    std::array<ScalarClosure, 2> grad_dchi_dt{};  // d/dt of grad_chi, optional
    bool analytic = false;
    double fd_dt = 1e-4;  // time step for the non-analytic fallback

    [[nodiscard]] ScalarField chi_at(const Grid& g, double t) const {
        return detail::sample_closure(g, chi, t);
    }

    [[nodiscard]] VectorField grad_at(const Grid& g, double t) const {
        if (analytic) {
            VectorField out(g);
            for (int c = 0; c < g.dim; ++c) out[c] = detail::sample_closure(g, grad_chi[c], t);
            return out;
        }
        return gradient(chi_at(g, t));
    }

    [[nodiscard]] ScalarField dchi_dt_at(const Grid& g, double t) const {
        if (analytic) return detail::sample_closure(g, dchi_dt, t);
        ScalarField hi = chi_at(g, t + fd_dt), lo = chi_at(g, t - fd_dt);
        return (1.0 / (2.0 * fd_dt)) * (hi - lo);
    }

    [[nodiscard]] bool has_grad_dchi_dt() const { return static_cast<bool>(grad_dchi_dt[0]); }

    // sup-norm gap between the analytic gradient and the stencil gradient of
    // sampled chi; O(h^2) for band-limited chi
    [[nodiscard]] double consistency_defect(const Grid& g, double t) const {
        return sup_norm(grad_at(g, t) - gradient(chi_at(g, t)));
    }
};

inline GaugeFunction make_gauge_from_chi(ScalarClosure chi, double fd_dt = 1e-4) {
    GaugeFunction gf;
    gf.chi = std::move(chi);
    gf.analytic = false;
    gf.fd_dt = fd_dt;
    return gf;
}

// single-valuedness on the torus. The closure is only ever evaluated inside
// the fundamental domain plus the one link that crosses the seam, so the
// requirement is continuity across each seam: chi(x0 + L) = chi(x0) at every
// transverse position.
inline void require_periodic_gauge(const GaugeFunction& gf, const Grid& g,
                                   const std::vector<double>& t_samples) {
    if (g.boundary != Boundary::Periodic) return;
    const double tol = 1e-9;
    std::vector<double> ts = t_samples.empty() ? std::vector<double>{0.0} : t_samples;
    for (double t : ts) {
        for (int axis = 0; axis < g.dim; ++axis) {
            const int other = 1 - axis;
            const int transverse = g.dim == 2 ? g.n[other] : 1;
            for (int probe = 0; probe < 5; ++probe) {
                const int j = probe * transverse / 5;
                double pt[2] = {0.0, 0.0};
                pt[axis] = g.x0[axis];
                if (g.dim == 2) pt[other] = other == 0 ? g.x(j) : g.y(j);
                const double base = gf.chi(pt[0], pt[1], t);
                pt[axis] += g.extent(axis);
                const double wrapped = gf.chi(pt[0], pt[1], t);
                if (std::abs(wrapped - base) > tol * (1.0 + std::abs(base)))
                    throw NonPeriodicGauge("gauge function is not single-valued on the periodic grid");
            }
        }
    }
}

// electromagnetic potentials as time-parameterized samplers; point closures
// back the samplers when available (they also feed the link integrals of the
// compact coupling), while composed stencil-consistent transforms install
// sampler overrides instead
struct Potentials {
    Grid grid;
    ScalarClosure a0;
    std::array<ScalarClosure, 2> a{};
    std::array<ScalarClosure, 2> grad_a0{};  // optional analytic spatial gradient of a0
    std::array<ScalarClosure, 2> da_dt{};    // optional analytic time derivative of a
    std::optional<ScalarField> rho;
    bool static_flag = false;
    double fd_dt = 1e-4;

    std::function<ScalarField(double)> a0_sampler_override;
    std::function<VectorField(double)> a_sampler_override;
    std::function<VectorField(double)> da_dt_sampler_override;
    std::function<VectorField(double)> grad_a0_sampler_override;

    [[nodiscard]] bool has_closures() const { return static_cast<bool>(a[0]) && !a_sampler_override; }
    [[nodiscard]] bool has_grad_a0() const { return static_cast<bool>(grad_a0[0]); }
    [[nodiscard]] bool has_da_dt() const { return static_cast<bool>(da_dt[0]); }

    [[nodiscard]] ScalarField a0_field(double t) const {
        if (a0_sampler_override) return a0_sampler_override(t);
        return detail::sample_closure(grid, a0, t);
    }

    [[nodiscard]] VectorField a_field(double t) const {
        if (a_sampler_override) return a_sampler_override(t);
        VectorField out(grid);
        for (int c = 0; c < grid.dim; ++c) out[c] = detail::sample_closure(grid, a[c], t);
        return out;
    }

    [[nodiscard]] VectorField da_dt_field(double t) const {
        if (da_dt_sampler_override) return da_dt_sampler_override(t);
        if (static_flag) return VectorField(grid);
        if (has_da_dt()) {
            VectorField out(grid);
            for (int c = 0; c < grid.dim; ++c) out[c] = detail::sample_closure(grid, da_dt[c], t);
            return out;
        }
        VectorField hi = a_field(t + fd_dt), lo = a_field(t - fd_dt);
        VectorField out(grid);
        for (int c = 0; c < grid.dim; ++c) out[c] = (1.0 / (2.0 * fd_dt)) * (hi[c] - lo[c]);
        return out;
    }

    [[nodiscard]] VectorField grad_a0_field(double t) const {
        if (grad_a0_sampler_override) return grad_a0_sampler_override(t);
        if (has_grad_a0() && !a0_sampler_override) {
            VectorField out(grid);
            for (int c = 0; c < grid.dim; ++c) out[c] = detail::sample_closure(grid, grad_a0[c], t);
            return out;
        }
        return gradient(a0_field(t));
    }
};

inline Potentials make_vacuum(const Grid& g) {
    Potentials p;
    p.grid = g;
    p.a0 = zero_closure();
    for (int c = 0; c < 2; ++c) {
        p.a[c] = zero_closure();
        p.grad_a0[c] = zero_closure();
    }
    p.static_flag = true;
    return p;
}

struct FieldStrength {
    VectorField e;
    std::optional<ScalarField> b;  // 2D only
};

// E = -grad a0 - da/dt (analytic spatial gradient when the potentials carry
// one), B = curl a in 2D
inline FieldStrength fields_from_potentials(const Potentials& p, double t) {
    FieldStrength out;
    VectorField ga0 = p.grad_a0_field(t);
    VectorField dadt = p.da_dt_field(t);
    out.e = VectorField(p.grid);
    for (int c = 0; c < p.grid.dim; ++c) out.e[c] = (-1.0) * (ga0[c] + dadt[c]);
    if (p.grid.dim == 2) out.b = curl2d(p.a_field(t));
    return out;
}

// how the chi terms enter the composed samplers: Analytic keeps closed forms
// (link integrals stay available); StencilConsistent pushes grad/d_dt of chi
// through the same lattice stencils the field-strength evaluation uses
enum class Composition { Analytic, StencilConsistent };

inline Potentials transform_potentials(const Potentials& p, const GaugeFunction& gf,
                                       Composition mode = Composition::Analytic) {
    require_periodic_gauge(gf, p.grid, {0.0, 0.433, 1.0});
    Potentials out;
    out.grid = p.grid;
    out.rho = p.rho;
    out.fd_dt = p.fd_dt;

    if (mode == Composition::Analytic) {
        if (!gf.analytic || !p.has_closures()) {
            // no closed-form derivatives: compose at the sampler level with the
            // gauge function's own fallbacks
            Potentials base = p;
            GaugeFunction g2 = gf;
            out.a0 = nullptr;
            out.a0_sampler_override = [base, g2](double t) {
                return base.a0_field(t) - g2.dchi_dt_at(base.grid, t);
            };
            out.a_sampler_override = [base, g2](double t) {
                VectorField av = base.a_field(t);
                VectorField gv = g2.grad_at(base.grid, t);
                return av + gv;
            };
        } else {
            ScalarClosure a0 = p.a0;
            ScalarClosure ddt = gf.dchi_dt;
            out.a0 = [a0, ddt](double x, double y, double t) { return a0(x, y, t) - ddt(x, y, t); };
            for (int c = 0; c < p.grid.dim; ++c) {
                ScalarClosure ac = p.a[c], gc = gf.grad_chi[c];
                out.a[c] = [ac, gc](double x, double y, double t) { return ac(x, y, t) + gc(x, y, t); };
                if (p.has_grad_a0() && gf.has_grad_dchi_dt()) {
                    ScalarClosure pa = p.grad_a0[c], gd = gf.grad_dchi_dt[c];
                    out.grad_a0[c] = [pa, gd](double x, double y, double t) {
                        return pa(x, y, t) - gd(x, y, t);
                    };
                }
                if (gf.has_grad_dchi_dt()) {
                    // d a'/dt = da/dt + d(grad chi)/dt; for static p the first term is 0
                    ScalarClosure gd = gf.grad_dchi_dt[c];
                    if (p.has_da_dt()) {
                        ScalarClosure pd = p.da_dt[c];
                        out.da_dt[c] = [pd, gd](double x, double y, double t) {
                            return pd(x, y, t) + gd(x, y, t);
                        };
                    } else if (p.static_flag) {
                        out.da_dt[c] = gd;
                    }
                }
            }
        }
    } else {
        Potentials base = p;
        GaugeFunction g2 = gf;
        out.a0_sampler_override = [base, g2](double t) {
            return base.a0_field(t) - g2.dchi_dt_at(base.grid, t);
        };
        out.a_sampler_override = [base, g2](double t) {
            return base.a_field(t) + gradient(g2.chi_at(base.grid, t));
        };
        out.da_dt_sampler_override = [base, g2](double t) {
            VectorField dv = base.da_dt_field(t);
            VectorField gd = gradient(g2.dchi_dt_at(base.grid, t));
            return dv + gd;
        };
        // keep the base potential's spatial-derivative path identical on both
        // sides; only the chi terms go through the stencil
        out.grad_a0_sampler_override = [base, g2](double t) {
            VectorField ga = base.grad_a0_field(t);
            VectorField gd = gradient(g2.dchi_dt_at(base.grid, t));
            return ga - gd;
        };
    }

    // staticity probe: a transform by a time-dependent chi can still land on
    // static potentials (chi = f(r) + c t), so compare samples
    const double t1 = 0.317, t2 = 1.618;
    ScalarField s1 = out.a0_field(t1), s2 = out.a0_field(t2);
    double dev = sup_norm(s1 - s2);
    VectorField v1 = out.a_field(t1), v2 = out.a_field(t2);
    dev = std::max(dev, sup_norm(v1 - v2));
    double scale = 1.0 + sup_norm(s1) + sup_norm(v1);
    out.static_flag = dev <= 1e-12 * scale;
    return out;
}

template <class FieldT>
FieldT transform_state(const FieldT& psi, const GaugeFunction& gf, double t, double q) {
    require_periodic_gauge(gf, psi.grid, {t});
    ScalarField chi = gf.chi_at(psi.grid, t);
    if constexpr (std::is_same_v<FieldT, SpinorField>) {
        SpinorField out = psi;
        for (int i = 0; i < psi.grid.size(); ++i) {
            const cdouble phase = std::polar(1.0, q * chi[i].real());
            out.upper[i] *= phase;
            out.lower[i] *= phase;
        }
        return out;
    } else {
        ScalarField out = psi;
        out.real_tagged = false;
        for (int i = 0; i < psi.grid.size(); ++i) out[i] *= std::polar(1.0, q * chi[i].real());
        return out;
    }
}

struct GaugeInvarianceReport {
    double max_e_deviation = 0.0;
    double max_b_deviation = 0.0;
    bool used_fd_time_derivative = false;
};

// field strengths of p and of the gauge-transformed p must agree; the
// transform is composed stencil-consistently so the cancellation is exact up
// to roundoff
inline GaugeInvarianceReport gauge_invariance_check(const Potentials& p, const GaugeFunction& gf,
                                                    const std::vector<double>& t_samples) {
    Potentials tp = transform_potentials(p, gf, Composition::StencilConsistent);
    GaugeInvarianceReport rep;
    rep.used_fd_time_derivative = !gf.analytic || (!p.static_flag && !p.has_da_dt());
    for (double t : t_samples) {
        FieldStrength f1 = fields_from_potentials(p, t);
        FieldStrength f2 = fields_from_potentials(tp, t);
        rep.max_e_deviation = std::max(rep.max_e_deviation, sup_norm(f2.e - f1.e));
        if (f1.b && f2.b)
            rep.max_b_deviation = std::max(rep.max_b_deviation, sup_norm(*f2.b - *f1.b));
    }
    return rep;
}

namespace detail {

inline cdouble momentum_expectation(const ScalarField& psi, int axis) {
    ScalarField d = derivative(psi, axis);
    return cdouble(0, -1) * inner_product(psi, d);
}

} // namespace detail

struct ExpectationShiftReport {
    std::vector<double> shift_measured;  // Re(<p>' - <p>) per axis
    std::vector<double> shift_expected;  // q Re(<grad chi>) per axis
    double max_deviation = 0.0;
};

// <p>' - <p> against q <grad chi>, both sides through the same stencil
inline ExpectationShiftReport expectation_shift_check(const ScalarField& psi,
                                                      const GaugeFunction& gf, double t, double q) {
    if (std::abs(norm(psi) - 1.0) > 1e-8) throw NotNormalized("expectation_shift_check: |psi| != 1");
    ScalarField tpsi = transform_state(psi, gf, t, q);
    ScalarField chi = gf.chi_at(psi.grid, t);
    VectorField gchi = gradient(chi);
    ExpectationShiftReport rep;
    for (int axis = 0; axis < psi.grid.dim; ++axis) {
        const double lhs =
            (detail::momentum_expectation(tpsi, axis) - detail::momentum_expectation(psi, axis)).real();
        cdouble gexp = 0.0;
        for (int i = 0; i < psi.grid.size(); ++i)
            gexp += std::conj(psi[i]) * gchi[axis][i] * psi[i];
        const double rhs = q * (gexp * psi.grid.cell()).real();
        rep.shift_measured.push_back(lhs);
        rep.shift_expected.push_back(rhs);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(lhs - rhs));
    }
    return rep;
}

// ---- gauge-function algebra used by the inverse/composition tests ----

inline GaugeFunction negated(const GaugeFunction& gf) {
    GaugeFunction out = gf;
    auto flip = [](const ScalarClosure& f) -> ScalarClosure {
        if (!f) return nullptr;
        return [f](double x, double y, double t) { return -f(x, y, t); };
    };
    out.chi = flip(gf.chi);
    out.dchi_dt = flip(gf.dchi_dt);
    for (int c = 0; c < 2; ++c) {
        out.grad_chi[c] = flip(gf.grad_chi[c]);
        out.grad_dchi_dt[c] = flip(gf.grad_dchi_dt[c]);
    }
    return out;
}

inline GaugeFunction composed(const GaugeFunction& g1, const GaugeFunction& g2) {
    GaugeFunction out;
    auto add = [](const ScalarClosure& f, const ScalarClosure& g) -> ScalarClosure {
        if (!f || !g) return nullptr;
        return [f, g](double x, double y, double t) { return f(x, y, t) + g(x, y, t); };
    };
    out.chi = add(g1.chi, g2.chi);
    out.dchi_dt = add(g1.dchi_dt, g2.dchi_dt);
    for (int c = 0; c < 2; ++c) {
        out.grad_chi[c] = add(g1.grad_chi[c], g2.grad_chi[c]);
        out.grad_dchi_dt[c] = add(g1.grad_dchi_dt[c], g2.grad_dchi_dt[c]);
    }
    out.analytic = g1.analytic && g2.analytic;
    out.fd_dt = std::min(g1.fd_dt, g2.fd_dt);
    return out;
}

// ---- named registries (documented in the README) ----

using ParamMap = std::map<std::string, double>;

inline double param_or(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

namespace detail {

struct FourierMode {
    double kx, ky, amp, phase, omega, tphase;
};

inline std::vector<FourierMode> seeded_modes(const Grid& g, uint64_t seed, int nmodes, int kmax,
                                             double amp, double omega_scale) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> ki(-kmax, kmax);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<FourierMode> modes;
    const double lx = g.extent(0), ly = g.dim == 2 ? g.extent(1) : 1.0;
    while (static_cast<int>(modes.size()) < nmodes) {
        int nx = ki(rng);
        int ny = g.dim == 2 ? ki(rng) : 0;
        if (nx == 0 && ny == 0) continue;
        FourierMode m;
        m.kx = 2 * std::numbers::pi * nx / lx;
        m.ky = g.dim == 2 ? 2 * std::numbers::pi * ny / ly : 0.0;
        m.amp = amp * (0.5 + u(rng)) / nmodes;
        m.phase = 2 * std::numbers::pi * u(rng);
        m.omega = omega_scale * (0.5 + u(rng));
        m.tphase = 2 * std::numbers::pi * u(rng);
        modes.push_back(m);
    }
    return modes;
}

} // namespace detail

// chi(r,t) = sum_m amp_m cos(k_m . r + phi_m) cos(omega_m t + theta_m), all
// derivatives closed-form; omega_scale = 0 freezes the time dependence
inline GaugeFunction make_fourier_gauge(const Grid& g, uint64_t seed, double amp, int nmodes = 4,
                                        int kmax = 3, double omega_scale = 1.0) {
    auto modes = std::make_shared<const std::vector<detail::FourierMode>>(
        detail::seeded_modes(g, seed, nmodes, kmax, amp, omega_scale));
    GaugeFunction gf;
    gf.analytic = true;
    gf.chi = [modes](double x, double y, double t) {
        double acc = 0.0;
        for (const auto& m : *modes)
            acc += m.amp * std::cos(m.kx * x + m.ky * y + m.phase) * std::cos(m.omega * t + m.tphase);
        return acc;
    };
    for (int c = 0; c < 2; ++c) {
        gf.grad_chi[c] = [modes, c](double x, double y, double t) {
            double acc = 0.0;
            for (const auto& m : *modes) {
                const double k = c == 0 ? m.kx : m.ky;
                acc -= m.amp * k * std::sin(m.kx * x + m.ky * y + m.phase) * std::cos(m.omega * t + m.tphase);
            }
            return acc;
        };
        gf.grad_dchi_dt[c] = [modes, c](double x, double y, double t) {
            double acc = 0.0;
            for (const auto& m : *modes) {
                const double k = c == 0 ? m.kx : m.ky;
                acc += m.amp * k * m.omega * std::sin(m.kx * x + m.ky * y + m.phase) *
                       std::sin(m.omega * t + m.tphase);
            }
            return acc;
        };
    }
    gf.dchi_dt = [modes](double x, double y, double t) {
        double acc = 0.0;
        for (const auto& m : *modes)
            acc -= m.amp * m.omega * std::cos(m.kx * x + m.ky * y + m.phase) * std::sin(m.omega * t + m.tphase);
        return acc;
    };
    return gf;
}

inline GaugeFunction make_named_gauge(const Grid& g, const std::string& name, const ParamMap& params) {
    GaugeFunction gf;
    gf.analytic = true;
    if (name == "zero") {
        gf.chi = zero_closure();
        gf.dchi_dt = zero_closure();
        for (int c = 0; c < 2; ++c) {
            gf.grad_chi[c] = zero_closure();
            gf.grad_dchi_dt[c] = zero_closure();
        }
    } else if (name == "constant") {
        const double c0 = param_or(params, "c", 1.0);
        gf.chi = [c0](double, double, double) { return c0; };
        gf.dchi_dt = zero_closure();
        for (int c = 0; c < 2; ++c) {
            gf.grad_chi[c] = zero_closure();
            gf.grad_dchi_dt[c] = zero_closure();
        }
    } else if (name == "constant_rate") {
        const double c0 = param_or(params, "c", 1.0);
        gf.chi = [c0](double, double, double t) { return c0 * t; };
        gf.dchi_dt = [c0](double, double, double) { return c0; };
        for (int c = 0; c < 2; ++c) {
            gf.grad_chi[c] = zero_closure();
            gf.grad_dchi_dt[c] = zero_closure();
        }
    } else if (name == "linear") {
        const double k = param_or(params, "k", 1.0);
        gf.chi = [k](double x, double, double) { return k * x; };
        gf.dchi_dt = zero_closure();
        gf.grad_chi[0] = [k](double, double, double) { return k; };
        gf.grad_chi[1] = zero_closure();
        for (int c = 0; c < 2; ++c) gf.grad_dchi_dt[c] = zero_closure();
    } else if (name == "bilinear_xy") {
        const double b = param_or(params, "b", 1.0);
        gf.chi = [b](double x, double y, double) { return b * x * y / 2; };
        gf.dchi_dt = zero_closure();
        gf.grad_chi[0] = [b](double, double y, double) { return b * y / 2; };
        gf.grad_chi[1] = [b](double x, double, double) { return b * x / 2; };
        for (int c = 0; c < 2; ++c) gf.grad_dchi_dt[c] = zero_closure();
    } else if (name == "fourier_smooth" || name == "static_fourier") {
        const double omega = name == "static_fourier" ? 0.0 : param_or(params, "omega_scale", 1.0);
        return make_fourier_gauge(g, static_cast<uint64_t>(param_or(params, "seed", 1.0)),
                                  param_or(params, "amp", 0.1),
                                  static_cast<int>(param_or(params, "nmodes", 4.0)),
                                  static_cast<int>(param_or(params, "kmax", 3.0)), omega);
    } else {
        throw ConfigError("unknown gauge function: " + name);
    }
    return gf;
}

// temporal gauge of a static potential: chi = a0(r) t, which cancels a0
inline GaugeFunction make_temporal_gauge(const Potentials& p) {
    if (!p.static_flag || !p.a0) throw ConfigError("temporal gauge needs static closure potentials");
    GaugeFunction gf;
    gf.analytic = true;
    ScalarClosure a0 = p.a0;
    gf.chi = [a0](double x, double y, double t) { return a0(x, y, 0.0) * t; };
    gf.dchi_dt = [a0](double x, double y, double) { return a0(x, y, 0.0); };
    if (p.has_grad_a0()) {
        for (int c = 0; c < 2; ++c) {
            ScalarClosure gc = p.grad_a0[c];
            if (!gc) continue;
            gf.grad_chi[c] = [gc](double x, double y, double t) { return gc(x, y, 0.0) * t; };
            gf.grad_dchi_dt[c] = [gc](double x, double y, double) { return gc(x, y, 0.0); };
        }
    } else {
        throw ConfigError("temporal gauge needs an analytic grad_a0");
    }
    return gf;
}

inline Potentials make_named_potentials(const Grid& g, const std::string& name, const ParamMap& params) {
    Potentials p;
    p.grid = g;
    p.static_flag = true;
    for (int c = 0; c < 2; ++c) {
        p.a[c] = zero_closure();
        p.grad_a0[c] = zero_closure();
    }
    p.a0 = zero_closure();

    if (name == "vacuum") {
        // all zero
    } else if (name == "soft_coulomb") {
        const double kappa = param_or(params, "kappa", 1.0);
        const double soft = param_or(params, "soft", 0.5);
        const bool planar = g.dim == 2;
        p.a0 = [kappa, soft, planar](double x, double y, double) {
            const double r2 = x * x + (planar ? y * y : 0.0);
            return -kappa / std::sqrt(r2 + soft * soft);
        };
        for (int c = 0; c < 2; ++c) {
            p.grad_a0[c] = [kappa, soft, planar, c](double x, double y, double) {
                const double r2 = x * x + (planar ? y * y : 0.0);
                const double xi = c == 0 ? x : (planar ? y : 0.0);
                return kappa * xi / std::pow(r2 + soft * soft, 1.5);
            };
        }
    } else if (name == "harmonic_well") {
        const double k = param_or(params, "k", 1.0);
        const bool planar = g.dim == 2;
        p.a0 = [k, planar](double x, double y, double) {
            return 0.5 * k * (x * x + (planar ? y * y : 0.0));
        };
        p.grad_a0[0] = [k](double x, double, double) { return k * x; };
        if (planar) p.grad_a0[1] = [k](double, double y, double) { return k * y; };
    } else if (name == "uniform_b_symmetric") {
        const double b = param_or(params, "b", 1.0);
        p.a[0] = [b](double, double y, double) { return -b * y / 2; };
        p.a[1] = [b](double x, double, double) { return b * x / 2; };
    } else if (name == "uniform_b_landau") {
        const double b = param_or(params, "b", 1.0);
        p.a[1] = [b](double x, double, double) { return b * x; };
    } else if (name == "transverse_fourier") {
        // divergence-free by construction: a = (d_y g, -d_x g) for a seeded
        // band-limited stream function g
        auto modes = std::make_shared<const std::vector<detail::FourierMode>>(detail::seeded_modes(
            g, static_cast<uint64_t>(param_or(params, "seed", 2.0)),
            static_cast<int>(param_or(params, "nmodes", 4.0)),
            static_cast<int>(param_or(params, "kmax", 3.0)), param_or(params, "amp", 0.2), 0.0));
        p.a[0] = [modes](double x, double y, double) {
            double acc = 0.0;
            for (const auto& m : *modes) acc -= m.amp * m.ky * std::sin(m.kx * x + m.ky * y + m.phase);
            return acc;
        };
        p.a[1] = [modes](double x, double y, double) {
            double acc = 0.0;
            for (const auto& m : *modes) acc += m.amp * m.kx * std::sin(m.kx * x + m.ky * y + m.phase);
            return acc;
        };
    } else {
        throw ConfigError("unknown potentials: " + name);
    }
    return p;
}

} // namespace gaugelab
