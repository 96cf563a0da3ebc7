#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdx/eqmodel.hpp"
#include "rdx/numerics.hpp"
#include "rdx/transforms.hpp"

namespace rdx {

enum class Grading { Uniform, Geometric, Power };
enum class InnerBC { SymmetryNeumann, TruncatedDirichlet, TruncatedNeumann };
enum class OuterBC { Dirichlet, ZeroFlux };
enum class RunStatus { Completed, BlowUp, StepUnderflow };

inline const char* to_string(Grading g) {
    switch (g) {
        case Grading::Uniform: return "Uniform";
        case Grading::Geometric: return "Geometric";
        case Grading::Power: return "Power";
    }
    return "?";
}
inline const char* to_string(InnerBC b) {
    switch (b) {
        case InnerBC::SymmetryNeumann: return "SymmetryNeumann";
        case InnerBC::TruncatedDirichlet: return "TruncatedDirichlet";
        case InnerBC::TruncatedNeumann: return "TruncatedNeumann";
    }
    return "?";
}
inline const char* to_string(OuterBC b) { return b == OuterBC::Dirichlet ? "Dirichlet" : "ZeroFlux"; }
inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "Completed";
        case RunStatus::BlowUp: return "BlowUp";
        case RunStatus::StepUnderflow: return "StepUnderflow";
    }
    return "?";
}

using TimeFn = std::function<double(double)>;

struct NormSpec {
    std::string name;
    double q = 1, w = 0;
};

// grading_param: ratio of consecutive spacings (Geometric) or theta, nodes uniform in r^theta (Power)
struct GridConfig {
    double r_min = 0, r_max = 1;
    std::size_t nr = 128;
    Grading grading = Grading::Uniform;
    double grading_param = 1;
    double t_end = 1, dt_init = 1e-4, dt_safety = 0.45;
    InnerBC inner_bc = InnerBC::SymmetryNeumann;
    TimeFn inner_value;
    OuterBC outer_bc = OuterBC::ZeroFlux;
    TimeFn outer_value;
    double blowup_threshold = 1e8, dt_min = 1e-14;
    std::size_t n_snapshots = 11;
    std::size_t max_steps = 50'000'000;
    double history_growth = 0.01;
    std::size_t history_points = 400;
    std::vector<NormSpec> norms;
};

struct NormRecord {
    double t = 0, sup = 0, argmax = 0;
    std::vector<double> norms;
};

struct GridSolution {
    std::vector<double> r, t;
    std::vector<std::vector<double>> u;
    std::vector<std::string> norm_names;
    std::vector<NormRecord> history;
    RunStatus status = RunStatus::Completed;
    double t_detect = kNaN;
    std::size_t steps = 0;
    std::vector<std::string> warnings;
};

struct BlowUpReport {
    bool detected = false;
    double t_detect = kNaN;
    std::optional<double> growth_exponent_fit;  // -d ln sup / d ln(T-t), T taken as t_detect
    std::optional<double> reference_rate;       // backward self-similar alpha when L>0
    double location = kNaN;
    std::vector<std::pair<double, double>> location_history;
};

struct RunResult {
    GridSolution solution;
    BlowUpReport blowup;
};

inline bool log_family(const EquationDescriptor& d) { return !d.radial(); }

inline void validate(const GridConfig& c, const EquationDescriptor& d) {
    if (c.nr < 16) throw ConfigError("nr must be at least 16");
    if (!(c.r_max > c.r_min)) throw ConfigError("r_max must exceed r_min");
    if (!(c.t_end > 0)) throw ConfigError("t_end must be positive");
    if (!(c.dt_init > 0)) throw ConfigError("dt_init must be positive");
    if (!(c.dt_safety > 0 && c.dt_safety <= 1)) throw ConfigError("dt_safety must lie in (0,1]");
    if (!(c.blowup_threshold > 0)) throw ConfigError("blowup_threshold must be positive");
    if (c.n_snapshots < 2) throw ConfigError("n_snapshots must be at least 2");
    if (c.grading == Grading::Geometric && !(c.grading_param > 0))
        throw ConfigError("geometric ratio must be positive");
    if (c.grading == Grading::Power && !(c.grading_param > 0)) throw ConfigError("power grading needs theta>0");
    if (c.inner_bc == InnerBC::TruncatedDirichlet && !c.inner_value)
        throw ConfigError("TruncatedDirichlet needs a value function");
    if (c.outer_bc == OuterBC::Dirichlet && !c.outer_value) throw ConfigError("Dirichlet needs a value function");
    for (auto& n : c.norms)
        if (!(n.q > 0)) throw ConfigError("norm '" + n.name + "' needs q>0");
    if (log_family(d)) {
        if (c.inner_bc == InnerBC::SymmetryNeumann)
            throw ConfigError("log-variable families have no origin; use a truncated inner condition");
        if (c.grading == Grading::Power) throw ConfigError("power grading needs a radial family");
        return;
    }
    if (c.r_min < 0) throw ConfigError("r_min must be >= 0");
    if ((d.sigma1 < 0 || d.sigma2 < 0) && !(c.r_min > 0))
        throw ConfigError("r_min>0 required when a weight exponent is negative");
    if (c.inner_bc == InnerBC::SymmetryNeumann && c.r_min != 0)
        throw ConfigError("SymmetryNeumann needs r_min=0; use TruncatedNeumann");
    if (c.inner_bc != InnerBC::SymmetryNeumann && c.r_min == 0)
        throw ConfigError("truncated inner conditions need r_min>0");
}

inline std::vector<double> make_grid(const GridConfig& c) {
    const std::size_t n = c.nr;
    std::vector<double> x(n);
    const double a = c.r_min, b = c.r_max;
    for (std::size_t i = 0; i < n; ++i) {
        double s = double(i) / double(n - 1);
        switch (c.grading) {
            case Grading::Uniform: x[i] = a + (b - a) * s; break;
            case Grading::Geometric: {
                double q = c.grading_param;
                x[i] = std::abs(q - 1) < 1e-14 ? a + (b - a) * s
                                               : a + (b - a) * (std::pow(q, double(i)) - 1) / (std::pow(q, double(n - 1)) - 1);
                break;
            }
            case Grading::Power: {
                double th = c.grading_param;
                double pa = std::pow(a, th), pb = std::pow(b, th);
                x[i] = std::pow(pa + (pb - pa) * s, 1 / th);
                break;
            }
        }
    }
    x.front() = a, x.back() = b;
    return x;
}

namespace detail {

// int_a^b r^e dr, a>=0
inline double int_pow(double a, double b, double e) {
    if (std::abs(e + 1) < 1e-14) {
        if (!(a > 0)) throw ConfigError("weight not integrable at the origin");
        return std::log(b / a);
    }
    if (a == 0 && e < -1) throw ConfigError("weight not integrable at the origin");
    return (std::pow(b, e + 1) - std::pow(a, e + 1)) / (e + 1);
}

// int_a^b e^{k y} dy
inline double int_exp(double a, double b, double k) {
    if (std::abs(k) * (b - a) < 1e-8) return (b - a) * std::exp(k * 0.5 * (a + b));
    return (std::exp(k * b) - std::exp(k * a)) / k;
}

// finite-volume geometry; face gradients taken in the grading coordinate phi
struct Geometry {
    std::vector<double> x, mass, react, zeroth, linear, lumped, cond;
};

inline Geometry geometry(const EquationDescriptor& d, const GridConfig& c) {
    Geometry G;
    G.x = make_grid(c);
    const auto& x = G.x;
    const std::size_t n = x.size();
    const bool lg = log_family(d);
    const double th = c.grading == Grading::Power ? c.grading_param : 1.0;
    auto phi = [&](double r) { return th == 1.0 ? r : std::pow(r, th); };
    auto dphi = [&](double r) { return th == 1.0 ? 1.0 : th * std::pow(r, th - 1); };
    auto phi_inv = [&](double s) { return th == 1.0 ? s : std::pow(s, 1 / th); };

    const double D = d.coeff("diffusion", 1.0), K = d.coeff("reaction", 1.0);
    const double b = d.coeff("convection", 0.0), cz = d.coeff("zeroth", 0.0), kr = d.coeff("reaction_exp", 0.0);
    const double lam = d.coeff("lambda", 0.0);

    std::vector<double> f(n + 1);
    f[0] = x[0], f[n] = x[n - 1];
    for (std::size_t i = 0; i + 1 < n; ++i) f[i + 1] = phi_inv(0.5 * (phi(x[i]) + phi(x[i + 1])));

    G.mass.resize(n), G.react.resize(n), G.zeroth.resize(n), G.linear.resize(n), G.lumped.resize(n);
    G.cond.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double lo = f[i], hi = f[i + 1];
        if (lg) {
            double w = int_exp(lo, hi, b);
            G.mass[i] = w;
            G.react[i] = K * int_exp(lo, hi, b + kr);
            G.zeroth[i] = D * cz * w;
            G.linear[i] = lam * w;
            G.lumped[i] = w;
        } else {
            G.mass[i] = int_pow(lo, hi, d.sigma1 + d.N - 1);
            G.react[i] = K * int_pow(lo, hi, d.sigma2 + d.N - 1);
            G.lumped[i] = int_pow(lo, hi, d.N - 1);
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double xf = f[i + 1];
        double rho = lg ? std::exp(b * xf) : (d.N == 1 ? 1.0 : std::pow(xf, d.N - 1));
        G.cond[i] = D * rho * dphi(xf) / (phi(x[i + 1]) - phi(x[i]));
    }
    return G;
}

inline double pw(double u, double e) { return e == 1 ? u : (u > 0 ? std::pow(u, e) : 0.0); }

}  // namespace detail

// (int r^w u^q r^{N-1} dr)^{1/q} on the radial line, no angular factor.
// r=0 with a singular weight is handled by product integration of a quadratic fit of u^q.
inline double weighted_norm(const std::vector<double>& r, const std::vector<double>& u, double q, double w, double N,
                            std::vector<std::string>* warnings = nullptr) {
    if (r.size() != u.size() || r.size() < 3) throw DomainError("weighted norm needs three or more matching samples");
    if (!(q > 0)) throw InvalidParameter("weighted norm needs q>0");
    const double e = w + N - 1;
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) g[i] = std::pow(std::abs(u[i]), q);
    std::size_t start = 0;
    double head = 0;
    if (r[0] == 0 && e < 0) {
        // g ~ g0 + c1 r + c2 r^2 on [0, r2], integrated exactly against r^e
        double r1 = r[1], r2 = r[2];
        double c0 = g[0];
        double det = r1 * r2 * r2 - r2 * r1 * r1;
        double c1 = ((g[1] - c0) * r2 * r2 - (g[2] - c0) * r1 * r1) / det;
        double c2 = ((g[2] - c0) * r1 - (g[1] - c0) * r2) / det;
        auto mom = [&](double k, double c) {
            if (c == 0) return 0.0;
            if (e + k <= -1) return kNaN;
            return c * std::pow(r2, e + k + 1) / (e + k + 1);
        };
        double m0 = mom(0, c0), m1 = mom(1, c1), m2 = mom(2, c2);
        if (std::isnan(m0) || std::isnan(m1) || std::isnan(m2)) {
            if (warnings) warnings->push_back("NonIntegrable: integrand power <= -1 at the origin, first cells dropped");
        } else {
            head = m0 + m1 + m2;
        }
        start = 2;
    }
    std::vector<double> rr(r.begin() + start, r.end()), yy(rr.size());
    for (std::size_t i = 0; i < rr.size(); ++i) {
        double wgt = rr[i] == 0 ? (e == 0 ? 1.0 : 0.0) : std::pow(rr[i], e);
        yy[i] = wgt * g[i + start];
    }
    double s = head + num::simpson(rr, yy);
    return s <= 0 ? 0.0 : std::pow(s, 1 / q);
}

inline RunResult integrate(const EquationDescriptor& d, const std::function<double(double)>& u0, const GridConfig& cfg,
                           const RadialFn& forcing = nullptr) {
    validate(cfg, d);
    const detail::Geometry G = detail::geometry(d, cfg);
    const auto& x = G.x;
    const std::size_t n = x.size();
    const double m = d.m, p = d.p;
    const bool inner_dir = cfg.inner_bc == InnerBC::TruncatedDirichlet;
    const bool outer_dir = cfg.outer_bc == OuterBC::Dirichlet;

    RunResult res;
    GridSolution& S = res.solution;
    S.r = x;
    for (auto& nspec : cfg.norms) S.norm_names.push_back(nspec.name);

    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = u0(x[i]);
        if (!std::isfinite(u[i]) || u[i] < 0)
            throw DomainError("initial data must be finite and >= 0 (r=" + fmt_num(x[i]) + ")");
    }
    auto apply_bc = [&](std::vector<double>& v, double t) {
        if (inner_dir) v.front() = std::max(cfg.inner_value(t), 0.0);
        if (outer_dir) v.back() = std::max(cfg.outer_value(t), 0.0);
    };
    apply_bc(u, 0.0);

    std::vector<double> U(n), flux(n - 1);
    auto rhs = [&](const std::vector<double>& v, double t, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) U[i] = detail::pw(v[i], m);
        for (std::size_t i = 0; i + 1 < n; ++i) flux[i] = G.cond[i] * (U[i + 1] - U[i]);
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i + 1 < n ? flux[i] : 0.0) - (i > 0 ? flux[i - 1] : 0.0);
            s += G.react[i] * detail::pw(v[i], p) + G.zeroth[i] * U[i] - G.linear[i] * v[i];
            if (forcing) s += G.lumped[i] * forcing(x[i], t);
            out[i] = s / G.mass[i];
        }
        if (inner_dir) out.front() = 0;
        if (outer_dir) out.back() = 0;
    };

    auto sup_of = [&](const std::vector<double>& v, double& at) {
        double s = 0;
        at = x[0];
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] > s) s = v[i], at = x[i];
        return s;
    };
    auto stable_dt = [&](const std::vector<double>& v, double sup) {
        double rate = 0, rrate = 0;
        const double floor_u = m < 1 || p < 1 ? 1e-3 * std::max(sup, 1e-300) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double um = v[i];
            if (i > 0) um = std::max(um, v[i - 1]);
            if (i + 1 < n) um = std::max(um, v[i + 1]);
            um = std::max(um, floor_u);
            double dif = m == 1 ? 1.0 : m * detail::pw(um, m - 1);
            double c = (i > 0 ? G.cond[i - 1] : 0.0) + (i + 1 < n ? G.cond[i] : 0.0) + std::abs(G.zeroth[i]);
            rate = std::max(rate, (dif * c + G.linear[i]) / G.mass[i]);
            double ur = std::max(v[i], floor_u);
            rrate = std::max(rrate, std::abs(G.react[i]) * detail::pw(ur, p - 1) / G.mass[i]);
        }
        double dt = rate > 0 ? cfg.dt_safety / rate : kInf;
        if (rrate > 0) dt = std::min(dt, 0.1 / rrate);
        return dt;
    };

    double t = 0, at = 0, sup = sup_of(u, at);
    auto record = [&](double tt) {
        NormRecord rec;
        rec.t = tt, rec.sup = sup, rec.argmax = at;
        const double Nn = log_family(d) ? 1.0 : d.N;
        for (auto& ns : cfg.norms) rec.norms.push_back(weighted_norm(x, u, ns.q, ns.w, Nn, &S.warnings));
        S.history.push_back(std::move(rec));
        res.blowup.location_history.push_back({tt, at});
    };
    auto snapshot = [&](double tt) {
        S.t.push_back(tt);
        S.u.push_back(u);
    };
    record(0.0);
    snapshot(0.0);

    std::vector<double> k1(n), u1(n), k2(n);
    std::size_t next_snap = 1;
    const double snap_dt = cfg.t_end / double(cfg.n_snapshots - 1);
    const double hist_dt = cfg.t_end / double(std::max<std::size_t>(cfg.history_points, 1));
    double last_rec_t = 0, last_rec_sup = sup, dt_prev = cfg.dt_init;
    int tiny = 0;
    bool first = true;

    while (t < cfg.t_end) {
        if (S.steps >= cfg.max_steps) throw NonConvergence("step budget exhausted at t=" + fmt_num(t));
        double t_snap = next_snap * snap_dt;
        double dt = std::min({stable_dt(u, sup), first ? cfg.dt_init : 1.25 * dt_prev, cfg.t_end - t});
        if (t_snap > t && t_snap - t < dt) dt = t_snap - t;
        first = false;

        double sup_before = sup;
        rhs(u, t, k1);
        for (std::size_t i = 0; i < n; ++i) u1[i] = std::max(u[i] + dt * k1[i], 0.0);
        apply_bc(u1, t + dt);
        rhs(u1, t + dt, k2);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.5 * u[i] + 0.5 * (u1[i] + dt * k2[i]);
            if (!std::isfinite(v)) {
                S.t.push_back(t);
                S.u.push_back(u);
                throw NonFiniteState("non-finite value at r=" + fmt_num(x[i]) + ", t=" + fmt_num(t) +
                                     " (last snapshot kept)");
            }
            u[i] = std::max(v, 0.0);
        }
        apply_bc(u, t + dt);
        t = (cfg.t_end - (t + dt) < 1e-14 * cfg.t_end) ? cfg.t_end : t + dt;
        dt_prev = dt;
        ++S.steps;
        sup = sup_of(u, at);

        if (std::abs(t - t_snap) <= 1e-12 * cfg.t_end || t >= cfg.t_end) {
            if (t < cfg.t_end) snapshot(t);
            ++next_snap;
        }
        if (std::abs(sup - last_rec_sup) > cfg.history_growth * std::max(last_rec_sup, 1e-300) ||
            t - last_rec_t >= hist_dt) {
            record(t);
            last_rec_t = t, last_rec_sup = sup;
        }
        if (sup > cfg.blowup_threshold) {
            S.status = RunStatus::BlowUp;
            S.t_detect = t;
            break;
        }
        if (dt < cfg.dt_min) {
            ++tiny;
            if (tiny >= 3) {
                S.status = sup > sup_before ? RunStatus::BlowUp : RunStatus::StepUnderflow;
                S.t_detect = t;
                break;
            }
        } else {
            tiny = 0;
        }
    }
    if (S.history.back().t != t) record(t);
    if (S.t.back() != t) snapshot(t);

    BlowUpReport& B = res.blowup;
    B.detected = S.status == RunStatus::BlowUp;
    B.location = at;
    if (B.detected) {
        B.t_detect = S.t_detect;
        double lo = std::pow(cfg.blowup_threshold, 0.25), hi = std::pow(cfg.blowup_threshold, 0.75);
        std::vector<double> lx, ly;
        for (auto& h : S.history)
            if (h.sup >= lo && h.sup <= hi && h.t < S.t_detect) {
                lx.push_back(std::log(S.t_detect - h.t));
                ly.push_back(std::log(h.sup));
            }
        if (lx.size() >= 3) {
            try {
                B.growth_exponent_fit = -num::fit_line(lx, ly).slope;
            } catch (const InsufficientData&) {
            }
        }
        if (d.radial()) {
            double L = l_sigma(d.m, d.p, d.sigma1, d.sigma2);
            if (L > 0 && !l_is_zero(L, d.sigma1, d.sigma2)) B.reference_rate = (d.sigma2 + 2) / L;
        }
    }
    return res;
}

// least-squares slope of ln sup vs ln t over the history inside [t_lo, t_hi]
inline num::LineFit decay_rate_estimate(const GridSolution& gs, double t_lo, double t_hi) {
    if (gs.status != RunStatus::Completed) throw InsufficientData("decay estimate needs a completed run");
    if (!(t_lo > 0) || !(t_hi > t_lo)) throw InsufficientData("decay window must satisfy 0<t_lo<t_hi");
    std::vector<double> lx, ly;
    for (auto& h : gs.history)
        if (h.t >= t_lo && h.t <= t_hi) {
            if (!(h.sup > 0)) throw InsufficientData("non-positive norm inside the window");
            lx.push_back(std::log(h.t));
            ly.push_back(std::log(h.sup));
        }
    if (lx.size() < 3) throw InsufficientData("fewer than three history points in the window");
    return num::fit_line(lx, ly);
}

// residual oracle

struct ResidualOptions {
    double h_r = 1e-3, h_t = 1e-3;
    int r_dir = 0, t_dir = 0;  // 0 central, +1 forward, -1 backward
    RadialFn forcing;
};

struct ResidualStats {
    double max = 0, rms = 0;
    std::vector<double> per_point;
};

struct PointRT {
    double r, t;
};

inline double residual_at(const EquationDescriptor& d, const RadialFn& u, double r, double t,
                          const ResidualOptions& o) {
    const double h = o.h_r;
    if (d.radial()) {
        double reach = o.r_dir == 0 ? 2 * h : (o.r_dir < 0 ? 5 * h : 0.0);
        if (r - reach <= 0) throw DomainError("stencil at r=" + fmt_num(r) + " reaches r<=0; use one-sided stencils");
    }
    const double m = d.m;
    auto Um = [&](double s) { return detail::pw(u(s, t), m); };
    auto ut = [&](double s) { return u(r, s); };
    double u_t = num::d1(ut, t, o.h_t, o.t_dir);
    double Ur = num::d1(Um, r, h, o.r_dir), Urr = num::d2(Um, r, h, o.r_dir);
    double uv = u(r, t);
    double Dc = d.coeff("diffusion", 1.0), K = d.coeff("reaction", 1.0);
    double R;
    if (d.radial()) {
        double w1 = d.sigma1 == 0 ? 1.0 : std::pow(r, d.sigma1), w2 = d.sigma2 == 0 ? 1.0 : std::pow(r, d.sigma2);
        R = w1 * u_t - Dc * (Urr + (d.N - 1) / r * Ur) - K * w2 * detail::pw(uv, d.p);
    } else {
        double b = d.coeff("convection", 0.0), c = d.coeff("zeroth", 0.0), k = d.coeff("reaction_exp", 0.0);
        double lam = d.coeff("lambda", 0.0);
        R = u_t - Dc * (Urr + b * Ur + c * Um(r)) - K * std::exp(k * r) * detail::pw(uv, d.p) + lam * uv;
    }
    if (o.forcing) R -= o.forcing(r, t);
    return R;
}

inline ResidualStats residual(const EquationDescriptor& d, const RadialFn& u, const std::vector<PointRT>& pts,
                              const ResidualOptions& o = {}) {
    if (pts.empty()) throw InsufficientData("residual needs sample points");
    ResidualStats s;
    double ss = 0;
    for (auto& q : pts) {
        double R = residual_at(d, u, q.r, q.t, o);
        s.per_point.push_back(R);
        s.max = std::max(s.max, std::abs(R));
        ss += R * R;
    }
    s.rms = std::sqrt(ss / double(pts.size()));
    return s;
}

struct ResidualOrder {
    ResidualStats coarse, fine;
    double ratio = kNaN, order = kNaN;
};

// residual at (h_r, h_t) and at half steps; ratio of max residuals and log2 of it
inline ResidualOrder residual_order(const EquationDescriptor& d, const RadialFn& u, const std::vector<PointRT>& pts,
                                    ResidualOptions o) {
    ResidualOrder out;
    out.coarse = residual(d, u, pts, o);
    o.h_r /= 2, o.h_t /= 2;
    out.fine = residual(d, u, pts, o);
    out.ratio = out.coarse.max / out.fine.max;
    out.order = std::log2(out.ratio);
    return out;
}

// residual of tabulated u[k][i] on uniform (r_i, t_k) grids, fourth-order central at interior nodes
inline ResidualStats residual_on_grid(const EquationDescriptor& d, const std::vector<double>& r,
                                      const std::vector<double>& t, const std::vector<std::vector<double>>& u,
                                      std::vector<PointRT>* where = nullptr) {
    const std::size_t nr = r.size(), nt = t.size();
    if (nr < 5 || nt < 5) throw InsufficientData("grid residual needs five or more nodes in r and t");
    auto uniform = [](const std::vector<double>& x) {
        double h = (x.back() - x.front()) / double(x.size() - 1);
        for (std::size_t i = 1; i < x.size(); ++i)
            if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
        return h > 0;
    };
    if (!uniform(r) || !uniform(t)) throw DomainError("grid residual needs uniform, increasing r and t");
    if (u.size() != nt) throw DomainError("grid residual: u rows must match t");
    for (auto& row : u)
        if (row.size() != nr) throw DomainError("grid residual: u columns must match r");
    const double hr = r[1] - r[0], ht = t[1] - t[0];
    ResidualStats s;
    double ss = 0;
    for (std::size_t k = 2; k + 2 < nt; ++k)
        for (std::size_t i = 2; i + 2 < nr; ++i) {
            double x = r[i];
            if (d.radial() && x - 2 * hr <= 0) continue;
            auto U = [&](std::size_t j) { return detail::pw(u[k][j], d.m); };
            double Ur = (-U(i + 2) + 8 * U(i + 1) - 8 * U(i - 1) + U(i - 2)) / (12 * hr);
            double Urr = (-U(i + 2) + 16 * U(i + 1) - 30 * U(i) + 16 * U(i - 1) - U(i - 2)) / (12 * hr * hr);
            double ut = (-u[k + 2][i] + 8 * u[k + 1][i] - 8 * u[k - 1][i] + u[k - 2][i]) / (12 * ht);
            double v = u[k][i];
            double Dc = d.coeff("diffusion", 1.0), K = d.coeff("reaction", 1.0), R;
            if (d.radial()) {
                R = std::pow(x, d.sigma1) * ut - Dc * (Urr + (d.N - 1) / x * Ur) - K * std::pow(x, d.sigma2) * detail::pw(v, d.p);
            } else {
                double b = d.coeff("convection", 0.0), c = d.coeff("zeroth", 0.0), kk = d.coeff("reaction_exp", 0.0);
                R = ut - Dc * (Urr + b * Ur + c * U(i)) - K * std::exp(kk * x) * detail::pw(v, d.p) +
                    d.coeff("lambda", 0.0) * v;
            }
            s.per_point.push_back(R);
            if (where) where->push_back({x, t[k]});
            s.max = std::max(s.max, std::abs(R));
            ss += R * R;
        }
    if (s.per_point.empty()) throw InsufficientData("no interior grid nodes away from the origin");
    s.rms = std::sqrt(ss / double(s.per_point.size()));
    return s;
}

}  // namespace rdx
