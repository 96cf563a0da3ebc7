#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "rdx/eqmodel.hpp"
#include "rdx/profile_types.hpp"

namespace rdx {

namespace odeint = boost::numeric::odeint;

// Delta_xi f^m + xi^s2 f^p - xi^s1 (alpha f - beta xi f') = 0,  Delta_xi = d2 + (N-1)/xi d
struct ProfileODE {
    double m = 1, p = 1, N = 1, s1 = 0, s2 = 0, alpha = 0, beta = 0;

    double fpp(double x, double f, double fp) const {
        if (!(f > 0) && m > 1) throw DegenerateODE("f<=0 with m>1; use the (f^m, (f^m)') form");
        double rhs = std::pow(x, s1) * (alpha * f - beta * x * fp) - std::pow(x, s2) * std::pow(f, p) -
                     (N - 1) / x * m * std::pow(f, m - 1) * fp;
        return (rhs - m * (m - 1) * std::pow(f, m - 2) * fp * fp) / (m * std::pow(f, m - 1));
    }
    double residual(double x, double f, double fp, double fpp_) const {
        double d2 = m * std::pow(f, m - 1) * fpp_ + m * (m - 1) * std::pow(f, m - 2) * fp * fp;
        double d1 = m * std::pow(f, m - 1) * fp;
        return d2 + (N - 1) / x * d1 + std::pow(x, s2) * std::pow(f, p) - std::pow(x, s1) * (alpha * f - beta * x * fp);
    }
    // G = f^m, H = G'
    void gh(const std::array<double, 2>& y, std::array<double, 2>& dy, double x) const {
        double G = y[0], H = y[1];
        double f, fp;
        if (m == 1) {
            f = G;
            fp = H;
        } else {
            double Gp = std::max(G, 1e-300);
            f = std::pow(Gp, 1 / m);
            fp = H / (m * std::pow(Gp, (m - 1) / m));
        }
        double fpow = f >= 0 ? std::pow(f, p) : -std::pow(-f, p);
        dy[0] = H;
        dy[1] = -(N - 1) / x * H - std::pow(x, s2) * fpow + std::pow(x, s1) * (alpha * f - beta * x * fp);
    }
};

inline ProfileODE profile_ode(const EquationDescriptor& d, const SelfSimilarForm& form) {
    if (!d.radial()) throw KindMismatch("profile ODE needs a radial family");
    ProfileODE o;
    o.m = d.m, o.p = d.p, o.N = d.N, o.s1 = d.sigma1, o.s2 = d.sigma2;
    o.alpha = form.alpha, o.beta = form.kind == FormKind::SeparateVariable ? 0.0 : form.beta;
    return o;
}

// f and f' at xi = eps from the two-term local expansion of each class
inline std::pair<double, double> initial_expansion(const EquationDescriptor& d, const SelfSimilarForm& form,
                                                   Behavior cls, double param, double eps) {
    const double m = d.m, p = d.p, N = d.N, s1 = d.sigma1, s2 = d.sigma2, al = form.alpha, be = form.beta;
    if (!(eps > 0)) throw InvalidParameter("expansion point must be positive");
    auto need = [](bool ok, const char* msg) {
        if (!ok) throw KindMismatch(msg);
    };
    // f = F^{1/e}, F = F0 + F1, F1' = dF
    auto from_power = [](double F, double dF, double e) {
        if (!(F > 0)) throw KindMismatch("expansion leaves its positive range at this eps");
        double f = std::pow(F, 1 / e);
        return std::make_pair(f, f / (e * F) * dF);
    };
    switch (cls) {
        case Behavior::Q1:
        case Behavior::Q1var: {
            need(p < m, "Q1 needs p<m");
            need(s2 > -2 && s2 < s1, "Q1 needs -2<sigma2<sigma1");
            double A = (m - p) / (m * (N + s2) * (s2 + 2));
            return from_power(param - A * std::pow(eps, s2 + 2), -A * (s2 + 2) * std::pow(eps, s2 + 1), m - p);
        }
        case Behavior::PosOrigin: {
            need(m > 1, "PosOrigin needs m>1");
            need(s2 >= s1 && s1 > -2, "PosOrigin needs sigma2>=sigma1>-2");
            double C = (m - 1) * (al - (s1 == s2 ? std::pow(param, (p - 1) / (m - 1)) : 0.0)) /
                       (m * (s1 + 2) * (N + s1));
            return from_power(param + C * std::pow(eps, s1 + 2), C * (s1 + 2) * std::pow(eps, s1 + 1), m - 1);
        }
        case Behavior::CPower1: {
            need(m > 1 && s1 > -2, "CPower1 needs m>1, sigma1>-2");
            double k = (s1 + 2) / (m - 1);
            double amp = (al - be * k) / (m * k * (m * k + N - 2));
            need(amp > 0, "CPower1 amplitude equation has no positive root");
            double C = std::pow(amp, 1 / (m - 1));
            double g = s2 - s1 + (p - 1) * k;
            need(g > 0, "CPower1 needs sigma2-sigma1+(p-1)(sigma1+2)/(m-1)>0");
            double A = -std::pow(C, p - 1) /
                       (amp * m * ((m * k + g) * (m * k + g + N - 2) - k * (m * k + N - 2)) + be * g);
            double f = C * std::pow(eps, k) * (1 + A * std::pow(eps, g));
            double fp = C * (k * std::pow(eps, k - 1) + A * (k + g) * std::pow(eps, k + g - 1));
            return {f, fp};
        }
        case Behavior::CPower2: {
            need(p < m, "CPower2 needs p<m");
            need(be != 0, "CPower2 needs beta!=0");
            double q = (s2 + 2) / (m - p);
            double g = (m - 1) * q - 2 - s1;
            need(g > 0, "CPower2 needs (m-1)(sigma2+2)/(m-p)>sigma1+2");
            need(std::abs(al - be * q) <= 1e-9 * std::max(1.0, std::abs(al)), "CPower2 needs alpha/beta=(sigma2+2)/(m-p)");
            double C = param;
            double A = -(std::pow(C, m - 1) * m * q * (m * q + N - 2) + std::pow(C, p - 1)) / (be * g);
            double f = C * std::pow(eps, q) * (1 + A * std::pow(eps, g));
            double fp = C * (q * std::pow(eps, q - 1) + A * (q + g) * std::pow(eps, q + g - 1));
            return {f, fp};
        }
        case Behavior::ExpQ1: {
            need(form.kind == FormKind::Exponential, "ExpQ1 needs the exponential form");
            need(p < m && m > 1, "ExpQ1 needs 1<=p<m");
            double den = N * (m - 1) + s1 * (m - p) - 2 * (p - 1);
            need(den > 0, "ExpQ1 needs N(m-1)+sigma1(m-p)-2(p-1)>0");
            double E = (m - 1) * (m - 1) / (m * (s1 + 2) * den);
            double e = (s1 + 2) * (m - p) / (m - 1);
            return from_power(param - E * std::pow(eps, e), -E * e * std::pow(eps, e - 1), m - p);
        }
        case Behavior::LogSingular: {
            need(s2 == -2 && p < m && N > 2, "LogSingular needs sigma2=-2, p<m, N>2");
            double kap = (m - p) / (m * (N - 2));
            return from_power(-kap * std::log(eps) + param, -kap / eps, m - p);
        }
        case Behavior::StatTail: {
            auto K = k_stat(m, N, s2, p);
            need(K.has_value(), "StatTail needs p>p_c, p>m, N>2");
            double mu = (s2 + 2) / (p - m);
            double f = *K * std::pow(eps, -mu);
            return {f, -mu * f / eps};
        }
        case Behavior::Decay:
            throw KindMismatch("Decay is a tail class, not an origin expansion");
    }
    throw KindMismatch("unknown behavior class");
}

// leading origin exponent of each class (log slope coefficient for LogSingular)
inline double class_exponent(const EquationDescriptor& d, Behavior cls) {
    switch (cls) {
        case Behavior::CPower1: return (d.sigma1 + 2) / (d.m - 1);
        case Behavior::CPower2: return (d.sigma2 + 2) / (d.m - d.p);
        case Behavior::LogSingular: return (d.m - d.p) / (d.m * (d.N - 2));
        case Behavior::StatTail: return -(d.sigma2 + 2) / (d.p - d.m);
        default: return 0.0;
    }
}

enum class ShootTarget { CompactSupport, Decay, Bounded };

inline const char* to_string(ShootTarget t) {
    switch (t) {
        case ShootTarget::CompactSupport: return "CompactSupport";
        case ShootTarget::Decay: return "Decay";
        case ShootTarget::Bounded: return "Bounded";
    }
    return "?";
}

inline ShootTarget target_from_string(std::string s) {
    for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (s == "compactsupport" || s == "compact-support" || s == "compact") return ShootTarget::CompactSupport;
    if (s == "decay") return ShootTarget::Decay;
    if (s == "bounded") return ShootTarget::Bounded;
    throw InvalidParameter("unknown shooting target '" + s + "'");
}

struct ShootOptions {
    double eps = 1e-4;
    double xi_max = 100;
    double lo = 1e-6, hi = 1e6;
    int scan_points = 60;
    int max_iter = 200;
    double rtol = 1e-11, atol = 1e-15;
    double v_eps = 1e-8;     // level of f^{m-1} (relative to its maximum) where the side is decided
    double v_est = 1e-4;     // level where the interface position is extrapolated
    double sample_dx = 2e-3;  // relative sample spacing
    std::optional<double> decay_rate;
    long max_steps = 5'000'000;
};

enum class TrajEnd { Cross, Turn, Reach, Grow };

inline const char* to_string(TrajEnd e) {
    switch (e) {
        case TrajEnd::Cross: return "cross";
        case TrajEnd::Turn: return "turn";
        case TrajEnd::Reach: return "reach";
        case TrajEnd::Grow: return "grow";
    }
    return "?";
}

struct Trajectory {
    TrajEnd end = TrajEnd::Reach;
    double phi = 0;       // <0 crossing side, >0 turning side
    double xi_end = 0;
    double xi0 = kNaN;    // extrapolated interface
    double flux = 0;      // (f^m)' at the stopping point
    double gmax = 0;
    bool near_interface = false;  // reached the extrapolation level before stopping
    std::vector<double> xi, f, fp;
};

namespace detail {

inline void push_sample(Trajectory& T, const ProfileODE& o, double x, const std::array<double, 2>& y) {
    double G = y[0], H = y[1];
    double f, fp;
    if (o.m == 1) {
        f = G, fp = H;
    } else {
        double Gp = std::max(G, 1e-300);
        f = std::pow(Gp, 1 / o.m);
        fp = H / (o.m * std::pow(Gp, (o.m - 1) / o.m));
    }
    if (!T.xi.empty() && !(x > T.xi.back())) return;
    T.xi.push_back(x), T.f.push_back(std::max(f, 0.0)), T.fp.push_back(fp);
}

}  // namespace detail

namespace detail {

// near an interface: v = f^{m-1}, w = v', d/ds = v d/dxi removes the 1/v singularity
struct PressureSystem {
    const ProfileODE* o;
    void operator()(const std::array<double, 3>& y, std::array<double, 3>& dy, double) const {
        const double m = o->m, e = 1 / (m - 1), mu = m / (m - 1);
        double x = y[0], v = y[1], w = y[2];
        double vp = std::max(v, 0.0);
        dy[0] = v;
        dy[1] = v * w;
        dy[2] = -e * w * w - (o->N - 1) / x * v * w - std::pow(x, o->s2) * std::pow(vp, (o->p - 1) * e + 1) / mu +
                std::pow(x, o->s1) * (o->alpha * v - o->beta * x * e * w) / mu;
    }
};

}  // namespace detail

// integrate outward from eps and classify how the trajectory ends
inline Trajectory integrate_profile(const ProfileODE& o, double eps, double f0, double fp0, const ShootOptions& opt,
                                    bool keep) {
    using state = std::array<double, 2>;
    Trajectory T;
    state y{std::pow(f0, o.m), o.m * std::pow(f0, o.m - 1) * fp0};
    auto sys = [&o](const state& s, state& ds, double x) { o.gh(s, ds, x); };
    // f(eps) can be as small as eps^k; tolerances follow the starting scale
    const double g0 = std::abs(y[0]) > 0 ? std::abs(y[0]) : 1.0;
    auto stepper = odeint::make_dense_output(opt.atol * g0, opt.rtol, odeint::runge_kutta_dopri5<state>());
    stepper.initialize(y, eps, eps * 1e-3);
    const bool deg = o.m > 1;
    const double vexp = deg ? (o.m - 1) / o.m : 1.0;
    const double v_switch = 1e-3;
    auto vof = [&](double G) { return deg ? std::pow(std::max(G, 0.0), vexp) : G; };
    double vmax = vof(y[0]);
    double g_start = std::max(y[0], 1.0);
    T.gmax = y[0];
    if (keep) detail::push_sample(T, o, eps, y);

    auto locate = [&](double a, double b, auto&& g) {
        state s;
        for (int i = 0; i < 80; ++i) {
            double c = 0.5 * (a + b);
            stepper.calc_state(c, s);
            if (g(s) > 0) a = c;
            else b = c;
        }
        stepper.calc_state(b, s);
        return std::make_pair(b, s);
    };
    auto finish = [&](TrajEnd e, double x, const state& s) {
        T.end = e;
        T.xi_end = x;
        T.flux = s[1];
        if (keep) detail::push_sample(T, o, x, s);
        return T;
    };

    double xs = kNaN;
    state ss{};
    long steps = 0;
    while (true) {
        if (++steps > opt.max_steps)
            throw StiffnessFailure("step budget exhausted at xi=" + fmt_num(stepper.current_time()));
        std::pair<double, double> span;
        try {
            span = stepper.do_step(sys);
        } catch (const std::exception& ex) {
            throw StiffnessFailure(std::string("profile integration stalled at xi=") +
                                   fmt_num(stepper.current_time()) + ": " + ex.what());
        }
        auto [x0, x1] = span;
        state s1 = stepper.current_state();
        state s0;
        stepper.calc_state(x0, s0);
        if (!std::isfinite(s1[0]) || !std::isfinite(s1[1])) {
            T.phi = 1;
            return finish(TrajEnd::Grow, x0, s0);
        }
        if (deg && vof(s1[0]) <= v_switch * vmax) {
            auto [x, s] = locate(x0, x1, [&](const state& q) { return vof(q[0]) - v_switch * vmax; });
            if (keep) {
                double dx = opt.sample_dx * std::max(1.0, x0);
                int k = int((x - x0) / dx);
                state q;
                for (int i = 1; i <= k; ++i) {
                    stepper.calc_state(x0 + (x - x0) * i / (k + 1), q);
                    detail::push_sample(T, o, x0 + (x - x0) * i / (k + 1), q);
                }
            }
            xs = x, ss = s;
            break;
        }
        if (keep) {
            double dx = opt.sample_dx * std::max(1.0, x0);
            int k = int((x1 - x0) / dx);
            state s;
            for (int i = 1; i <= k; ++i) {
                double x = x0 + (x1 - x0) * i / (k + 1);
                stepper.calc_state(x, s);
                if (s[0] > 0) detail::push_sample(T, o, x, s);
            }
        }
        if (!deg && s1[0] <= 0) {
            auto [x, s] = locate(x0, x1, [&](const state& q) { return q[0]; });
            T.phi = std::min(s[1], -1e-300);
            T.xi0 = x;
            return finish(TrajEnd::Cross, x, s);
        }
        if (s0[1] < 0 && s1[1] >= 0) {
            auto [x, s] = locate(x0, x1, [&](const state& q) { return -q[1]; });
            T.phi = vof(s[0]) / vmax;
            return finish(TrajEnd::Turn, x, s);
        }
        vmax = std::max(vmax, vof(s1[0]));
        T.gmax = std::max(T.gmax, s1[0]);
        if (keep) detail::push_sample(T, o, x1, s1);
        if (s1[0] > 1e20 * g_start) {
            T.phi = 1;
            return finish(TrajEnd::Grow, x1, s1);
        }
        if (x1 >= opt.xi_max) {
            T.phi = vof(s1[0]) / vmax;
            return finish(TrajEnd::Reach, x1, s1);
        }
    }

    // pressure phase
    using pstate = std::array<double, 3>;
    const double e = 1 / (o.m - 1);
    double v0 = vof(ss[0]);
    pstate z{xs, v0, vexp * std::pow(std::max(ss[0], 1e-300), -1 / o.m) * ss[1]};
    detail::PressureSystem ps{&o};
    auto pst = odeint::make_dense_output(1e-16 * vmax, opt.rtol, odeint::runge_kutta_dopri5<pstate>());
    double ds0 = 1e-3 * std::max(xs, 1e-3) / std::max(v0, 1e-300);
    pst.initialize(z, 0.0, ds0);
    auto plocate = [&](double a, double b, auto&& g) {
        pstate q;
        for (int i = 0; i < 80; ++i) {
            double c = 0.5 * (a + b);
            pst.calc_state(c, q);
            if (g(q) > 0) a = c;
            else b = c;
        }
        pst.calc_state(b, q);
        return q;
    };
    auto psample = [&](const pstate& q) {
        if (!keep || !(q[1] > 0)) return;
        if (!T.xi.empty() && !(q[0] > T.xi.back())) return;
        T.xi.push_back(q[0]), T.f.push_back(std::pow(q[1], e)), T.fp.push_back(e * std::pow(q[1], e - 1) * q[2]);
    };
    const double lvl = opt.v_eps * vmax, est = opt.v_est * vmax;
    const double wst_scale = vexp * std::abs(o.beta);
    bool have_est = false;
    auto mark = [&](const pstate& q) {
        if (have_est) return;
        have_est = true;
        T.xi0 = q[2] < 0 ? q[0] + q[1] / (-q[2]) : q[0];
        T.flux = o.m / (o.m - 1) * std::pow(std::max(q[1], 0.0), e) * q[2];
        psample(q);
    };
    auto stop = [&](TrajEnd en, const pstate& q, double phi) {
        if (!have_est) psample(q);
        T.phi = phi;
        T.end = en;
        T.near_interface = have_est;
        T.xi_end = q[0];
        return T;
    };
    for (int steps = 0; steps < 2000000; ++steps) {
        std::pair<double, double> span;
        try {
            span = pst.do_step(ps);
        } catch (const std::exception& ex) {
            throw StiffnessFailure(std::string("pressure integration stalled: ") + ex.what());
        }
        auto [a, b] = span;
        pstate q0, q1 = pst.current_state();
        pst.calc_state(a, q0);
        if (keep && !have_est) {
            double dx = opt.sample_dx * std::max(1.0, q0[0]);
            int k = std::min(1000, int(std::abs(q1[0] - q0[0]) / dx));
            pstate q;
            for (int i = 1; i <= k; ++i) {
                pst.calc_state(a + (b - a) * i / (k + 1), q);
                if (q[1] > est) psample(q);
            }
        }
        if (!have_est && q1[1] <= est) mark(plocate(a, b, [&](const pstate& r) { return r[1] - est; }));
        double wst = -vexp * o.beta * std::pow(q1[0], o.s1 + 1);
        if (q1[1] <= lvl) {
            auto q = plocate(a, b, [&](const pstate& r) { return r[1] - lvl; });
            wst = -vexp * o.beta * std::pow(q[0], o.s1 + 1);
            return stop(TrajEnd::Cross, q, q[2] - wst);
        }
        if (q0[2] < 0 && q1[2] >= 0) {
            auto q = plocate(a, b, [&](const pstate& r) { return -r[2]; });
            return stop(TrajEnd::Turn, q, std::max(q[1] / vmax, 1e-300));
        }
        // left the interface slope: steeper means crossing, shallower means turning
        if (wst_scale > 0 && std::abs(q1[2] - wst) > 0.5 * std::abs(wst))
            return stop(q1[2] < wst ? TrajEnd::Cross : TrajEnd::Turn, q1, q1[2] - wst);
        if (!have_est) psample(q1);
        if (q1[0] >= opt.xi_max) return stop(TrajEnd::Reach, q1, q1[1] / vmax);
    }
    throw StiffnessFailure("pressure phase did not terminate");
}

// whether the class has a free scalar in its expansion
inline bool class_has_param(Behavior b) { return b != Behavior::CPower1 && b != Behavior::StatTail; }

inline double origin_value(const EquationDescriptor& d, Behavior b, double param) {
    switch (b) {
        case Behavior::Q1:
        case Behavior::Q1var:
        case Behavior::ExpQ1: return std::pow(param, 1 / (d.m - d.p));
        case Behavior::PosOrigin: return std::pow(param, 1 / (d.m - 1));
        case Behavior::CPower1:
        case Behavior::CPower2: return 0.0;
        default: return kNaN;
    }
}

inline Trajectory shoot_once(const EquationDescriptor& d, const SelfSimilarForm& form, Behavior cls, double param,
                             const ShootOptions& opt, bool keep) {
    auto o = profile_ode(d, form);
    auto [f0, fp0] = initial_expansion(d, form, cls, param, opt.eps);
    return integrate_profile(o, opt.eps, f0, fp0, opt, keep);
}

struct ScanPoint {
    double param, phi;
    TrajEnd end;
};

inline std::vector<ScanPoint> scan_shoot(const EquationDescriptor& d, const SelfSimilarForm& form, Behavior cls,
                                         const ShootOptions& opt) {
    std::vector<ScanPoint> out;
    for (double D : num::logspace(opt.lo, opt.hi, std::size_t(opt.scan_points))) {
        try {
            auto T = shoot_once(d, form, cls, D, opt, false);
            out.push_back({D, T.phi, T.end});
        } catch (const KindMismatch&) {
            out.push_back({D, kNaN, TrajEnd::Reach});
        } catch (const StiffnessFailure&) {
            out.push_back({D, kNaN, TrajEnd::Reach});
        }
    }
    return out;
}

namespace detail {

inline Profile to_profile(const EquationDescriptor& d, const SelfSimilarForm& form, Behavior cls, double param,
                          Trajectory&& T, ShootTarget target) {
    Profile P;
    P.descriptor = d;
    P.form = form;
    P.behavior_class = cls;
    P.shoot_param = param;
    double f0 = origin_value(d, cls, param);
    if (std::isfinite(f0) && !T.xi.empty() && T.xi.front() > 0) {
        T.xi.insert(T.xi.begin(), 0.0);
        T.f.insert(T.f.begin(), f0);
        T.fp.insert(T.fp.begin(), kNaN);
    }
    if (T.near_interface && d.m > 1 && std::isfinite(T.xi0)) {
        P.xi0 = T.xi0;
        if (T.xi0 > T.xi.back()) {
            T.xi.push_back(T.xi0), T.f.push_back(0.0), T.fp.push_back(kNaN);
        }
    }
    P.interface_flux = T.flux;
    P.xi = std::move(T.xi), P.f = std::move(T.f), P.fprime = std::move(T.fp);
    if (target == ShootTarget::Decay && P.xi.size() > 8) {
        std::vector<double> lx, lf;
        double xe = P.xi.back();
        for (std::size_t i = 0; i < P.xi.size(); ++i)
            if (P.xi[i] > 0.1 * xe && P.f[i] > 0) lx.push_back(std::log(P.xi[i])), lf.push_back(std::log(P.f[i]));
        if (lx.size() > 3) P.tail_exponent = num::fit_line(lx, lf).slope;
    }
    P.build();
    return P;
}

}  // namespace detail

// one-parameter shooting on the origin constant of the class
inline Profile shoot(const EquationDescriptor& d, const SelfSimilarForm& form, Behavior cls, ShootTarget target,
                     const ShootOptions& opt = {}) {
    if (target == ShootTarget::CompactSupport && !(d.m > 1))
        throw KindMismatch("compact support needs m>1");
    if (!class_has_param(cls)) {
        // unique trajectory
        auto T = shoot_once(d, form, cls, kNaN, opt, true);
        if (target == ShootTarget::CompactSupport && !T.near_interface)
            throw NonConvergence(std::string("trajectory ended by ") + to_string(T.end) + ", no interface");
        auto P = detail::to_profile(d, form, cls, kNaN, std::move(T), target);
        P.iterations = 0;
        return P;
    }
    auto scan = scan_shoot(d, form, cls, opt);
    int bracket = -1, roots = 0;
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
        double a = scan[i].phi, b = scan[i + 1].phi;
        if (std::isnan(a) || std::isnan(b)) continue;
        if ((a < 0) != (b < 0)) {
            ++roots;
            if (bracket < 0) bracket = int(i);
        }
    }
    if (bracket < 0)
        throw NoBracketing("no sign change of the shooting functional on [" + fmt_num(opt.lo) + ", " +
                           fmt_num(opt.hi) + "] with " + std::to_string(opt.scan_points) + " points");
    double la = std::log(scan[bracket].param), lb = std::log(scan[bracket + 1].param);
    double pa = scan[bracket].phi;
    int it = 0;
    for (; it < opt.max_iter && std::abs(lb - la) > 1e-15 * std::max(1.0, std::abs(la)); ++it) {
        double lc = 0.5 * (la + lb);
        auto T = shoot_once(d, form, cls, std::exp(lc), opt, false);
        if ((T.phi < 0) == (pa < 0)) la = lc, pa = T.phi;
        else lb = lc;
    }
    if (it >= opt.max_iter) throw NonConvergence("bisection did not settle");
    auto Ta = shoot_once(d, form, cls, std::exp(la), opt, true);
    auto Tb = shoot_once(d, form, cls, std::exp(lb), opt, true);
    bool use_a = Ta.near_interface && (!Tb.near_interface || std::abs(Ta.phi) <= std::abs(Tb.phi));
    double par = use_a ? std::exp(la) : std::exp(lb);
    Trajectory T = use_a ? std::move(Ta) : std::move(Tb);
    if (target == ShootTarget::CompactSupport && !T.near_interface)
        throw NonConvergence("bracket found but the limiting trajectory has no interface");
    auto P = detail::to_profile(d, form, cls, par, std::move(T), target);
    P.iterations = it;
    if (roots > 1) P.descriptor.warnings.push_back(std::to_string(roots) + " sign changes found in the scan");
    return P;
}

// c f' = f'' - lambda f + f^p: integrate backwards in y from the stable manifold of 0
inline TravelingWave traveling_wave_solve(double lambda, double p, double c, double h = 0.005) {
    if (!(lambda > 0) || !(p > 1) || !(c > 0)) throw InvalidParameter("wave needs lambda>0, p>1, c>0");
    using state = std::array<double, 2>;
    TravelingWave W;
    W.lambda = lambda, W.p = p, W.c = c;
    const double fs = std::pow(lambda, 1 / (p - 1));
    W.f_star = fs;
    const double mu = 0.5 * (c - std::sqrt(c * c + 4 * lambda));
    W.decay_rate = mu;
    double disc = c * c - 4 * (p - 1) * lambda;
    double slow = disc >= 0 ? 0.5 * (c - std::sqrt(disc)) : 0.5 * c;
    const double y_stop = -(200.0 + 80.0 / slow);

    auto sys = [&](const state& s, state& ds, double) {
        double f = s[0];
        ds[0] = s[1];
        ds[1] = c * s[1] + lambda * f - (f >= 0 ? std::pow(f, p) : -std::pow(-f, p));
    };
    const double d0 = 1e-9 * fs;
    state y{d0, mu * d0};
    auto st = odeint::make_dense_output(1e-17 * fs, 1e-13, odeint::runge_kutta_dopri5<state>());
    st.initialize(y, 0.0, -1e-3);
    std::vector<double> ys{0.0}, fs_{d0}, fps{mu * d0};
    double next = -h;
    while (true) {
        auto [t0, t1] = st.do_step(sys);
        (void)t0;
        state s;
        while (next >= t1) {
            st.calc_state(next, s);
            ys.push_back(next), fs_.push_back(s[0]), fps.push_back(s[1]);
            next -= h;
        }
        state cur = st.current_state();
        if (!(cur[0] > -1e-12 * fs) || cur[0] > 10 * fs || !std::isfinite(cur[0]))
            throw NoConnection("trajectory escapes for c=" + fmt_num(c));
        if (std::abs(cur[0] - fs) < 1e-13 * fs && std::abs(cur[1]) < 1e-13 * fs && t1 < -20) break;
        if (t1 < y_stop) throw NoConnection("no convergence to the nonzero equilibrium for c=" + fmt_num(c));
    }
    std::reverse(ys.begin(), ys.end());
    std::reverse(fs_.begin(), fs_.end());
    std::reverse(fps.begin(), fps.end());
    // shift the first half-height crossing seen from the tail to y=0
    double shift = 0;
    for (std::size_t i = ys.size() - 1; i > 0; --i) {
        if (fs_[i - 1] >= 0.5 * fs && fs_[i] < 0.5 * fs) {
            double t = (0.5 * fs - fs_[i]) / (fs_[i - 1] - fs_[i]);
            shift = ys[i] + t * (ys[i - 1] - ys[i]);
            break;
        }
    }
    for (auto& v : ys) v -= shift;
    W.y = std::move(ys), W.f = std::move(fs_), W.fprime = std::move(fps);
    W.monotone = true;
    for (double d : W.fprime)
        if (d > 1e-12 * fs) W.monotone = false;
    W.build();
    // polish the half-height point on the interpolant
    boost::math::tools::eps_tolerance<double> tol(50);
    auto half = [&](double s) { return W(s) - 0.5 * fs; };
    if (half(-2 * h) > 0 && half(2 * h) < 0) {
        auto [a, b] = boost::math::tools::bisect(half, -2 * h, 2 * h, tol);
        double s0 = 0.5 * (a + b);
        for (auto& v : W.y) v -= s0;
        W.build();
    }
    return W;
}

inline double wave_speed_threshold(double lambda, double p) { return 2 * std::sqrt((p - 1) * lambda); }

}  // namespace rdx
