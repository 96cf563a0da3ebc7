#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rdx/descriptor.hpp"
#include "rdx/numerics.hpp"

namespace rdx {

// sigma and dimension seen by the single-weight equation after the main change of variables
inline double transformed_sigma(double s1, double s2) { return 2.0 * (s2 - s1) / (2.0 + s1); }
inline double transformed_N(double N, double s1) { return 2.0 * (N + s1) / (s1 + 2.0); }

inline double l_sigma(double m, double p, double s1, double s2) {
    return s2 * (m - 1) + 2 * (p - 1) - s1 * (m - p);
}

inline bool l_is_zero(double L, double s1, double s2) {
    return std::abs(L) < 1e-10 * (1 + std::abs(s1) + std::abs(s2));
}

struct LConstants {
    double L = kNaN;        // sigma(m-1)+2(p-1) with the transformed sigma; NaN if sigma1<=-2
    double L_sigma = kNaN;  // s2(m-1)+2(p-1)-s1(m-p)
};

inline LConstants l_constants(const EquationDescriptor& d) {
    LConstants c;
    c.L_sigma = l_sigma(d.m, d.p, d.sigma1, d.sigma2);
    if (d.sigma1 > -2) c.L = transformed_sigma(d.sigma1, d.sigma2) * (d.m - 1) + 2 * (d.p - 1);
    return c;
}

struct FujitaPair {
    std::optional<double> p_F, mu;
    std::vector<std::string> notes;
};

inline FujitaPair fujita_pair(const EquationDescriptor& d) {
    FujitaPair r;
    if (d.N + d.sigma1 > 0)
        r.p_F = d.m + (2 + d.sigma2) / (d.N + d.sigma1);
    else
        r.notes.push_back("p_F undefined: N+sigma1<=0");
    if (d.p > d.m)
        r.mu = (d.sigma2 + 2) / (d.p - d.m);
    else
        r.notes.push_back("mu undefined: requires p>m");
    return r;
}

struct PmThresholds {
    double sigma2c = kNaN, nonexist_bound = kNaN, sharpness_dim = kNaN;
};

inline PmThresholds pm_thresholds(const EquationDescriptor& d) {
    if (!(d.m > 1)) throw KindMismatch("p=m thresholds need m>1");
    PmThresholds t;
    const double m = d.m, N = d.N, s1 = d.sigma1;
    t.sigma2c = s1 + (2 * (N - 1) + s1) * (m - 1) / (3 * m + 1);
    t.nonexist_bound = s1 + (m - 1) * (N + s1) / (m + 1);
    t.sharpness_dim = (m * s1 + 4 * m + 2) / (m + 1);
    return t;
}

// equal-weight critical exponents, sigma = sigma2
inline double p_c_equal(double m, double N, double s) {
    return N > 2 ? m * (N + s) / (N - 2) : kInf;
}
inline double p_s_equal(double m, double N, double s) {
    return N > 2 ? m * (N + 2 * s + 2) / (N - 2) : kInf;
}
inline double p_jl_equal(double m, double N, double s) {
    if (!(N > 10 + 4 * s)) return kInf;
    double num = N * N - 8 * N + 4 - 2 * s * s - 2 * (N + 2) * s +
                 2 * (s + 2) * std::sqrt((s + 2) * (2 * N + s - 2));
    return m * num / ((N - 2) * (N - 10 - 4 * s));
}
inline double p_l_equal(double m, double N, double s) {
    if (!(N > 10 + 4 * s)) return kInf;
    double g = N - 10 - 4 * s;
    double disc = 4 * (m - 1) * (m - 1) * g * g + 2 * (m - 1) * (5 * m - 4) * (s + 2) * g +
                  9 * m * m * (s + 2) * (s + 2);
    return 1 + (3 * m * (s + 2) + std::sqrt(disc)) / (2 * g);
}
// forward solutions with compact support exist below this value
inline double p_c_forward(double m, double s1, double s2) {
    return m - (m - 1) * (s2 + 2) / (s1 + 2);
}

struct SlowDiffusionSet {
    double p_c_fw = kNaN, p_c = kNaN, p_s = kNaN, p_JL = kNaN, p_L = kNaN;
};

inline SlowDiffusionSet slow_diffusion_set(const EquationDescriptor& d) {
    SlowDiffusionSet s;
    if (d.sigma1 > -2) s.p_c_fw = p_c_forward(d.m, d.sigma1, d.sigma2);
    s.p_c = p_c_equal(d.m, d.N, d.sigma2);
    s.p_s = p_s_equal(d.m, d.N, d.sigma2);
    s.p_JL = p_jl_equal(d.m, d.N, d.sigma2);
    s.p_L = p_l_equal(d.m, d.N, d.sigma2);
    return s;
}

// semilinear (m=1) constants
inline double heat_p_s(double N, double s) { return N > 2 ? (N + 2 + 2 * s) / (N - 2) : kInf; }
inline double heat_p_jl(double N, double s) {
    if (!(N > 10 + 4 * s)) return kInf;
    return 1 + (2 * s + 4) / (N - 4 - s - std::sqrt((2 * N + s - 2) * (s + 2)));
}
inline double heat_M(double N, double p, double s1) {
    return (p - 1) * (p - 1) * N * N - 4 * (p - 1) * (p * s1 + 3 * p - 1) * N +
           4 * p * s1 * (s1 + 2 * p + 2) + 20 * p * p - 8 * p + 4;
}
// NaN where the square root or the Sobolev exponent is undefined
inline double heat_L(double N, double p, double s1) {
    double M = heat_M(N, p, s1);
    if (M < 0 || !(N > 2) || !(s1 > -2)) return kNaN;
    return ((N - 2) * (p - heat_p_s(N, s1)) - std::sqrt(M)) / (2 + s1);
}
inline double q_min(double N, double p, double s1, double s2) {
    return std::max(p * (N + s1) / (N + s2), (p - 1) * (N + s1) / (2 + s2));
}
inline double k_star(double N) {
    if (!(N >= 3)) throw OutOfRange("Hardy constant needs N>=3");
    return (N - 2) * (N - 2) / 4;
}
// amplitude of the singular stationary solution; nullopt outside p>p_c, N>2
inline std::optional<double> k_stat(double m, double N, double s2, double p) {
    if (!(N > 2)) return std::nullopt;
    double pc = p_c_equal(m, N, s2);
    if (!(p > pc) || !(p > m)) return std::nullopt;
    double rad = m * (N - 2) * (s2 + 2) * (p - pc) / ((p - m) * (p - m));
    if (!(rad > 0)) return std::nullopt;
    return std::pow(rad, 1.0 / (p - m));
}

struct SemilinearSet {
    double heat_p_s = kNaN, heat_p_JL = kNaN, heat_L = kNaN, heat_M = kNaN, q_min = kNaN;
    std::optional<double> K_star;
    double asympt_rate_p2 = kNaN, asympt_rate_p3 = kNaN;
};

inline SemilinearSet semilinear_set(const EquationDescriptor& d) {
    if (d.m != 1) throw KindMismatch("semilinear constants need m=1");
    SemilinearSet s;
    s.heat_p_s = heat_p_s(d.N, d.sigma2);
    s.heat_p_JL = heat_p_jl(d.N, d.sigma2);
    s.heat_M = heat_M(d.N, d.p, d.sigma1);
    s.heat_L = heat_L(d.N, d.p, d.sigma1);
    s.q_min = q_min(d.N, d.p, d.sigma1, d.sigma2);
    if (d.N >= 3) s.K_star = k_star(d.N);
    if (d.p > 1) {
        s.asympt_rate_p2 = (d.sigma2 + 2) / (2 * (d.p - 1));
        s.asympt_rate_p3 = (d.sigma2 + 2) / (d.p - 1);
    }
    return s;
}

struct ExponentEntry {
    std::string name;
    double value = kNaN;
    bool defined = false;
    std::string formula;
    std::string note;
};

struct ExponentTable {
    std::vector<ExponentEntry> entries;

    const ExponentEntry* find(const std::string& name) const {
        for (auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
    // NaN when absent or undefined
    double get(const std::string& name) const {
        auto* e = find(name);
        return e && e->defined ? e->value : kNaN;
    }
};

inline ExponentTable exponent_table(const EquationDescriptor& d) {
    ExponentTable t;
    auto put = [&](std::string name, double v, std::string formula, std::string note = {}) {
        ExponentEntry e;
        e.name = std::move(name);
        e.value = v;
        e.defined = !std::isnan(v);
        e.formula = std::move(formula);
        e.note = e.defined ? std::move(note) : (note.empty() ? "not defined for these parameters" : note);
        t.entries.push_back(std::move(e));
    };
    const double m = d.m, p = d.p, N = d.N, s1 = d.sigma1, s2 = d.sigma2;

    auto lc = l_constants(d);
    put("L", lc.L, "sigma(m-1)+2(p-1), sigma=2(sigma2-sigma1)/(sigma1+2)",
        d.sigma1 > -2 ? "" : "needs sigma1>-2");
    put("L_sigma", lc.L_sigma, "sigma2(m-1)+2(p-1)-sigma1(m-p)");

    auto fp = fujita_pair(d);
    put("p_F", fp.p_F.value_or(kNaN), "m+(2+sigma2)/(N+sigma1)", "needs N+sigma1>0");
    put("mu", fp.mu.value_or(kNaN), "(sigma2+2)/(p-m)", "needs p>m");

    if (m > 1) {
        auto th = pm_thresholds(d);
        put("sigma2c", th.sigma2c, "sigma1+[2(N-1)+sigma1](m-1)/(3m+1)");
        put("pm_nonexist_bound", th.nonexist_bound, "sigma1+(m-1)(N+sigma1)/(m+1)");
        put("pm_sharpness_dim", th.sharpness_dim, "(m sigma1+4m+2)/(m+1)");
        put("hardy_limit_power", (s1 + 2) / (m - 1), "(sigma1+2)/(m-1)");
    } else {
        put("sigma2c", kNaN, "sigma1+[2(N-1)+sigma1](m-1)/(3m+1)", "needs m>1");
        put("pm_nonexist_bound", kNaN, "sigma1+(m-1)(N+sigma1)/(m+1)", "needs m>1");
        put("pm_sharpness_dim", kNaN, "(m sigma1+4m+2)/(m+1)", "needs m>1");
        put("hardy_limit_power", kNaN, "(sigma1+2)/(m-1)", "needs m>1");
    }

    auto sd = slow_diffusion_set(d);
    put("p_c_fw", sd.p_c_fw, "m-(m-1)(sigma2+2)/(sigma1+2)", "needs sigma1>-2");
    put("p_c", sd.p_c, "m(N+sigma2)/(N-2)", N > 2 ? "" : "+inf for N<=2");
    put("p_s", sd.p_s, "m(N+2 sigma2+2)/(N-2)", N > 2 ? "" : "+inf for N<=2");
    put("p_JL", sd.p_JL,
        "m[N^2-8N+4-2sigma2^2-2(N+2)sigma2+2(sigma2+2)sqrt((sigma2+2)(2N+sigma2-2))]/((N-2)(N-10-4sigma2))",
        N > 10 + 4 * s2 ? "" : "+inf for N<=10+4sigma2");
    put("p_L", sd.p_L, "1+(3m(sigma2+2)+sqrt(Lambda))/(2(N-10-4sigma2))",
        N > 10 + 4 * s2 ? "" : "+inf for N<=10+4sigma2");

    if (m == 1) {
        auto hs = semilinear_set(d);
        put("heat_p_s", hs.heat_p_s, "(N+2+2sigma2)/(N-2)", N > 2 ? "" : "+inf for N<=2");
        put("heat_p_JL", hs.heat_p_JL, "1+(2sigma2+4)/(N-4-sigma2-sqrt((2N+sigma2-2)(sigma2+2)))",
            N > 10 + 4 * s2 ? "" : "+inf for N<=10+4sigma2");
        put("heat_L", hs.heat_L, "((N-2)(p-p_s(sigma1))-sqrt(M))/(2+sigma1)", "needs N>2 and M>=0");
        put("heat_M", hs.heat_M,
            "(p-1)^2N^2-4(p-1)(p sigma1+3p-1)N+4p sigma1(sigma1+2p+2)+20p^2-8p+4");
        put("asympt_rate_p2", hs.asympt_rate_p2, "(sigma2+2)/(2(p-1))", "needs p>1");
        put("asympt_rate_p3", hs.asympt_rate_p3, "(sigma2+2)/(p-1)", "needs p>1");
    } else {
        for (auto n : {"heat_p_s", "heat_p_JL", "heat_L", "heat_M", "asympt_rate_p2", "asympt_rate_p3"})
            put(n, kNaN, "semilinear only", "needs m=1");
    }
    put("q_min", q_min(N, p, s1, s2), "max{p(N+sigma1)/(N+sigma2),(p-1)(N+sigma1)/(2+sigma2)}");
    put("K_star", N >= 3 ? k_star(N) : kNaN, "(N-2)^2/4", "needs N>=3");
    put("K_stat", k_stat(m, N, s2, p).value_or(kNaN),
        "[m(N-2)(sigma2+2)(p-p_c)/(p-m)^2]^(1/(p-m))", "needs N>2 and p>p_c");
    return t;
}

}  // namespace rdx
