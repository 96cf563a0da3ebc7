#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rdx/descriptor.hpp"
#include "rdx/exponents.hpp"

namespace rdx {

struct RawParams {
    double m = 1, p = 1, N = 1, sigma1 = 0, sigma2 = 0;
};

inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline EquationDescriptor validate(const RawParams& r) {
    std::vector<std::string> bad;
    auto finite = [&](double v, const char* n) {
        if (!std::isfinite(v)) bad.push_back(std::string(n) + " must be finite");
        return std::isfinite(v);
    };
    bool ok = finite(r.m, "m") & finite(r.p, "p") & finite(r.N, "N") & finite(r.sigma1, "sigma1") &
              finite(r.sigma2, "sigma2");
    if (ok) {
        if (r.m < 1) bad.push_back("m<1 (m=" + fmt_num(r.m) + ")");
        if (r.p < 1) bad.push_back("p<1 (p=" + fmt_num(r.p) + ")");
        if (r.N <= 0) bad.push_back("N<=0 (N=" + fmt_num(r.N) + ")");
    }
    if (!bad.empty()) {
        std::string msg;
        for (auto& b : bad) msg += (msg.empty() ? "" : "; ") + b;
        throw InvalidParameter(msg);
    }
    EquationDescriptor d = make_descriptor(r.m, r.p, r.N, r.sigma1, r.sigma2);
    if (r.sigma1 <= -2)
        d.warnings.push_back("sigma1<=-2 is outside main-transform range");
    if (r.N == 1 && r.sigma1 < 0)
        d.warnings.push_back("main transform requires sigma1>=0 in N=1");
    if (r.N == 1 && r.sigma2 <= -1)
        d.warnings.push_back("self-similar results in N=1 require sigma2>-1");
    if (r.sigma2 < -2)
        d.warnings.push_back("sigma2<-2 is outside the studied range");
    return d;
}

// exponents from equating the powers of t (or T-t, or e^t) in the three terms
inline SelfSimilarForm self_similar_exponents(const EquationDescriptor& d, FormKind kind,
                                              double T = 1.0) {
    const double m = d.m, p = d.p, s1 = d.sigma1, s2 = d.sigma2;
    const double Ls = l_sigma(m, p, s1, s2);
    SelfSimilarForm f;
    f.kind = kind;
    switch (kind) {
        case FormKind::Forward:
        case FormKind::Backward: {
            if (l_is_zero(Ls, s1, s2))
                throw DegenerateSystem("L(sigma1,sigma2)=0: no forward or backward exponents");
            // [m-1, -(s1+2); m-p, -(s2+2)] (alpha, beta) = (rhs, 0)
            double a11 = m - 1, a12 = -(s1 + 2), a21 = m - p, a22 = -(s2 + 2);
            double rhs = kind == FormKind::Forward ? -1.0 : 1.0;
            double det = a11 * a22 - a12 * a21;
            f.alpha = rhs * a22 / det;
            f.beta = -a21 * rhs / det;
            if (kind == FormKind::Backward) {
                if (!(T > 0) || !std::isfinite(T)) throw InvalidParameter("backward form needs finite T>0");
                f.T = T;
            }
            return f;
        }
        case FormKind::Exponential: {
            if (!l_is_zero(Ls, s1, s2))
                throw KindMismatch("exponential form needs L(sigma1,sigma2)=0, got " + fmt_num(Ls));
            if (!(m > 1)) throw DegenerateSystem("exponential form needs m>1");
            f.beta = 1.0;
            f.alpha = (s1 + 2) / (m - 1);
            return f;
        }
        case FormKind::SeparateVariable: {
            if (!(m > 1) || std::abs(p - m) > 1e-12 * m)
                throw KindMismatch("separate-variable form needs p=m>1");
            f.alpha = 1.0 / (m - 1);
            f.beta = 0.0;
            if (!(T > 0) || !std::isfinite(T)) throw InvalidParameter("separate-variable form needs finite T>0");
            f.T = T;
            return f;
        }
        case FormKind::Stationary:
            f.alpha = 0, f.beta = 0;
            return f;
    }
    return f;
}

// closed forms used as a cross-check of the linear solve
inline std::pair<double, double> closed_form_exponents(const EquationDescriptor& d, FormKind kind) {
    double Ls = l_sigma(d.m, d.p, d.sigma1, d.sigma2);
    if (kind == FormKind::Backward) return {(2 + d.sigma2) / Ls, (d.m - d.p) / Ls};
    if (kind == FormKind::Forward) return {-(2 + d.sigma2) / Ls, (d.p - d.m) / Ls};
    throw KindMismatch("closed forms exist for forward and backward only");
}

enum class ExpectedForm { Forward, Backward, Exponential, None };
enum class SepStatus { Exists, NotExists, Undetermined, NotApplicable };

inline const char* to_string(ExpectedForm e) {
    switch (e) {
        case ExpectedForm::Forward: return "Forward";
        case ExpectedForm::Backward: return "Backward";
        case ExpectedForm::Exponential: return "Exponential";
        case ExpectedForm::None: return "None";
    }
    return "?";
}
inline const char* to_string(SepStatus s) {
    switch (s) {
        case SepStatus::Exists: return "Exists";
        case SepStatus::NotExists: return "NotExists";
        case SepStatus::Undetermined: return "Undetermined";
        case SepStatus::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct RegimeReport {
    EquationDescriptor descriptor;
    double L_value = kNaN;  // L(sigma1,sigma2)
    double L_transformed = kNaN;
    std::optional<double> fujita;
    std::optional<double> second_critical;
    ExpectedForm expected_form = ExpectedForm::None;
    SepStatus separate_variable_status = SepStatus::NotApplicable;
    std::optional<bool> complete_blowup;
    std::optional<bool> type2_possible;
    std::vector<std::string> notes;
};

inline RegimeReport classify_regime(const EquationDescriptor& d) {
    RegimeReport r;
    r.descriptor = d;
    const double m = d.m, p = d.p, N = d.N, s1 = d.sigma1, s2 = d.sigma2;
    auto lc = l_constants(d);
    r.L_value = lc.L_sigma;
    r.L_transformed = lc.L;
    auto fp = fujita_pair(d);
    r.fujita = fp.p_F;
    r.second_critical = fp.mu;
    for (auto& n : fp.notes) r.notes.push_back(n);

    if (p <= m) {
        if (l_is_zero(lc.L_sigma, s1, s2)) {
            r.expected_form = ExpectedForm::Exponential;
            r.notes.push_back("L(sigma1,sigma2)=0: exponential self-similar solutions, alpha/beta=(sigma1+2)/(m-1)");
        } else if (lc.L_sigma > 0) {
            r.expected_form = ExpectedForm::Backward;
            r.notes.push_back("L(sigma1,sigma2)>0: backward self-similar solutions (finite time blow-up)");
        } else {
            r.expected_form = ExpectedForm::Forward;
            r.notes.push_back("L(sigma1,sigma2)<0: forward self-similar solutions (global in time)");
            if (s1 > -2 && s2 > -2 && s2 < s1 && p < p_c_forward(m, s1, s2))
                r.notes.push_back("compactly supported forward profile: 1<=p<m-(m-1)(sigma2+2)/(sigma1+2)");
        }
    } else if (fp.p_F) {
        if (p <= *fp.p_F) {
            r.expected_form = ExpectedForm::Backward;
            r.notes.push_back("m<p<=p_F=" + fmt_num(*fp.p_F) +
                              ": no nontrivial global solution, universal blow-up");
        } else {
            r.expected_form = ExpectedForm::Forward;
            r.notes.push_back("p>p_F=" + fmt_num(*fp.p_F) +
                              ": global solutions possible for small data; decay faster than |x|^-mu needed");
        }
    }

    if (m > 1 && std::abs(p - m) <= 1e-12 * m) {
        auto th = pm_thresholds(d);
        if (s2 >= th.nonexist_bound) {
            r.separate_variable_status = SepStatus::NotExists;
            r.notes.push_back("sigma2>=sigma1+(m-1)(N+sigma1)/(m+1)=" + fmt_num(th.nonexist_bound) +
                              ": no radial separate-variable solutions");
        } else if (N > th.sharpness_dim && s2 >= th.sigma2c) {
            r.separate_variable_status = SepStatus::NotExists;
            r.notes.push_back("N>(m sigma1+4m+2)/(m+1) and sigma2>=sigma2c=" + fmt_num(th.sigma2c) +
                              ": sharp non-existence");
        } else if (s1 <= s2 && s2 < th.sigma2c && (N >= 2 ? s1 > -2 : s1 >= 0)) {
            r.separate_variable_status = SepStatus::Exists;
            r.notes.push_back("sigma1<=sigma2<sigma2c=" + fmt_num(th.sigma2c) +
                              ": separate-variable blow-up solutions (T-t)^{-1/(m-1)}F(|x|)");
        } else {
            r.separate_variable_status = SepStatus::Undetermined;
            r.notes.push_back("separate-variable existence not decided by the known thresholds");
        }
    }

    if (s1 == s2 && m > 1 && p > m) {
        double ps = p_s_equal(m, N, s2);
        if (p <= ps) {
            r.complete_blowup = true;
            r.notes.push_back("m<p<=p_s(sigma2)=" + fmt_num(ps) + ": blow-up is complete");
        } else {
            r.notes.push_back("p>p_s(sigma2): blow-up complete only if the blow-up set is larger than the origin");
            r.notes.push_back("scaled data lambda*u0: global vs complete blow-up split at lambda=1, direction Undetermined");
        }
        if (auto K = k_stat(m, N, s2, p))
            r.notes.push_back("singular stationary solution K|x|^{-(sigma2+2)/(p-m)}, K=" + fmt_num(*K));
        if (N > 10 + 4 * s2)
            r.notes.push_back("p_JL=" + fmt_num(p_jl_equal(m, N, s2)) + ", p_L=" + fmt_num(p_l_equal(m, N, s2)));
    }

    if (m == 1) {
        double pjl = heat_p_jl(N, s2);
        r.type2_possible = std::isfinite(pjl) && p > pjl;
        if (*r.type2_possible)
            r.notes.push_back("N>10+4sigma2 and p>p_JL(sigma2): Type II blow-up with rates (T-t)^{-2n/L(N,p,sigma1)}");
        if (p > 1 && p < heat_p_s(N, s2))
            r.notes.push_back(s2 >= s1 ? "1<p<p_s(sigma2), sigma2>=sigma1: no self-similar solutions"
                                       : "1<p<p_s(sigma2), sigma2<sigma1: backward self-similar solutions with decreasing profile");
        if (p > 1 && s2 < s1)
            r.notes.push_back("well-posed in L^q(|x|^sigma1) for q>=q_min=" + fmt_num(q_min(N, p, s1, s2)));
    }

    for (auto& w : d.warnings) r.notes.push_back("warning: " + w);
    return r;
}

}  // namespace rdx
