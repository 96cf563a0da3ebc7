#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdx/eqmodel.hpp"
#include "rdx/numerics.hpp"

namespace rdx {

using RadialFn = std::function<double(double, double)>;  // (r or z, t or tau) -> value

// u(r,t) = r^delta w(z,tau),  z = a r^theta  (or z = ln r + K t),  tau = C t
struct CoordinateMap {
    std::string kind;
    double delta = 0, theta = 1, a = 1, C = 1;
    std::optional<double> shift_K;
    bool log_radial = false;
    bool warning = false;  // pull-backs change the character of initial data
    EquationDescriptor source, target;
    std::vector<std::string> notes;

    double z_of(double r, double t) const {
        if (log_radial) {
            if (!(r > 0)) throw DomainError("log map needs r>0");
            return std::log(r) + shift_K.value_or(0.0) * t;
        }
        if (r < 0 || (r == 0 && delta != 0)) throw DomainError("power map needs r>0 here");
        return a * std::pow(r, theta);
    }
    double tau_of(double t) const { return C * t; }
    double t_of(double tau) const { return tau / C; }
    double r_of(double z, double tau) const {
        double t = t_of(tau);
        if (log_radial) return std::exp(z - shift_K.value_or(0.0) * t);
        if (z < 0 || (z == 0 && delta != 0)) throw DomainError("power map needs z>0 here");
        return std::pow(z / a, 1.0 / theta);
    }
    double amplitude(double r) const { return delta == 0 ? 1.0 : std::pow(r, delta); }

    // (m-1)delta + 2theta - sigma1 - 2 for power maps, (m-1)delta - sigma1 - 2 for log maps
    double balance_defect() const {
        double v = (source.m - 1) * delta - source.sigma1 - 2;
        return log_radial ? v : v + 2 * theta;
    }
};

// a and C that make both coefficients one; sigma=-2 keeps a=1, C=theta^2, reaction theta^-2
inline void normalize_scales(CoordinateMap& M, double sigma) {
    if (std::abs(sigma + 2) < 1e-14) {
        M.a = 1.0;
        M.C = M.theta * M.theta;
        M.target.coeffs["reaction"] = 1.0 / (M.theta * M.theta);
        M.notes.push_back("sigma=-2: a=1, C=theta^2, reaction coefficient theta^-2 kept on the target");
    } else {
        M.a = std::pow(M.theta, -2.0 / (sigma + 2));
        M.C = std::pow(M.theta, 2.0 * sigma / (sigma + 2));
    }
}

inline CoordinateMap main_transform(const EquationDescriptor& d) {
    if (!(d.sigma1 > -2)) throw OutOfRange("main transform needs sigma1>-2");
    CoordinateMap M;
    M.kind = "main";
    M.source = d;
    M.delta = 0;
    M.theta = (d.sigma1 + 2) / 2;
    double Nb = transformed_N(d.N, d.sigma1);
    double sig = transformed_sigma(d.sigma1, d.sigma2);
    if (d.sigma1 == d.sigma2) sig = 0.0;
    M.target = make_descriptor(d.m, d.p, Nb, 0.0, sig);
    if (d.N == 1 && d.sigma1 < 0)
        M.notes.push_back("main transform requires sigma1>=0 in N=1");
    normalize_scales(M, sig);
    return M;
}

inline CoordinateMap second_transform(const EquationDescriptor& d) {
    const double m = d.m, N = d.N, s1 = d.sigma1, s2 = d.sigma2, p = d.p;
    double den = m * (s1 + N) - N + 2;
    if (!(den > 0)) throw OutOfRange("second transform needs m(sigma1+N)-N+2>0");
    CoordinateMap M;
    M.kind = "second";
    M.source = d;
    M.delta = -(N - 2) / m;
    M.theta = den / (2 * m);
    double Nb = 2 * (m * (s1 + 2) - N + 2) / den;
    double sig = -2 * (m * (s1 - s2) + (N - 2) * (p - 1)) / den;
    M.target = make_descriptor(m, p, Nb, 0.0, sig);
    M.warning = true;
    M.notes.push_back("second transform alters the behavior of initial data near r=0");
    if (!(Nb > 0)) M.notes.push_back("target dimension is not positive");
    normalize_scales(M, sig);
    return M;
}

inline CoordinateMap euler_transform(const EquationDescriptor& d) {
    const double m = d.m, N = d.N, s1 = d.sigma1, s2 = d.sigma2;
    CoordinateMap M;
    M.kind = "euler";
    M.source = d;
    M.log_radial = true;
    M.theta = 1, M.C = 1, M.a = 1;
    EquationDescriptor t = make_descriptor(m, d.p, 1.0, 0.0, 0.0);
    if (s1 == -2 && m >= 1) {
        M.delta = 0;
        t.coeffs["convection"] = N - 2;
        if (s2 == -2) {
            t.family = Family::ConvectionForm;
        } else {
            t.family = Family::EulerForm;
            t.coeffs["zeroth"] = 0.0;
            t.coeffs["reaction_exp"] = s2 + 2;
        }
    } else if (m > 1 && s1 > -2 && l_is_zero(l_sigma(m, d.p, s1, s2), s1, s2)) {
        M.delta = (s1 + 2) / (m - 1);
        t.family = Family::EulerForm;
        t.coeffs["convection"] = (m * N - N + 2 + 2 * m * (s1 + 1)) / (m - 1);
        t.coeffs["zeroth"] = m * (s1 + 2) * (m * N - N + 2 + m * s1) / ((m - 1) * (m - 1));
    } else {
        throw KindMismatch("euler transform needs sigma1=-2, or m>1 with L(sigma1,sigma2)=0");
    }
    M.target = t;
    return M;
}

inline CoordinateMap fisher_transform(const EquationDescriptor& d) {
    if (d.m != 1 || d.sigma1 != -2 || !(d.p > 1))
        throw KindMismatch("fisher transform needs m=1, sigma1=-2, p>1");
    CoordinateMap M;
    M.kind = "fisher";
    M.source = d;
    M.log_radial = true;
    M.theta = 1, M.C = 1, M.a = 1;
    double q = (d.sigma2 + 2) / (d.p - 1);
    M.delta = -q;
    M.shift_K = d.N - 2 - 2 * q;
    EquationDescriptor t = make_descriptor(1, d.p, 1.0, 0.0, 0.0);
    t.family = Family::FisherForm;
    t.coeffs["lambda"] = q * (d.N - 2 - q);
    M.target = t;
    return M;
}

inline CoordinateMap make_transform(const std::string& kind, const EquationDescriptor& d) {
    if (kind == "main") return main_transform(d);
    if (kind == "second") return second_transform(d);
    if (kind == "euler") return euler_transform(d);
    if (kind == "fisher") return fisher_transform(d);
    throw InvalidParameter("unknown transform kind '" + kind + "'");
}

// w(z,tau) = r^-delta u(r,t)
inline RadialFn push_forward(const CoordinateMap& M, RadialFn u) {
    return [M, u = std::move(u)](double z, double tau) {
        double r = M.r_of(z, tau);
        if (r < 0 || (r == 0 && (M.delta != 0 || M.log_radial))) throw DomainError("query maps to r<=0");
        return u(r, M.t_of(tau)) / M.amplitude(r);
    };
}

// u(r,t) = r^delta w(z(r,t), C t)
inline RadialFn pull_back(const CoordinateMap& M, RadialFn w) {
    return [M, w = std::move(w)](double r, double t) {
        if (r < 0 || (r == 0 && (M.delta != 0 || M.log_radial))) throw DomainError("pull-back needs r>0");
        return M.amplitude(r) * w(M.z_of(r, t), M.tau_of(t));
    };
}

struct Sample3 {
    double x, t, v;
};

// exact pointwise map of sampled triples (r,t,u) -> (z,tau,w)
inline std::vector<Sample3> push_forward_samples(const CoordinateMap& M, const std::vector<Sample3>& in) {
    std::vector<Sample3> out;
    out.reserve(in.size());
    for (auto& s : in) {
        if (s.x < 0 || (s.x == 0 && (M.delta != 0 || M.log_radial))) throw DomainError("sample with r<=0");
        out.push_back({M.z_of(s.x, s.t), M.tau_of(s.t), s.v / M.amplitude(s.x)});
    }
    return out;
}

inline std::vector<Sample3> pull_back_samples(const CoordinateMap& M, const std::vector<Sample3>& in) {
    std::vector<Sample3> out;
    out.reserve(in.size());
    for (auto& s : in) {
        double r = M.r_of(s.x, s.t);
        out.push_back({r, M.t_of(s.t), s.v * M.amplitude(r)});
    }
    return out;
}

// a target profile sampled on a z-grid at fixed tau, pulled back to a function of r (monotone cubic)
inline std::function<double(double)> pull_back_grid(const CoordinateMap& M, std::vector<double> z,
                                                    std::vector<double> w, double tau) {
    num::Pchip P(std::move(z), std::move(w));
    double t = M.t_of(tau);
    return [M, P, t](double r) { return M.amplitude(r) * P(M.z_of(r, t)); };
}

}  // namespace rdx
