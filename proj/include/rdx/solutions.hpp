#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdx/eqmodel.hpp"
#include "rdx/profile_types.hpp"
#include "rdx/transforms.hpp"

namespace rdx {

struct ClosedFormSolution {
    std::string name;
    EquationDescriptor descriptor;
    SelfSimilarForm form;
    std::function<double(double, double)> evaluate;
    std::optional<double> xi0;                       // support endpoint in the similarity variable
    std::function<double(double)> interface_radius;  // r0(t) when an interface exists
    bool singular_at_origin = false;
    std::map<std::string, double> constants;
    std::vector<std::string> notes;

    double operator()(double r, double t) const { return evaluate(r, t); }
    bool has_interface() const { return static_cast<bool>(interface_radius); }
};

// K |x|^{-(sigma2+2)/(p-m)} for sigma1=sigma2, N>2, p>p_c
inline ClosedFormSolution stationary_singular(const EquationDescriptor& d) {
    if (d.sigma1 != d.sigma2) throw KindMismatch("stationary singular solution needs sigma1=sigma2");
    if (!(d.N > 2)) throw OutOfRange("stationary singular solution needs N>2");
    if (!(d.p > d.m)) throw OutOfRange("stationary singular solution needs p>m");
    double pc = p_c_equal(d.m, d.N, d.sigma2);
    double rad = d.m * (d.N - 2) * (d.sigma2 + 2) * (d.p - pc) / ((d.p - d.m) * (d.p - d.m));
    if (!(rad > 0)) throw OutOfRange("radicand " + fmt_num(rad) + " <= 0 (p<=p_c)");
    double K = std::pow(rad, 1.0 / (d.p - d.m));
    double pw = -(d.sigma2 + 2) / (d.p - d.m);
    ClosedFormSolution s;
    s.name = "stationary";
    s.descriptor = d;
    s.form = self_similar_exponents(d, FormKind::Stationary);
    s.evaluate = [K, pw](double r, double) { return r == 0 ? kInf : K * std::pow(r, pw); };
    s.singular_at_origin = true;
    s.constants = {{"K", K}, {"power", pw}, {"p_c", pc}};
    return s;
}

inline double explicit_B(double m) {
    double sg = std::sqrt(2 * (m + 1));
    return (m - 1) * (m - 1) / (m * (sg + 2) * (m * sg + m + 1));
}

// f(xi) = xi^{2/(m-1)} [(m-1)/(2m(m+1)) - B xi^sigma]_+^{1/(m-1)}, sigma = sqrt(2(m+1)), N=1, p=1
inline Profile explicit_profile_1d(double m, std::size_t n = 4001) {
    if (!(m > 1)) throw InvalidParameter("explicit profile needs m>1");
    const double sg = std::sqrt(2 * (m + 1)), B = explicit_B(m), c = (m - 1) / (2 * m * (m + 1));
    const double x0 = std::pow(c / B, 1.0 / sg), k = 2 / (m - 1), e = 1 / (m - 1);
    Profile P;
    P.descriptor = make_descriptor(m, 1.0, 1.0, 0.0, sg);
    P.form = self_similar_exponents(P.descriptor, FormKind::Backward);
    P.behavior_class = Behavior::CPower1;
    P.shoot_param = std::pow(c, e);
    P.xi0 = x0;
    P.xi = num::linspace(0.0, x0, n);
    for (double x : P.xi) {
        double g = std::max(c - B * std::pow(x, sg), 0.0);
        double fx = std::pow(x, k) * std::pow(g, e);
        double dg = -B * sg * std::pow(x, sg - 1);
        double fp;
        if (g > 0)
            fp = (x > 0 ? k * std::pow(x, k - 1) * std::pow(g, e) : 0.0) + std::pow(x, k) * e * std::pow(g, e - 1) * dg;
        else
            fp = m < 2 ? 0.0 : (m == 2 ? std::pow(x, k) * dg : -kInf);
        P.f.push_back(fx);
        P.fprime.push_back(fp);
    }
    P.f.back() = 0.0;
    P.build();
    return P;
}

// second transform pulled back onto the two-weight equation, p=1:
//   N = 2 + m(s1+2)/(m+1),  s2 = s1 + m sqrt(2(m+1)) (s1+2)/(m+1),  theta = m(s1+2)/(m+1)
//   u = theta^{-2/(m-1)} (T-t)^{-1/(m-1)} r^{(s1+2)/(m-1)} [c - B (T-t) r^{s2-s1}]_+^{1/(m-1)}
inline ClosedFormSolution explicit_backward_p1(double m, double s1, double T = 1.0) {
    if (!(m > 1)) throw InvalidParameter("explicit solution needs m>1");
    if (!(s1 > -2)) throw OutOfRange("explicit solution needs sigma1>-2");
    if (!(T > 0)) throw InvalidParameter("explicit solution needs T>0");
    const double sg = std::sqrt(2 * (m + 1));
    const double N = 2 + m * (s1 + 2) / (m + 1);
    const double s2 = s1 + m * sg * (s1 + 2) / (m + 1);
    const double th = m * (s1 + 2) / (m + 1);
    const double B = explicit_B(m), c = (m - 1) / (2 * m * (m + 1));
    const double A = std::pow(th, -2 / (m - 1));
    const double k = (s1 + 2) / (m - 1), e = 1 / (m - 1), q = s2 - s1;

    ClosedFormSolution s;
    s.name = "explicit-p1";
    s.descriptor = make_descriptor(m, 1.0, N, s1, s2);
    s.form = self_similar_exponents(s.descriptor, FormKind::Backward, T);
    s.xi0 = std::pow(c / B, 1.0 / q);
    s.evaluate = [=](double r, double t) {
        if (!(t < T)) throw DomainError("explicit solution defined for t<T");
        if (r < 0) throw DomainError("negative radius");
        double g = c - B * (T - t) * std::pow(r, q);
        if (g <= 0) return 0.0;
        return A * std::pow(T - t, -e) * std::pow(r, k) * std::pow(g, e);
    };
    s.interface_radius = [=](double t) { return std::pow(c / (B * (T - t)), 1.0 / q); };
    s.constants = {{"B", B}, {"N", N}, {"sigma2", s2}, {"theta", th}, {"amplitude", A},
                   {"T", T},  {"time_power", e}, {"origin_power", k}};
    return s;
}

// u from the self-similar ansatz and a sampled profile
inline ClosedFormSolution ansatz_solution(const SelfSimilarForm& form, const Profile& P) {
    ClosedFormSolution s;
    s.name = "ansatz";
    s.descriptor = P.descriptor;
    s.form = form;
    s.xi0 = P.xi0;
    s.singular_at_origin = P.behavior_class == Behavior::LogSingular || P.behavior_class == Behavior::StatTail;
    s.evaluate = [form, P](double r, double t) {
        if (!form.time_ok(t)) throw DomainError("time outside the self-similar range");
        double x = form.xi(r, t);
        if (P.xi0 && x >= *P.xi0) return 0.0;
        if (x < P.xi.front() || x > P.xi.back())
            throw ExtrapolationError("similarity variable " + fmt_num(x) + " outside sampled profile");
        return form.amplitude(t) * P(x);
    };
    if (P.xi0) {
        double x0 = *P.xi0;
        s.interface_radius = [form, x0](double t) { return x0 / form.xi(1.0, t); };
    }
    s.constants = {{"alpha", form.alpha}, {"beta", form.beta}, {"shoot_param", P.shoot_param}};
    return s;
}

// u_l(x,t) = l u(l^{-(m-1)/(sigma1+2)} x, t), only for L(sigma1,sigma2)=0
inline ClosedFormSolution rescale(const ClosedFormSolution& u, double lambda) {
    const auto& d = u.descriptor;
    if (!l_is_zero(l_sigma(d.m, d.p, d.sigma1, d.sigma2), d.sigma1, d.sigma2))
        throw KindMismatch("rescaling needs L(sigma1,sigma2)=0");
    if (!(lambda > 0)) throw InvalidParameter("rescaling needs lambda>0");
    if (!(d.sigma1 > -2)) throw OutOfRange("rescaling needs sigma1>-2");
    const double s = std::pow(lambda, -(d.m - 1) / (d.sigma1 + 2));
    ClosedFormSolution v = u;
    auto ev = u.evaluate;
    v.evaluate = [ev, lambda, s](double r, double t) { return lambda * ev(s * r, t); };
    if (u.interface_radius) {
        auto ir = u.interface_radius;
        v.interface_radius = [ir, s](double t) { return ir(t) / s; };
    }
    v.constants["rescale_lambda"] = (u.constants.count("rescale_lambda") ? u.constants.at("rescale_lambda") : 1.0) * lambda;
    return v;
}

// u = |x|^{-(sigma2+2)/(p-1)} f(ln|x| + (K+c) t) from a wave of the reversed Fisher equation
inline ClosedFormSolution traveling_wave_composed(const EquationDescriptor& d, const TravelingWave& tw) {
    if (d.m != 1 || d.sigma1 != -2) throw KindMismatch("wave composition needs m=1, sigma1=-2");
    if (!(d.sigma2 >= -2) || !(d.p > 1)) throw KindMismatch("wave composition needs sigma2>=-2, p>1");
    const double q = (d.sigma2 + 2) / (d.p - 1);
    if (!(d.N > 2 + q)) throw KindMismatch("wave composition needs N>2+(sigma2+2)/(p-1)");
    const double K = d.N - 2 - 2 * q;
    const double lam = q * (d.N - 2 - q);
    if (std::abs(lam - tw.lambda) > 1e-9 * std::max(1.0, lam) || std::abs(tw.p - d.p) > 1e-12)
        throw KindMismatch("wave (lambda, p) does not match the descriptor: lambda=" + fmt_num(lam));
    if (!(tw.c > 0)) throw KindMismatch("wave speed must be positive");
    ClosedFormSolution s;
    s.name = "tw-composed";
    s.descriptor = d;
    s.form.kind = FormKind::Exponential;
    s.form.beta = -(K + tw.c);
    s.form.alpha = q * (K + tw.c);
    const double sp = K + tw.c;
    s.evaluate = [tw, q, sp](double r, double t) {
        if (!(r > 0)) throw DomainError("wave composition needs r>0");
        return std::pow(r, -q) * tw(std::log(r) + sp * t);
    };
    s.singular_at_origin = d.sigma2 > -2;
    s.constants = {{"K", K}, {"c", tw.c}, {"lambda", lam}, {"power", -q}};
    if (d.sigma2 == -2) s.notes.push_back("sigma2=-2: exponential self-similar solution");
    else s.notes.push_back("integrable singularity at the origin");
    return s;
}

inline ClosedFormSolution wave_as_fisher_solution(const TravelingWave& tw) {
    ClosedFormSolution s;
    s.name = "tw";
    s.descriptor = make_descriptor(1, tw.p, 1, 0, 0);
    s.descriptor.family = Family::FisherForm;
    s.descriptor.coeffs["lambda"] = tw.lambda;
    const double c = tw.c;
    s.evaluate = [tw, c](double y, double t) { return tw(y + c * t); };
    return s;
}

}  // namespace rdx
