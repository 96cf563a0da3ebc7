#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdx/error.hpp"

namespace rdx {

enum class Family { TwoWeight, SingleWeight, Homogeneous, EulerForm, FisherForm, ConvectionForm };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::TwoWeight: return "TwoWeight";
        case Family::SingleWeight: return "SingleWeight";
        case Family::Homogeneous: return "Homogeneous";
        case Family::EulerForm: return "EulerForm";
        case Family::FisherForm: return "FisherForm";
        case Family::ConvectionForm: return "ConvectionForm";
    }
    return "?";
}

inline Family family_from_string(const std::string& s) {
    for (Family f : {Family::TwoWeight, Family::SingleWeight, Family::Homogeneous, Family::EulerForm,
                     Family::FisherForm, Family::ConvectionForm})
        if (s == to_string(f)) return f;
    throw InvalidParameter("unknown family '" + s + "'");
}

// r^s1 u_t = (u^m)_rr + (N-1)/r (u^m)_r + r^s2 u^p and its transformed relatives.
// Transformed families read extra terms from coeffs:
//   diffusion, reaction        multipliers of the diffusion and reaction terms (default 1)
//   convection                 b in  + b (w^m)_y            (Euler/Convection, log variable y)
//   zeroth                     c in  + c w^m                (Euler)
//   reaction_exp               k in  + e^{k y} w^p          (Euler with sigma1=-2)
//   lambda                     psi_t = psi_yy - lambda psi + psi^p   (Fisher)
struct EquationDescriptor {
    Family family = Family::TwoWeight;
    double m = 1, p = 1, N = 1, sigma1 = 0, sigma2 = 0;
    std::map<std::string, double> coeffs;
    std::vector<std::string> warnings;

    double coeff(const std::string& k, double dflt) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? dflt : it->second;
    }
    bool radial() const {
        return family == Family::TwoWeight || family == Family::SingleWeight ||
               family == Family::Homogeneous;
    }
};

inline Family weight_family(double s1, double s2) {
    if (s1 == 0 && s2 == 0) return Family::Homogeneous;
    if (s1 == 0) return Family::SingleWeight;
    return Family::TwoWeight;
}

inline EquationDescriptor make_descriptor(double m, double p, double N, double s1, double s2) {
    EquationDescriptor d;
    d.m = m, d.p = p, d.N = N, d.sigma1 = s1, d.sigma2 = s2;
    d.family = weight_family(s1, s2);
    return d;
}

enum class FormKind { Forward, Backward, Exponential, SeparateVariable, Stationary };

inline const char* to_string(FormKind k) {
    switch (k) {
        case FormKind::Forward: return "Forward";
        case FormKind::Backward: return "Backward";
        case FormKind::Exponential: return "Exponential";
        case FormKind::SeparateVariable: return "SeparateVariable";
        case FormKind::Stationary: return "Stationary";
    }
    return "?";
}

inline FormKind form_from_string(std::string s) {
    for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (s == "forward") return FormKind::Forward;
    if (s == "backward") return FormKind::Backward;
    if (s == "exponential") return FormKind::Exponential;
    if (s == "separatevariable" || s == "separate-variable" || s == "separate") return FormKind::SeparateVariable;
    if (s == "stationary") return FormKind::Stationary;
    throw InvalidParameter("unknown self-similar form '" + s + "'");
}

// forward    t^a f(r t^-b)
// backward   (T-t)^-a f(r (T-t)^b)
// exponential e^{a t} f(r e^{-b t})
// separate   (T-t)^{-1/(m-1)} F(r)
struct SelfSimilarForm {
    FormKind kind = FormKind::Forward;
    double alpha = 0, beta = 0;
    std::optional<double> T;

    // time amplitude and similarity variable
    double amplitude(double t) const {
        switch (kind) {
            case FormKind::Forward: return std::pow(t, alpha);
            case FormKind::Backward:
            case FormKind::SeparateVariable: return std::pow(T.value_or(1.0) - t, -alpha);
            case FormKind::Exponential: return std::exp(alpha * t);
            case FormKind::Stationary: return 1.0;
        }
        return 1.0;
    }
    double xi(double r, double t) const {
        switch (kind) {
            case FormKind::Forward: return r * std::pow(t, -beta);
            case FormKind::Backward: return r * std::pow(T.value_or(1.0) - t, beta);
            case FormKind::SeparateVariable: return r;
            case FormKind::Exponential: return r * std::exp(-beta * t);
            case FormKind::Stationary: return r;
        }
        return r;
    }
    bool time_ok(double t) const {
        switch (kind) {
            case FormKind::Forward: return t > 0;
            case FormKind::Backward:
            case FormKind::SeparateVariable: return t < T.value_or(1.0);
            default: return true;
        }
    }
};

}  // namespace rdx
