#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rdx/descriptor.hpp"
#include "rdx/numerics.hpp"

namespace rdx {

// origin behaviors (Decay is a tail class, used only as a shooting target)
enum class Behavior { Q1, PosOrigin, Q1var, CPower1, CPower2, ExpQ1, LogSingular, Decay, StatTail };

inline const char* to_string(Behavior b) {
    switch (b) {
        case Behavior::Q1: return "Q1";
        case Behavior::PosOrigin: return "PosOrigin";
        case Behavior::Q1var: return "Q1var";
        case Behavior::CPower1: return "CPower1";
        case Behavior::CPower2: return "CPower2";
        case Behavior::ExpQ1: return "ExpQ1";
        case Behavior::LogSingular: return "LogSingular";
        case Behavior::Decay: return "Decay";
        case Behavior::StatTail: return "StatTail";
    }
    return "?";
}

inline Behavior behavior_from_string(std::string s) {
    for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    for (Behavior b : {Behavior::Q1, Behavior::PosOrigin, Behavior::Q1var, Behavior::CPower1, Behavior::CPower2,
                       Behavior::ExpQ1, Behavior::LogSingular, Behavior::Decay, Behavior::StatTail}) {
        std::string n = to_string(b);
        for (auto& c : n) c = char(std::tolower(static_cast<unsigned char>(c)));
        if (n == s) return b;
    }
    if (s == "pos-origin") return Behavior::PosOrigin;
    if (s == "log") return Behavior::LogSingular;
    throw InvalidParameter("unknown behavior class '" + s + "'");
}

// sampled self-similar profile; f is zero beyond xi0 when an interface is present
struct Profile {
    EquationDescriptor descriptor;
    SelfSimilarForm form;
    Behavior behavior_class = Behavior::Q1;
    double shoot_param = kNaN;
    std::optional<double> xi0;
    std::vector<double> xi, f, fprime;
    int iterations = 0;
    double interface_flux = 0;
    std::optional<double> tail_exponent;

    void build() { interp_ = num::Pchip(xi, f); }

    double operator()(double x) const {
        if (xi0 && x >= *xi0) return 0.0;
        if (xi.empty()) throw ExtrapolationError("empty profile");
        if (x > xi.back() && xi0 && x < *xi0) return 0.0;
        return interp_(x);
    }
    bool covers(double x) const { return !xi.empty() && (x >= xi.front()) && (xi0 || x <= xi.back()); }

private:
    num::Pchip interp_;
};

// traveling wave c f' = f'' - lambda f + f^p, f -> lambda^{1/(p-1)} as y -> -inf, f -> 0 as y -> +inf
struct TravelingWave {
    double lambda = 0, p = 2, c = 0;
    double f_star = 0, decay_rate = 0;  // f ~ f(y_R) e^{decay_rate (y - y_R)} beyond the right end
    bool monotone = false;
    std::vector<double> y, f, fprime;

    void build() {
        std::vector<double> f2(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            f2[i] = c * fprime[i] + lambda * f[i] - std::pow(std::max(f[i], 0.0), p);
        interp_ = num::Quintic(y, f, fprime, f2);
    }

    double operator()(double s) const {
        if (s <= y.front()) return f.front();
        if (s >= y.back()) return f.back() * std::exp(decay_rate * (s - y.back()));
        return interp_(s);
    }

private:
    num::Quintic interp_;
};

}  // namespace rdx
