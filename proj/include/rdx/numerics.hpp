#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp uses unqualified isnan
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/interpolators/quintic_hermite.hpp>

#include "rdx/error.hpp"

namespace rdx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

namespace num {

inline bool close_rel(double a, double b, double tol) {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// monotone cubic on sampled data; falls back to linear below four nodes
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y) : x0_(x), y0_(y) {
        if (x.size() != y.size() || x.size() < 2)
            throw DomainError("interpolation needs at least two matching samples");
        for (std::size_t i = 1; i < x.size(); ++i)
            if (!(x[i] > x[i - 1])) throw DomainError("interpolation abscissae must increase");
        if (x.size() >= 4) {
            impl_ = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
                std::move(x), std::move(y));
        }
    }
    double lo() const { return x0_.front(); }
    double hi() const { return x0_.back(); }
    bool covers(double x) const { return x >= lo() && x <= hi(); }
    double operator()(double x) const {
        if (!covers(x)) throw ExtrapolationError("abscissa outside sampled range");
        if (impl_) return (*impl_)(x);
        auto it = std::upper_bound(x0_.begin(), x0_.end(), x);
        std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x0_.begin(), 1), x0_.size() - 1);
        double t = (x - x0_[i - 1]) / (x0_[i] - x0_[i - 1]);
        return (1 - t) * y0_[i - 1] + t * y0_[i];
    }

private:
    std::vector<double> x0_, y0_;
    std::shared_ptr<boost::math::interpolators::pchip<std::vector<double>>> impl_;
};

// cubic Hermite through (x, y, y')
class Hermite {
public:
    Hermite() = default;
    Hermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
        : lo_(x.front()), hi_(x.back()),
          impl_(std::make_shared<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
              std::move(x), std::move(y), std::move(dy))) {}
    bool covers(double x) const { return x >= lo_ && x <= hi_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double operator()(double x) const {
        if (!covers(x)) throw ExtrapolationError("abscissa outside sampled range");
        return (*impl_)(x);
    }
    double prime(double x) const {
        if (!covers(x)) throw ExtrapolationError("abscissa outside sampled range");
        return impl_->prime(x);
    }

private:
    double lo_ = 0, hi_ = 0;
    std::shared_ptr<boost::math::interpolators::cubic_hermite<std::vector<double>>> impl_;
};

// quintic Hermite through (x, y, y', y'')
class Quintic {
public:
    Quintic() = default;
    Quintic(std::vector<double> x, std::vector<double> y, std::vector<double> dy, std::vector<double> d2y)
        : lo_(x.front()), hi_(x.back()),
          impl_(std::make_shared<boost::math::interpolators::quintic_hermite<std::vector<double>>>(
              std::move(x), std::move(y), std::move(dy), std::move(d2y))) {}
    bool covers(double x) const { return x >= lo_ && x <= hi_; }
    double operator()(double x) const {
        if (!covers(x)) throw ExtrapolationError("abscissa outside sampled range");
        return (*impl_)(x);
    }
    double prime(double x) const { return impl_->prime(x); }

private:
    double lo_ = 0, hi_ = 0;
    std::shared_ptr<boost::math::interpolators::quintic_hermite<std::vector<double>>> impl_;
};

// Simpson on possibly uneven nodes (pairwise parabolic panels, trapezoid on a trailing odd panel)
inline double simpson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw DomainError("simpson: size mismatch");
    if (n < 2) return 0.0;
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) {
        double h0 = x[i + 1] - x[i], h1 = x[i + 2] - x[i + 1];
        double hs = h0 + h1;
        s += hs / 6.0 *
             ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
    }
    if (i + 1 < n) s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

struct LineFit {
    double slope = 0, intercept = 0, rms_residual = 0;
    std::size_t n = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InsufficientData("line fit needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw InsufficientData("line fit with degenerate abscissae");
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double r2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        r2 += e * e;
    }
    f.rms_residual = std::sqrt(r2 / n);
    return f;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? a : std::exp(la + (lb - la) * double(i) / double(n - 1));
    return v;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

// fourth-order difference stencils; dir=0 central, +1 forward, -1 backward
inline double d1(const std::function<double(double)>& f, double x, double h, int dir = 0) {
    if (dir == 0)
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    double s = dir > 0 ? h : -h;
    return (-25 * f(x) + 48 * f(x + s) - 36 * f(x + 2 * s) + 16 * f(x + 3 * s) - 3 * f(x + 4 * s)) /
           (12 * s);
}

inline double d2(const std::function<double(double)>& f, double x, double h, int dir = 0) {
    if (dir == 0)
        return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
               (12 * h * h);
    double s = dir > 0 ? h : -h;
    return (45 * f(x) - 154 * f(x + s) + 214 * f(x + 2 * s) - 156 * f(x + 3 * s) +
            61 * f(x + 4 * s) - 10 * f(x + 5 * s)) /
           (12 * s * s);
}

}  // namespace num
}  // namespace rdx
