#include <boost/math/tools/roots.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "reference.hpp"
#include "rdx/pde.hpp"
#include "rdx/profiles.hpp"
#include "rdx/solutions.hpp"
#include "rdx/transforms.hpp"

using namespace rdx;
using namespace rdx_test;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream why;
    void expect(bool c, const std::string& what) {
        if (!c && ok) why << what;
        ok = ok && c;
    }
};

double bracket_root(const std::function<double(double)>& g, double a, double b) {
    boost::math::tools::eps_tolerance<double> tol(50);
    auto [lo, hi] = boost::math::tools::bisect(g, a, b, tol);
    return 0.5 * (lo + hi);
}

std::vector<CoordinateMap> transform_cases() {
    return {main_transform(make_descriptor(2, 3, 3, 1, 2)),
            main_transform(make_descriptor(1.5, 2, 2.5, 0.5, -0.5)),
            main_transform(make_descriptor(2, 3, 3, 1, -2)),
            second_transform(make_descriptor(2, 2, 3, 1, 0.5)),
            euler_transform(make_descriptor(2, 3, 3, -2, 0)),
            euler_transform(make_descriptor(2, 1.5, 3, 0, -1)),
            fisher_transform(make_descriptor(1, 3, 5, -2, 0))};
}

void c1(Check& c) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        auto t = exponent_table(d);
        std::ostringstream at;
        at << "descriptor " << i << ": ";
        auto near = [&](const char* name, double ref) {
            c.expect(rel(t.get(name), ref) < 1e-12, at.str() + name);
        };
        near("p_F", ref::pF(d.m, d.N, d.sigma1, d.sigma2));
        if (d.p > d.m) near("mu", ref::mu(d.m, d.p, d.sigma2));
        near("L_sigma", ref::Ls(d.m, d.p, d.sigma1, d.sigma2));
        near("L", ref::L(d.m, d.p, d.sigma1, d.sigma2));
        if (d.m > 1) near("sigma2c", ref::s2c(d.m, d.N, d.sigma1));
        if (d.N > 2) {
            near("p_c", ref::pc(d.m, d.N, d.sigma2));
            near("p_s", ref::ps(d.m, d.N, d.sigma2));
        }
        if (d.N > 10 + 4 * d.sigma2) {
            near("p_JL", ref::pjl(d.m, d.N, d.sigma2));
            near("p_L", ref::pl(d.m, d.N, d.sigma2));
            c.expect(rel(heat_p_jl(d.N, d.sigma2), ref::heat_pjl(d.N, d.sigma2)) < 1e-12, at.str() + "heat p_JL");
        }
        near("q_min", ref::qmin(d.N, d.p, d.sigma1, d.sigma2));
        if (d.N >= 3) near("K_star", ref::kstar(d.N));
    }
    for (double m : {1.0, 2.0, 3.5})
        for (double N : {1.0, 2.0, 3.0, 7.0})
            c.expect(std::abs(*fujita_pair(make_descriptor(m, 2, N, 0, 0)).p_F - (m + 2 / N)) < 1e-14, "p_F=m+2/N");
    c.expect(std::abs(p_l_equal(1, 11, 0) - 7) < 1e-12, "p_L(1,11)=7");
    c.expect(std::abs(p_jl_equal(1, 11, 0) - (1 + 4 / (11 - 4 - 2 * std::sqrt(10.0)))) < 1e-3, "p_JL(1,11)");
}

void c2(Check& c) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        auto M = main_transform(d);
        double via = d.m + (M.target.sigma2 + 2) / M.target.N;
        c.expect(rel(via, ref::pF(d.m, d.N, d.sigma1, d.sigma2)) < 1e-12, "p_F through main_transform");
        c.expect(std::abs(M.balance_defect()) < 1e-12, "balance (main)");
        try {
            c.expect(std::abs(second_transform(d).balance_defect()) < 1e-12, "balance (second)");
        } catch (const OutOfRange&) {
        }
        auto e = d;
        e.sigma1 = -2;
        c.expect(std::abs(euler_transform(e).balance_defect()) < 1e-12, "balance (euler)");
        if (e.p > 1) {
            e.m = 1;
            c.expect(std::abs(fisher_transform(e).balance_defect()) < 1e-12, "balance (fisher)");
        }

        if (d.m <= 1) continue;
        auto z = d;
        z.sigma2 = (d.sigma1 * (d.m - d.p) - 2 * (d.p - 1)) / (d.m - 1);
        auto Z = main_transform(z);
        double scale = 1 + std::abs(z.sigma1) + std::abs(z.sigma2);
        c.expect(std::abs(Z.target.sigma2 * (d.m - 1) + 2 * (d.p - 1)) < 1e-12 * scale, "L=0 preserved");
        double Lt = M.target.sigma2 * (d.m - 1) + 2 * (d.p - 1);
        double Ls = ref::L(d.m, d.p, d.sigma1, d.sigma2);
        c.expect(std::abs(Ls) < 1e-9 || std::abs(Lt) > 1e-12, "L!=0 preserved");
    }
}

void c3(Check& c) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.05, 5.0), ut(0.0, 2.0);
    RadialFn u = [](double r, double t) { return (1 + r * r) * std::exp(-t) + std::sin(r); };
    for (auto& M : transform_cases()) {
        auto back = pull_back(M, push_forward(M, u));
        for (int i = 0; i < 10000; ++i) {
            double r = ur(rng), t = ut(rng);
            c.expect(std::abs(back(r, t) - u(r, t)) <= 1e-12 * std::abs(u(r, t)), M.kind + " round trip");
        }
    }
}

void c4(Check& c) {
    auto d = make_descriptor(1, 3, 4, 0, 0);
    auto s = stationary_singular(d);
    std::vector<PointRT> pts;
    for (double r : num::linspace(0.5, 5, 91)) pts.push_back({r, 0.5});
    ResidualOptions o;
    double R = residual(d, s.evaluate, pts, o).max;
    c.expect(R < 1e-6, "stationary residual");

    auto e = explicit_backward_p1(2, 0);
    const double t = 0.5, r0 = e.interface_radius(t);
    std::vector<PointRT> q;
    for (double r : num::linspace(0.2 * r0, 0.8 * r0, 13)) q.push_back({r, t});
    ResidualOptions h;
    h.h_r = 0.04 * r0, h.h_t = 0.004;
    double ratio = residual_order(e.descriptor, e.evaluate, q, h).ratio;
    c.expect(std::abs(ratio - 16) <= 3.2, "explicit p=1 order ratio");
    c.why << "stationary max " << R << ", halving ratio " << ratio;
}

void c5(Check& c) {
    auto E = explicit_profile_1d(2);
    auto S = shoot(E.descriptor, E.form, Behavior::CPower1, ShootTarget::CompactSupport);
    const double B = explicit_B(2), sg = std::sqrt(6.0);
    double root = bracket_root([&](double x) { return 1.0 / 12 - B * std::pow(x, sg); }, 0.5, 5);
    c.expect(S.xi0.has_value(), "no interface");
    if (!S.xi0) return;
    double err = 0;
    for (double x : num::linspace(0, 0.9 * root, 2000)) err = std::max(err, std::abs(S(x) - E(x)));
    c.expect(err < 1e-4, "profile error");
    c.expect(std::abs(*S.xi0 - root) < 1e-6, "interface position");
    c.expect(std::abs(root - 2.058) < 1e-3, "root near 2.058");
    c.why << "xi0 " << *S.xi0 << " (root " << root << "), max error " << err;
}

void c6(Check& c) {
    auto yes = make_descriptor(2, 2, 3, 0, 0.3), no = make_descriptor(2, 2, 3, 0, 1.2);
    c.expect(std::abs(pm_thresholds(yes).sigma2c - 4.0 / 7.0) < 1e-15, "sigma2c");
    c.expect(std::abs(pm_thresholds(yes).nonexist_bound - 1.0) < 1e-15, "bound");
    ShootOptions o;
    o.lo = 1e-6, o.hi = 1e6, o.scan_points = 60;
    auto P = shoot(yes, self_similar_exponents(yes, FormKind::SeparateVariable), Behavior::PosOrigin,
                   ShootTarget::CompactSupport, o);
    c.expect(P.xi0.has_value(), "sigma2=0.3 has no compact profile");
    bool refused = false;
    try {
        shoot(no, self_similar_exponents(no, FormKind::SeparateVariable), Behavior::PosOrigin,
              ShootTarget::CompactSupport, o);
    } catch (const NoBracketing&) {
        refused = true;
    }
    c.expect(refused, "sigma2=1.2 did not give NoBracketing");
    if (P.xi0 && refused) c.why << "sigma2=0.3 interface at " << *P.xi0 << "; sigma2=1.2 NoBracketing";
}

void c7(Check& c) {
    GridConfig g;
    g.r_max = 20, g.nr = 201, g.t_end = 50;
    g.outer_bc = OuterBC::Dirichlet;
    g.outer_value = [](double) { return 0.0; };
    auto bump = [](double r) { return 2 * std::exp(-r * r / 4); };
    auto A = integrate(make_descriptor(2, 2.2, 3, 0, 0), bump, g);
    c.expect(A.solution.status == RunStatus::BlowUp, "p=2.2 did not blow up");
    auto B = integrate(make_descriptor(2, 3, 3, 0, 0), [&](double r) { return 1e-3 * bump(r); }, g);
    c.expect(B.solution.status == RunStatus::Completed, "p=3 small data did not complete");
    double prev = kInf;
    for (auto& h : B.solution.history) {
        if (h.t < 0.5 * g.t_end) continue;
        c.expect(h.sup <= prev, "sup increased over the last half");
        prev = h.sup;
    }
    c.why << "p=2.2 BlowUp at t=" << A.solution.t_detect << "; p=3 final sup " << B.solution.history.back().sup;
}

void c8(Check& c) {
    for (auto d : {make_descriptor(2, 1.5, 3, 0, -1), make_descriptor(3, 2, 2, 1, -0.5), make_descriptor(1.5, 1, 4, 0.5, 0.5)}) {
        auto f = self_similar_exponents(d, FormKind::Exponential);
        c.expect(f.alpha / f.beta == (d.sigma1 + 2) / (d.m - 1), "alpha/beta");
        auto off = d;
        off.sigma2 += 0.25;
        bool threw = false;
        try {
            self_similar_exponents(off, FormKind::Exponential);
        } catch (const KindMismatch&) {
            threw = true;
        }
        c.expect(threw, "L!=0 accepted");
    }
    ClosedFormSolution u;
    u.descriptor = make_descriptor(2, 1.5, 3, 0, -1);
    u.evaluate = [](double r, double t) { return (1 + r) * std::exp(-t) + r * r; };
    auto ab = rescale(rescale(u, 0.7), 1.9), one = rescale(u, 1.0), prod = rescale(u, 0.7 * 1.9);
    for (double r : {0.0, 0.3, 2.2})
        for (double t : {0.1, 0.8}) {
            c.expect(std::abs(ab(r, t) - prod(r, t)) <= 1e-12 * std::abs(prod(r, t)), "group law");
            c.expect(one(r, t) == u(r, t), "identity");
        }
}

double local_exponent(const EquationDescriptor& d, const SelfSimilarForm& form, Behavior cls, double param, double x0) {
    ShootOptions o;
    o.eps = 0.1 * x0;
    o.sample_dx = 1e-3;
    o.xi_max = 1;
    auto T = shoot_once(d, form, cls, param, o, true);
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < T.xi.size(); ++i) {
        double x = T.xi[i];
        if (x < x0 || x > 10 * x0) continue;
        lx.push_back(std::log(x));
        ly.push_back(cls == Behavior::LogSingular ? std::pow(T.f[i], d.m - d.p) : std::log(T.f[i]));
    }
    double s = num::fit_line(lx, ly).slope;
    return cls == Behavior::LogSingular ? -s : s;
}

void c9(Check& c) {
    auto E = explicit_profile_1d(2);
    auto d2 = make_descriptor(3, 2, 3, 0, -0.5), d3 = make_descriptor(2, 1, 3, 0, -2);
    struct Row {
        const char* name;
        double got, want;
    };
    Row rows[] = {
        {"CPower1", local_exponent(E.descriptor, E.form, Behavior::CPower1, kNaN, 1e-3),
         (E.descriptor.sigma1 + 2) / (E.descriptor.m - 1)},
        {"CPower2", local_exponent(d2, self_similar_exponents(d2, FormKind::Backward), Behavior::CPower2, 1.0, 1e-5),
         (d2.sigma2 + 2) / (d2.m - d2.p)},
        {"LogSingular",
         local_exponent(d3, self_similar_exponents(d3, FormKind::Forward), Behavior::LogSingular, 1.0, 1e-30),
         (d3.m - d3.p) * std::pow(d3.sigma1 + 2, 2) / (4 * d3.m * (d3.N - 2))},
    };
    for (auto& r : rows) {
        c.expect(std::abs(r.got / r.want - 1) < 0.02, r.name);
        c.why << r.name << " " << r.got << "/" << r.want << "  ";
    }
}

void c10(Check& c) {
    auto src = make_descriptor(2, 2, 3, 2, 2);
    auto M = main_transform(src);
    auto u0 = [](double r) { return 1 + 0.5 * std::exp(-r * r); };
    GridConfig a;
    a.r_max = 2, a.nr = 512, a.t_end = 0.1;
    a.grading = Grading::Power, a.grading_param = M.theta;
    GridConfig b = a;
    b.grading = Grading::Uniform, b.grading_param = 1;
    b.r_max = M.z_of(a.r_max, 0), b.t_end = M.tau_of(a.t_end);
    auto U = integrate(src, u0, a);
    auto W = integrate(M.target, [&](double z) { return u0(M.r_of(z, 0)); }, b);
    double worst = 0;
    for (std::size_t k = 0; k < U.solution.u.size() && k < W.solution.u.size(); ++k) {
        const auto& uu = U.solution.u[k];
        const auto& ww = W.solution.u[k];
        for (std::size_t i = 0; i < uu.size(); ++i) {
            double v = M.amplitude(U.solution.r[i]) * ww[i];
            worst = std::max(worst, std::abs(uu[i] - v) / v);
        }
    }
    c.expect(U.solution.u.size() == W.solution.u.size(), "snapshot count");
    c.expect(worst < 5e-3, "discrepancy");
    c.why << "max relative discrepancy " << worst;
}

}  // namespace

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    struct Item {
        int id;
        const char* name;
        void (*fn)(Check&);
    };
    const Item items[] = {
        {1, "exponent formula suite", c1},         {2, "transform consistency", c2},
        {3, "round-trip fidelity", c3},            {4, "closed-form residuals", c4},
        {5, "shooting vs closed form", c5},        {6, "separate-variable dichotomy", c6},
        {7, "Fujita-regime blow-up", c7},          {8, "exponential-form constraint", c8},
        {9, "local exponent recovery", c9},        {10, "discrete transform equivalence", c10},
    };
    int failed = 0;
    for (auto& it : items) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            it.fn(c);
        } catch (const std::exception& e) {
            c.ok = false;
            c.why << "exception: " << e.what();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d  %s  %-32s %8.2f s  %s\n", it.id, c.ok ? "PASS" : "FAIL", it.name, s,
                    c.why.str().c_str());
        failed += !c.ok;
    }
    std::printf("%d of 10 criteria passed\n", 10 - failed);
    return failed ? 1 : 0;
}
