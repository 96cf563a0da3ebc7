#include <gtest/gtest.h>

#include <random>

#include "rdx/pde.hpp"
#include "rdx/solutions.hpp"
#include "rdx/transforms.hpp"

using namespace rdx;

namespace {

struct Case {
    const char* kind;
    EquationDescriptor d;
};

std::vector<Case> cases() {
    return {
        {"main", make_descriptor(2, 3, 3, 1, 2)},
        {"main", make_descriptor(1.5, 2, 2.5, 0.5, -0.5)},
        {"main", make_descriptor(2, 3, 3, 1, -2)},  // sigma=-2
        {"second", make_descriptor(2, 2, 3, 1, 0.5)},
        {"euler", make_descriptor(2, 3, 3, -2, 0)},
        {"euler", make_descriptor(2, 1.5, 3, 0, -1)},  // L=0
        {"euler", make_descriptor(2, 3, 3, -2, -2)},
        {"fisher", make_descriptor(1, 3, 5, -2, 0)},
    };
}

double w1(double z, double tau) { return (1 + tau) / (1 + z * z) + 0.5; }
double w2(double z, double tau) { return std::exp(-z * z / 4) * (2 + std::sin(tau)) + 0.3; }

// source residual of the pull-back against the target residual, scaled by C r^(sigma1+delta)
double gap(const CoordinateMap& M, const RadialFn& w, double r, double t, double h) {
    ResidualOptions o;
    o.h_r = h, o.h_t = h;
    double Rs = residual_at(M.source, pull_back(M, w), r, t, o);
    double Rt = residual_at(M.target, w, M.z_of(r, t), M.tau_of(t), o);
    return Rs - M.C * std::pow(r, M.source.sigma1 + M.delta) * Rt;
}

}  // namespace

TEST(Transforms, BalanceConditionHolds) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> um(1.0, 4.0), up(1.0, 5.0), uN(1.0, 8.0), us(-1.9, 4.0);
    int n = 0;
    for (int i = 0; i < 300; ++i) {
        auto d = make_descriptor(um(rng), up(rng), uN(rng), us(rng), us(rng));
        EXPECT_NEAR(main_transform(d).balance_defect(), 0, 1e-12);
        try {
            EXPECT_NEAR(second_transform(d).balance_defect(), 0, 1e-12);
            ++n;
        } catch (const OutOfRange&) {
        }
        auto e = d;
        e.sigma1 = -2;
        EXPECT_NEAR(euler_transform(e).balance_defect(), 0, 1e-12);
        if (e.p > 1) {
            e.m = 1;
            EXPECT_NEAR(fisher_transform(e).balance_defect(), 0, 1e-12);
        }
    }
    EXPECT_GT(n, 100);
    for (auto& c : cases()) EXPECT_NEAR(make_transform(c.kind, c.d).balance_defect(), 0, 1e-12) << c.kind;
}

TEST(Transforms, LCriticalityIsInvariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> um(1.2, 4.0), up(1.0, 5.0), uN(1.0, 8.0), us(-1.9, 4.0);
    for (int i = 0; i < 200; ++i) {
        double m = um(rng), p = up(rng), s1 = us(rng);
        // sigma2 on the critical line
        double s2 = (s1 * (m - p) - 2 * (p - 1)) / (m - 1);
        auto d = make_descriptor(m, p, uN(rng), s1, s2);
        auto M = main_transform(d);
        double Lt = (M.target.sigma2) * (m - 1) + 2 * (p - 1);
        EXPECT_NEAR(Lt, 0, 1e-12 * (1 + std::abs(s1) + std::abs(s2)));
        d.sigma2 += 0.1;
        auto M2 = main_transform(d);
        EXPECT_GT(std::abs(M2.target.sigma2 * (m - 1) + 2 * (p - 1)), 1e-6);
    }
}

TEST(Transforms, MainMapsEqualWeightsToZero) {
    for (double s : {-1.5, 0.0, 0.7, 2.0, 5.0}) {
        auto M = main_transform(make_descriptor(2, 3, 3, s, s));
        EXPECT_EQ(M.target.sigma2, 0.0);
        EXPECT_EQ(M.target.sigma1, 0.0);
    }
    auto M = main_transform(make_descriptor(2, 3, 3, 1.5, -2));
    EXPECT_GE(M.target.sigma2, -2 - 1e-14);
}

TEST(Transforms, WorkedExamples) {
    auto M = main_transform(make_descriptor(2, 2, 3, 2, 2));
    EXPECT_DOUBLE_EQ(M.theta, 2);
    EXPECT_DOUBLE_EQ(M.target.N, 2.5);
    EXPECT_DOUBLE_EQ(M.a, 0.5);
    auto w = push_forward(M, [](double r, double) { return r; });
    for (double s : {0.1, 0.7, 3.0}) EXPECT_NEAR(w(s, 0.3), std::sqrt(s / 0.5), 1e-14);

    auto F = fisher_transform(make_descriptor(1, 3, 5, -2, 0));
    EXPECT_DOUBLE_EQ(F.delta, -1);
    EXPECT_DOUBLE_EQ(*F.shift_K, 1);
    EXPECT_DOUBLE_EQ(F.target.coeff("lambda", kNaN), 2);
    auto G = fisher_transform(make_descriptor(1, 2, 3, -2, -1));
    EXPECT_DOUBLE_EQ(G.delta, -1);
    EXPECT_DOUBLE_EQ(*G.shift_K, -1);
    EXPECT_DOUBLE_EQ(G.target.coeff("lambda", kNaN), 0);
    // lambda vanishes where N = (sigma2+2p)/(p-1)
    auto H = fisher_transform(make_descriptor(1, 3, 3.5, -2, 1));
    EXPECT_NEAR(H.target.coeff("lambda", kNaN), 0, 1e-14);
    auto delta = F.delta;
    auto one = push_forward(F, [delta](double r, double) { return std::pow(r, delta); });
    EXPECT_NEAR(one(0.4, 0.2), 1, 1e-14);

    auto S = main_transform(make_descriptor(2, 3, 3, 1, -2));
    EXPECT_DOUBLE_EQ(S.a, 1);
    EXPECT_DOUBLE_EQ(S.C, S.theta * S.theta);
    EXPECT_DOUBLE_EQ(S.target.coeff("reaction", 1), 1 / (S.theta * S.theta));
    EXPECT_TRUE(second_transform(make_descriptor(2, 2, 3, 1, 0.5)).warning);
}

TEST(Transforms, Errors) {
    EXPECT_THROW(main_transform(make_descriptor(2, 2, 3, -2, 0)), OutOfRange);
    EXPECT_THROW(euler_transform(make_descriptor(2, 2, 3, 0, 0)), KindMismatch);
    EXPECT_THROW(fisher_transform(make_descriptor(2, 2, 3, -2, 0)), KindMismatch);
    EXPECT_THROW(make_transform("nope", make_descriptor(2, 2, 3, 0, 0)), InvalidParameter);
    auto F = fisher_transform(make_descriptor(1, 3, 5, -2, 0));
    auto u = pull_back(F, [](double, double) { return 1.0; });
    EXPECT_THROW(u(0.0, 0.1), DomainError);
}

TEST(Transforms, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.05, 5.0), ut(0.0, 2.0);
    RadialFn u = [](double r, double t) { return (1 + r * r) * std::exp(-t) + std::sin(r); };
    for (auto& c : cases()) {
        auto M = make_transform(c.kind, c.d);
        auto back = pull_back(M, push_forward(M, u));
        double worst = 0;
        for (int i = 0; i < 2000; ++i) {
            double r = ur(rng), t = ut(rng);
            worst = std::max(worst, std::abs(back(r, t) - u(r, t)) / std::abs(u(r, t)));
        }
        EXPECT_LT(worst, 1e-12) << c.kind;
        std::vector<Sample3> in;
        for (int i = 0; i < 50; ++i) {
            double r = ur(rng), t = ut(rng);
            in.push_back({r, t, u(r, t)});
        }
        auto out = pull_back_samples(M, push_forward_samples(M, in));
        for (std::size_t i = 0; i < in.size(); ++i) {
            EXPECT_NEAR(out[i].x, in[i].x, 1e-12 * in[i].x);
            EXPECT_NEAR(out[i].t, in[i].t, 1e-12 * (1 + in[i].t));
            EXPECT_NEAR(out[i].v, in[i].v, 1e-12 * std::abs(in[i].v));
        }
    }
}

TEST(Transforms, ResidualEquivalence) {
    const std::vector<std::pair<double, double>> pts{{0.7, 0.25}, {1.1, 0.4}, {1.6, 0.55}};
    for (auto& c : cases()) {
        auto M = make_transform(c.kind, c.d);
        for (RadialFn w : {RadialFn(w1), RadialFn(w2)}) {
            for (auto [r, t] : pts) {
                ResidualOptions o;
                double Rs = residual_at(M.source, pull_back(M, w), r, t, o);
                EXPECT_LT(std::abs(gap(M, w, r, t, 1e-3)), 1e-6 * std::max(1.0, std::abs(Rs))) << c.kind << " r=" << r;
            }
        }
        // the discrete gap shrinks at fourth order
        double g1 = 0, g2 = 0;
        for (auto [r, t] : pts) {
            g1 = std::max(g1, std::abs(gap(M, w2, r, t, 0.04)));
            g2 = std::max(g2, std::abs(gap(M, w2, r, t, 0.02)));
        }
        EXPECT_NEAR(g1 / g2, 16, 3.2) << c.kind;
    }
}

TEST(Transforms, ExactSolutionsMapToExactSolutions) {
    auto s = explicit_backward_p1(2, 0);
    const double t = 0.5, r0 = s.interface_radius(t);
    for (const char* kind : {"second", "main"}) {
        auto M = make_transform(kind, s.descriptor);
        auto w = push_forward(M, s.evaluate);
        ResidualOptions o;
        double worst = 0;
        for (double f : {0.3, 0.5, 0.7}) {
            double r = f * r0;
            worst = std::max(worst, std::abs(residual_at(M.target, w, M.z_of(r, t), M.tau_of(t), o)));
        }
        EXPECT_LT(worst, 1e-6) << kind;
    }
    auto M = second_transform(s.descriptor);
    EXPECT_NEAR(M.target.N, 1, 1e-12);
    EXPECT_NEAR(M.target.sigma2, std::sqrt(6.0), 1e-12);
}
