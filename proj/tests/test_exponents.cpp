#include <gtest/gtest.h>

#include <random>

#include "rdx/eqmodel.hpp"
#include "rdx/transforms.hpp"
#include "reference.hpp"

using namespace rdx;
using namespace rdx_test;

TEST(Exponents, RandomSweepMatchesHandFormulas) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        auto t = exponent_table(d);
        EXPECT_LT(rel(t.get("p_F"), ref::pF(d.m, d.N, d.sigma1, d.sigma2)), 1e-12);
        if (d.p > d.m) {
            EXPECT_LT(rel(t.get("mu"), ref::mu(d.m, d.p, d.sigma2)), 1e-12);
        }
        EXPECT_LT(rel(t.get("L_sigma"), ref::Ls(d.m, d.p, d.sigma1, d.sigma2)), 1e-12);
        EXPECT_LT(rel(t.get("L"), ref::L(d.m, d.p, d.sigma1, d.sigma2)), 1e-12);
        if (d.m > 1) {
            EXPECT_LT(rel(t.get("sigma2c"), ref::s2c(d.m, d.N, d.sigma1)), 1e-12);
        }
        if (d.N > 2) {
            EXPECT_LT(rel(t.get("p_c"), ref::pc(d.m, d.N, d.sigma2)), 1e-12);
            EXPECT_LT(rel(t.get("p_s"), ref::ps(d.m, d.N, d.sigma2)), 1e-12);
        }
        if (d.N > 10 + 4 * d.sigma2) {
            EXPECT_LT(rel(t.get("p_JL"), ref::pjl(d.m, d.N, d.sigma2)), 1e-12);
            EXPECT_LT(rel(t.get("p_L"), ref::pl(d.m, d.N, d.sigma2)), 1e-12);
        } else {
            EXPECT_TRUE(std::isinf(t.get("p_JL")));
            EXPECT_TRUE(std::isinf(t.get("p_L")));
        }
        EXPECT_LT(rel(t.get("q_min"), ref::qmin(d.N, d.p, d.sigma1, d.sigma2)), 1e-12);
        if (d.N >= 3) {
            EXPECT_LT(rel(t.get("K_star"), ref::kstar(d.N)), 1e-12);
        }
        if (d.N > 10 + 4 * d.sigma2) {
            EXPECT_LT(rel(heat_p_jl(d.N, d.sigma2), ref::heat_pjl(d.N, d.sigma2)), 1e-12);
        }
    }
}

TEST(Exponents, ClassicalReductions) {
    for (double m : {1.0, 2.0, 3.5})
        for (double N : {1.0, 2.0, 3.0, 7.0})
            EXPECT_NEAR(*fujita_pair(make_descriptor(m, 2, N, 0, 0)).p_F, m + 2 / N, 1e-14);
    EXPECT_NEAR(p_l_equal(1, 11, 0), 7.0, 1e-12);
    EXPECT_NEAR(p_jl_equal(1, 11, 0), 1 + 4 / (11 - 4 - 2 * std::sqrt(10.0)), 1e-3);
    EXPECT_NEAR(p_jl_equal(1, 11, 0), 1 + 4 / (7 - std::sqrt(40.0)), 1e-12);
    EXPECT_NEAR(heat_p_jl(11, 0), p_jl_equal(1, 11, 0), 1e-9);
    EXPECT_NEAR(heat_p_jl(15, 1), p_jl_equal(1, 15, 1), 1e-9);
}

TEST(Exponents, WorkedExamples) {
    auto t = exponent_table(make_descriptor(2, 3, 3, 1, 2));
    EXPECT_DOUBLE_EQ(t.get("p_F"), 3.0);
    EXPECT_DOUBLE_EQ(t.get("mu"), 4.0);
    auto th = pm_thresholds(make_descriptor(2, 2, 3, 0, 0));
    EXPECT_NEAR(th.sigma2c, 4.0 / 7.0, 1e-15);
    EXPECT_NEAR(th.nonexist_bound, 1.0, 1e-15);
    EXPECT_NEAR(pm_thresholds(make_descriptor(3, 3, 3, 1, 0)).sigma2c, 2.0, 1e-15);
    EXPECT_THROW(pm_thresholds(make_descriptor(1, 1, 3, 0, 0)), KindMismatch);
    EXPECT_NEAR(p_c_equal(2, 4, 0), 4, 1e-15);
    EXPECT_NEAR(p_s_equal(2, 4, 0), 6, 1e-15);
    EXPECT_NEAR(p_c_forward(3, 2, 0), 2, 1e-15);
    EXPECT_NEAR(q_min(3, 3, 0, 0), 3, 1e-15);
    EXPECT_NEAR(k_star(4), 1, 1e-15);
    EXPECT_THROW(k_star(2), OutOfRange);
    EXPECT_THROW(semilinear_set(make_descriptor(2, 3, 3, 0, 0)), KindMismatch);
}

TEST(Exponents, InfinityConventionAtBoundary) {
    EXPECT_TRUE(std::isinf(p_jl_equal(1, 10, 0)));
    EXPECT_TRUE(std::isinf(p_l_equal(2, 14, 1)));
    EXPECT_TRUE(std::isinf(heat_p_jl(14, 1)));
    EXPECT_TRUE(std::isfinite(p_jl_equal(1, 14.0001, 1)));
}

TEST(Exponents, Properties) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        // equal weights collapse
        EXPECT_LT(rel(l_sigma(d.m, d.p, d.sigma2, d.sigma2), (d.sigma2 + 2) * (d.p - 1)), 1e-12);
        auto fp = fujita_pair(d);
        if (fp.mu) {
            EXPECT_LT(rel(*fp.mu * (d.p - d.m), d.sigma2 + 2), 1e-12);
        }
        // monotone in the weights
        auto up = fujita_pair(make_descriptor(d.m, d.p, d.N, d.sigma1, d.sigma2 + 0.1));
        auto s1up = fujita_pair(make_descriptor(d.m, d.p, d.N, d.sigma1 + 0.1, d.sigma2));
        EXPECT_GT(*up.p_F, *fp.p_F);
        EXPECT_LT(*s1up.p_F, *fp.p_F);
    }
}

TEST(Exponents, FujitaThroughMainTransform) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        if (d.N == 1 && d.sigma1 < 0) continue;
        auto M = main_transform(d);
        double pf = M.target.m + (M.target.sigma2 + 2) / M.target.N;
        EXPECT_LT(rel(pf, *fujita_pair(d).p_F), 1e-12);
    }
}

TEST(EqModel, ValidateRejectsAndWarns) {
    EXPECT_THROW(validate({0.5, 2, 3, 0, 0}), InvalidParameter);
    EXPECT_THROW(validate({2, 0.5, 3, 0, 0}), InvalidParameter);
    EXPECT_THROW(validate({2, 2, 0, 0, 0}), InvalidParameter);
    EXPECT_THROW(validate({2, 2, 3, kNaN, 0}), InvalidParameter);
    auto d = validate({2, 2, 1, -1, 0});
    bool warned = false;
    for (auto& w : d.warnings) warned |= w.find("sigma1>=0 in N=1") != std::string::npos;
    EXPECT_TRUE(warned);
    EXPECT_EQ(validate({2, 2, 3, 0, 0}).family, Family::Homogeneous);
    EXPECT_EQ(validate({2, 2, 3, 0, 1}).family, Family::SingleWeight);
    EXPECT_EQ(validate({2, 2, 3, 1, 1}).family, Family::TwoWeight);
}

TEST(EqModel, SelfSimilarExamples) {
    auto b = self_similar_exponents(make_descriptor(2, 1.5, 3, 0, 0), FormKind::Backward);
    EXPECT_NEAR(b.alpha, 2, 1e-14);
    EXPECT_NEAR(b.beta, 0.5, 1e-14);
    auto f = self_similar_exponents(make_descriptor(2, 1, 3, 0, -1), FormKind::Forward);
    EXPECT_NEAR(f.alpha, 1, 1e-14);
    EXPECT_NEAR(f.beta, 1, 1e-14);
    auto e = self_similar_exponents(make_descriptor(3, 2, 2, 0, -1), FormKind::Exponential);
    EXPECT_NEAR(e.alpha / e.beta, 1, 1e-14);
    auto s = self_similar_exponents(make_descriptor(3, 3, 2, 1, 0.5), FormKind::SeparateVariable);
    EXPECT_NEAR(s.alpha, 0.5, 1e-15);
    EXPECT_THROW(self_similar_exponents(make_descriptor(3, 2, 2, 0, -1), FormKind::Backward), DegenerateSystem);
    EXPECT_THROW(self_similar_exponents(make_descriptor(3, 2.5, 2, 0, 0), FormKind::SeparateVariable), KindMismatch);
    EXPECT_THROW(self_similar_exponents(make_descriptor(3, 2.5, 2, 0, 0), FormKind::Exponential), KindMismatch);
}

// powers of t balance between u_t, diffusion and reaction
TEST(EqModel, LinearSystemMatchesClosedForms) {
    Sweep sw;
    for (int i = 0; i < 200; ++i) {
        auto d = sw.next();
        if (l_is_zero(l_sigma(d.m, d.p, d.sigma1, d.sigma2), d.sigma1, d.sigma2)) continue;
        for (auto k : {FormKind::Forward, FormKind::Backward}) {
            auto f = self_similar_exponents(d, k);
            auto [a, b] = closed_form_exponents(d, k);
            EXPECT_LT(rel(f.alpha, a), 1e-12);
            EXPECT_LT(rel(f.beta, b), 1e-12);
            double rhs = k == FormKind::Forward ? -1 : 1, sc = 1 + std::abs(a) + std::abs(b);
            EXPECT_NEAR((d.m - 1) * f.alpha - (d.sigma1 + 2) * f.beta, rhs, 1e-9 * sc);
            EXPECT_NEAR((d.m - d.p) * f.alpha - (d.sigma2 + 2) * f.beta, 0, 1e-9 * sc);
        }
    }
}

TEST(EqModel, SignLaw) {
    Sweep sw;
    int seen = 0;
    for (int i = 0; i < 2000 && seen < 100; ++i) {
        auto d = sw.next();
        if (!(d.p < d.m) || d.sigma1 <= -2 || d.sigma2 <= -2) continue;
        double L = l_sigma(d.m, d.p, d.sigma1, d.sigma2);
        if (l_is_zero(L, d.sigma1, d.sigma2)) continue;
        auto f = self_similar_exponents(d, L > 0 ? FormKind::Backward : FormKind::Forward);
        EXPECT_GT(f.alpha, 0);
        EXPECT_GT(f.beta, 0);
        ++seen;
    }
    EXPECT_GT(seen, 50);
}

TEST(EqModel, ClassifyExamples) {
    auto r = classify_regime(make_descriptor(2, 2.1, 3, 0, 0));
    ASSERT_TRUE(r.fujita.has_value());
    EXPECT_NEAR(*r.fujita, 8.0 / 3.0, 1e-12);
    bool universal = false;
    for (auto& n : r.notes) universal |= n.find("universal blow-up") != std::string::npos;
    EXPECT_TRUE(universal);
    EXPECT_EQ(classify_regime(make_descriptor(2, 2, 3, 0, 3)).separate_variable_status, SepStatus::NotExists);
    EXPECT_EQ(classify_regime(make_descriptor(1.5, 1.5, 3, 0, 0.5)).separate_variable_status, SepStatus::Undetermined);
    EXPECT_EQ(classify_regime(make_descriptor(1.5, 1.5, 3, 0, 0.1)).separate_variable_status, SepStatus::Exists);
    EXPECT_EQ(classify_regime(make_descriptor(2, 2, 3, 0, 0.3)).separate_variable_status, SepStatus::Exists);
    EXPECT_FALSE(classify_regime(make_descriptor(2, 3, 3, 0, 1)).complete_blowup.has_value());
    EXPECT_FALSE(classify_regime(make_descriptor(2, 3, 12, 0, 0)).type2_possible.has_value());
    EXPECT_TRUE(*classify_regime(make_descriptor(1, 8, 12, 0, 0)).type2_possible);
    EXPECT_EQ(classify_regime(make_descriptor(3, 2, 2, 0, -1)).expected_form, ExpectedForm::Exponential);
}

TEST(EqModel, ClassifyIsPure) {
    auto d = make_descriptor(2.5, 3.1, 4, 0.5, 1.5);
    auto a = classify_regime(d), b = classify_regime(d);
    EXPECT_EQ(a.notes, b.notes);
    EXPECT_EQ(a.expected_form, b.expected_form);
    EXPECT_EQ(a.L_value, b.L_value);
}
