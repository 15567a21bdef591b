#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qlocality/errors.hpp"
#include "qlocality/locality.hpp"
#include "test_util.hpp"

using namespace qlocality;

namespace {

// Checks both certificates without trusting the solver.
void expect_certificate(const BehaviorTable& b, const LhvResult& r) {
    const auto& s = b.scenario();
    if (r.verdict == LhvVerdict::Feasible) {
        double total = 0;
        for (double w : r.weights) {
            EXPECT_GE(w, 0.0);
            total += w;
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
        const auto rec = reconstruct_from_strategies(s, r.weights);
        double err = 0;
        for (std::size_t i = 0; i < rec.size(); ++i) err = std::max(err, std::abs(rec[i] - b.values()[i]));
        EXPECT_LE(err, 1e-8);
    } else {
        double worst = -INFINITY;
        for (const auto& v : enumerate_deterministic_strategies(s)) {
            worst = std::max(worst, r.dual.evaluate(v.values()));
        }
        EXPECT_LE(worst, r.dual.bound + 1e-12);
        const double gap = r.dual.evaluate(b.values()) - r.dual.bound;
        EXPECT_GT(gap, 1e-8);
        EXPECT_NEAR(gap, r.gap, 1e-12);
    }
}

BehaviorTable singlet_optimal_behavior() {
    const auto rho = bell_state(BellKind::PsiMinus);
    const auto opt = chsh_optimum(rho);
    return behavior_from_state(rho, opt.measurementsA(), opt.measurementsB());
}

}  // namespace

TEST(LhvMembership, UniformBehaviorFeasible) {
    for (const Scenario& s : {kChshScenario, Scenario{3, 2, 2, 3}, Scenario{1, 1, 2, 2}}) {
        const auto b = BehaviorTable::uniform(s);
        const auto r = lhv_membership(b);
        EXPECT_EQ(r.verdict, LhvVerdict::Feasible);
        expect_certificate(b, r);
    }
}

TEST(LhvMembership, DeterministicVerticesFeasible) {
    for (const auto& v : enumerate_deterministic_strategies(kChshScenario)) {
        const auto r = lhv_membership(v);
        EXPECT_EQ(r.verdict, LhvVerdict::Feasible);
        expect_certificate(v, r);
    }
}

TEST(LhvMembership, SingletInfeasibleWithChshDual) {
    const auto b = singlet_optimal_behavior();
    const auto r = lhv_membership(b);
    ASSERT_EQ(r.verdict, LhvVerdict::Infeasible);
    expect_certificate(b, r);

    // Project the dual onto correlator form: beta_xy = (1/4) sum_ab c_xyab (+-1)(+-1).
    std::array<double, 4> beta{};
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t bb = 0; bb < 2; ++bb) {
                    const double sign = (a == bb) ? 1.0 : -1.0;
                    beta[x * 2 + y] += 0.25 * sign * r.dual.coefficients[kChshScenario.index(x, y, a, bb)];
                }
    const double scale = std::abs(beta[0]);
    ASSERT_GT(scale, 0.0);
    int negative = 0;
    for (double v : beta) {
        EXPECT_NEAR(std::abs(v), scale, 1e-9);
        negative += v < 0;
    }
    EXPECT_EQ(negative % 2, 1);  // a CHSH sign pattern
    EXPECT_NEAR(r.gap / scale, 2 * std::numbers::sqrt2 - 2, 1e-9);
}

TEST(LhvMembership, PrBoxesInfeasible) {
    for (int k = 0; k < 8; ++k) {
        const auto b = test::pr_box(k & 1, (k >> 1) & 1, (k >> 2) & 1);
        const auto r = lhv_membership(b);
        EXPECT_EQ(r.verdict, LhvVerdict::Infeasible);
        expect_certificate(b, r);
    }
}

TEST(LhvMembership, SeparableStatesFeasible) {
    Rng rng(17);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rho = separable_mixture(random_separable_components(1 + seed % 5, 2, 2, seed));
        const auto b = behavior_from_state(rho, test::random_qubit_settings(2, rng),
                                           test::random_qubit_settings(2, rng));
        const auto r = lhv_membership(b);
        EXPECT_EQ(r.verdict, LhvVerdict::Feasible) << "seed " << seed;
        expect_certificate(b, r);
    }
}

TEST(LhvMembership, LocalModelsFeasible) {
    const Scenario scenarios[] = {{2, 2, 2, 2}, {2, 3, 2, 2}, {3, 3, 2, 2}, {1, 3, 2, 2}};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto& s = scenarios[seed % 4];
        const auto b = mix_local_model(random_local_model(s, 1 + seed % 7, seed));
        EXPECT_LE(no_signaling_residual(b), 1e-12);
        const auto r = lhv_membership(b);
        EXPECT_EQ(r.verdict, LhvVerdict::Feasible) << "seed " << seed;
        expect_certificate(b, r);
    }
}

TEST(LhvMembership, MatchesEightChshInequalities) {
    int infeasible = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto b = test::random_nosignaling_behavior(derive_seed(2024, seed));
        ASSERT_LE(no_signaling_residual(b), 1e-12);
        const bool chsh_local = test::max_chsh_symmetrization(b) <= 2.0 + 1e-8;
        const auto r = lhv_membership(b);
        EXPECT_EQ(r.verdict == LhvVerdict::Feasible, chsh_local) << "seed " << seed;
        expect_certificate(b, r);
        infeasible += r.verdict == LhvVerdict::Infeasible;
    }
    // The generator must exercise both verdicts.
    EXPECT_GT(infeasible, 50);
    EXPECT_LT(infeasible, 450);
}

TEST(LhvMembership, RejectsOversizedScenario) {
    EXPECT_THROW(lhv_membership(BehaviorTable::uniform({8, 8, 3, 3})), SizeError);
}

TEST(MixLocalModel, SharedCauseGivesPerfectCorrelation) {
    const LocalModel::Response zero{{1.0, 0.0}, {1.0, 0.0}};
    const LocalModel::Response one{{0.0, 1.0}, {0.0, 1.0}};
    const LocalModel model(kChshScenario, {0.5, 0.5}, {zero, one}, {zero, one});
    const auto b = mix_local_model(model);
    EXPECT_EQ(chsh_value(b), 2.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            EXPECT_EQ(b(x, y, 0, 0), 0.5);
            EXPECT_EQ(b(x, y, 1, 1), 0.5);
        }
    EXPECT_EQ(lhv_membership(b).verdict, LhvVerdict::Feasible);
}

TEST(MixLocalModel, WeightScalingIsBitIdentical) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto model = random_local_model({3, 2, 2, 3}, 5, seed);
        const auto renormalized = [&](double c) {
            std::vector<double> w = model.weights();
            double total = 0;
            for (auto& v : w) {
                v *= c;
                total += v;
            }
            for (auto& v : w) v /= total;
            return mix_local_model(LocalModel(model.scenario(), w, model.responseA(), model.responseB()));
        };
        const auto base = renormalized(1.0);
        for (double c : {0.25, 2.0, 1024.0}) {
            const auto scaled = renormalized(c);
            EXPECT_TRUE(std::equal(base.values().begin(), base.values().end(), scaled.values().begin()));
        }
    }
}
