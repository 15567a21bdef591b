#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qlocality/errors.hpp"
#include "qlocality/quantum.hpp"
#include "qlocality/separability.hpp"
#include "test_util.hpp"

using namespace qlocality;

TEST(BellState, PhiPlusCorners) {
    const auto m = bell_state(BellKind::PhiPlus).matrix();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
            EXPECT_EQ(m(i, j), Complex(corner ? 0.5 : 0.0));
        }
    }
}

TEST(BellState, AllKindsValidAndRankOne) {
    for (auto kind : {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus}) {
        const auto rho = bell_state(kind);
        EXPECT_TRUE(validate_density(rho.matrix()).passed);
        EXPECT_EQ(rho.matrix().trace(), Complex(1.0));
        const auto ev = oracle::eigenvalues(rho.matrix());
        EXPECT_NEAR(ev[3], 1.0, 1e-14);
        EXPECT_NEAR(ev[2], 0.0, 1e-14);
    }
}

TEST(BellState, SingletReducesToMaximallyMixed) {
    const auto r = reduced_state(bell_state(BellKind::PsiMinus), Party::A);
    EXPECT_EQ(r.matrix(), ComplexMatrix::identity(2) * Complex(0.5));
}

TEST(WernerState, Endpoints) {
    EXPECT_LE(max_abs_diff(werner_state(0).matrix(), ComplexMatrix::identity(4) * Complex(0.25)), 0.0);
    EXPECT_LE(max_abs_diff(werner_state(1).matrix(), bell_state(BellKind::PsiMinus).matrix()), 0.0);
}

TEST(WernerState, Spectrum) {
    for (int k = 0; k <= 10; ++k) {
        const double p = k / 10.0;
        const auto ev = hermitian_eigenvalues(werner_state(p).matrix());
        EXPECT_NEAR(ev[3], (1 + 3 * p) / 4, 1e-12);
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev[static_cast<std::size_t>(i)], (1 - p) / 4, 1e-12);
    }
    const auto half = hermitian_eigenvalues(werner_state(0.5).matrix());
    EXPECT_NEAR(half[3], 5.0 / 8, 1e-12);
    EXPECT_NEAR(half[0], 1.0 / 8, 1e-12);
}

TEST(WernerState, RangeError) {
    EXPECT_THROW(werner_state(1.5), DomainError);
    EXPECT_THROW(werner_state(-0.1), DomainError);
    EXPECT_THROW(werner_state(std::nan("")), DomainError);
}

TEST(WernerState, ReducedStateIsMaximallyMixed) {
    for (int k = 0; k <= 10; ++k) {
        const auto rho = werner_state(k / 10.0);
        for (Party keep : {Party::A, Party::B}) {
            EXPECT_LE(max_abs_diff(reduced_state(rho, keep).matrix(),
                                   ComplexMatrix::identity(2) * Complex(0.5)),
                      1e-15);
        }
    }
}

TEST(DensityOperator, RejectsInvalidMatrices) {
    EXPECT_THROW(DensityOperator(pauli(3), 2), DomainError);
    EXPECT_THROW(DensityOperator(ComplexMatrix::identity(4) * Complex(0.25), 2, 3), ShapeError);
    try {
        DensityOperator(ComplexMatrix::identity(2), 2);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("trace deviation"), std::string::npos);
    }
}

TEST(SeparableMixture, SingleComponentIsProduct) {
    const auto a = random_density(2, 5);
    const auto b = random_density(2, 6);
    const auto rho = separable_mixture(SeparableComponents({{1.0, a, b}}));
    EXPECT_EQ(rho.matrix(), kron(a.matrix(), b.matrix()));
}

TEST(SeparableMixture, ClassicalCorrelation) {
    const auto zero = bloch_state({0, 0, 1});
    const auto one = bloch_state({0, 0, -1});
    const auto rho = separable_mixture(SeparableComponents({{0.5, zero, zero}, {0.5, one, one}}));
    const double d[] = {0.5, 0, 0, 0.5};
    EXPECT_EQ(rho.matrix(), ComplexMatrix::diagonal(d));
}

TEST(SeparableMixture, WernerQuarterFromSixComponents) {
    const auto c = test::werner_pauli_decomposition(0.25);
    EXPECT_EQ(c.size(), 6u);
    EXPECT_LE(max_abs_diff(separable_mixture(c).matrix(), werner_state(0.25).matrix()), 1e-12);
}

TEST(SeparableMixture, WeightAndShapeErrors) {
    const auto a = random_density(2, 1);
    const auto b = random_density(3, 2);
    EXPECT_THROW(SeparableComponents({{0.6, a, a}, {0.6, a, a}}), DomainError);
    EXPECT_THROW(SeparableComponents({{1.2, a, a}, {-0.2, a, a}}), DomainError);
    EXPECT_THROW(SeparableComponents({{0.5, a, a}, {0.5, a, b}}), ShapeError);
    EXPECT_THROW(SeparableComponents({}), DomainError);
}

TEST(SeparableMixture, ReducedStateIsMixtureOfMarginals) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto c = random_separable_components(3, 2, 3, seed);
        ComplexMatrix expected(2, 2);
        for (const auto& comp : c.components()) expected += comp.rhoA.matrix() * Complex(comp.weight);
        EXPECT_LE(max_abs_diff(reduced_state(separable_mixture(c), Party::A).matrix(), expected), 1e-12);
    }
}

TEST(SeparableMixture, AlwaysPassesPpt) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rho = separable_mixture(random_separable_components(4, 2, 2, seed));
        EXPECT_GE(ppt_test(rho).min_eigenvalue, -1e-9);
    }
}

TEST(RandomDensity, DimOneAndDeterminism) {
    EXPECT_EQ(random_density(1, 99).matrix(), ComplexMatrix::identity(1));
    EXPECT_EQ(random_density(4, 1234).matrix(), random_density(4, 1234).matrix());
    EXPECT_NE(random_density(4, 1234).matrix(), random_density(4, 1235).matrix());
}

TEST(RandomDensity, ThousandValidSamples) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto m = random_density(4, seed).matrix();
        const auto v = validate_density(m);
        EXPECT_TRUE(v.passed);
        EXPECT_GE(oracle::eigenvalues(m).front(), 0.0 - 1e-15);
        EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
    }
}

TEST(Rng, FrozenSequence) {
    // mt19937_64 default-seeded 10000th output is fixed by the C++ standard.
    std::mt19937_64 reference;
    reference.discard(9999);
    EXPECT_EQ(reference(), 9981545732273789042ULL);
    Rng rng(5489);
    for (int i = 0; i < 9999; ++i) rng.next_u64();
    EXPECT_EQ(rng.next_u64(), 9981545732273789042ULL);
}

TEST(JointProbabilities, PhiPlusZZ) {
    const auto z = ProjectiveMeasurement::computational(2);
    const auto p = joint_probabilities(bell_state(BellKind::PhiPlus), z, z);
    EXPECT_NEAR(p(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(p(1, 1), 0.5, 1e-15);
    EXPECT_EQ(p(0, 1), 0.0);
    EXPECT_EQ(p(1, 0), 0.0);
}

TEST(JointProbabilities, ProductAndMixed) {
    const auto z = ProjectiveMeasurement::computational(2);
    const auto zero = bloch_state({0, 0, 1});
    const auto p = joint_probabilities(product_state(zero, zero), z, z);
    EXPECT_EQ(p(0, 0), 1.0);
    EXPECT_EQ(p(0, 1) + p(1, 0) + p(1, 1), 0.0);

    Rng rng(3);
    const DensityOperator mixed(ComplexMatrix::identity(4) * Complex(0.25), 2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto q = joint_probabilities(mixed, random_measurement(2, rng), random_measurement(2, rng));
        for (double v : q.values()) EXPECT_NEAR(v, 0.25, 1e-14);
    }
}

TEST(JointProbabilities, MarginalIdentity) {
    Rng rng(4);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rho = DensityOperator(random_density(6, seed).matrix(), 2, 3);
        const auto ma = random_measurement(2, rng);
        const auto mb = random_measurement(3, rng);
        const auto p = joint_probabilities(rho, ma, mb);
        const auto rhoA = reduced_state(rho, Party::A);
        const auto marg = p.marginal_a();
        double total = 0;
        for (std::size_t a = 0; a < 2; ++a) {
            EXPECT_NEAR(marg[a], trace_of_product(rhoA.matrix(), ma.projector(a)).real(), 1e-12);
            total += marg[a];
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
        for (double v : p.values()) EXPECT_GE(v, 0.0);
    }
}

TEST(JointProbabilities, DimensionMismatch) {
    const auto z2 = ProjectiveMeasurement::computational(2);
    const auto z3 = ProjectiveMeasurement::computational(3);
    EXPECT_THROW(joint_probabilities(werner_state(0.3), z2, z3), ShapeError);
}

TEST(ProjectiveMeasurement, Validation) {
    const auto id = ComplexMatrix::identity(2);
    EXPECT_THROW(ProjectiveMeasurement({id, id}), DomainError);  // not orthogonal
    const double d0[] = {1, 0};
    EXPECT_THROW(ProjectiveMeasurement({ComplexMatrix::diagonal(d0)}), DomainError);  // incomplete
    EXPECT_THROW(ProjectiveMeasurement({id * Complex(0.5), id * Complex(0.5)}), DomainError);
    EXPECT_THROW(ProjectiveMeasurement::qubit_direction({0, 0, 0}), DomainError);
    const auto m = ProjectiveMeasurement::qubit_direction({1, 1, 0});
    EXPECT_EQ(m.label(0), "+1");
    EXPECT_EQ(m.outcomes(), 2u);
}

TEST(ReducedState, ProductAndErrors) {
    const auto a = random_density(2, 7);
    const auto b = random_density(3, 8);
    const auto rho = product_state(a, b);
    EXPECT_LE(max_abs_diff(reduced_state(rho, Party::A).matrix(), a.matrix()), 1e-15);
    EXPECT_LE(max_abs_diff(reduced_state(rho, Party::B).matrix(), b.matrix()), 1e-15);
    EXPECT_LE(max_abs_diff(reduced_state(bell_state(BellKind::PhiPlus), Party::B).matrix(),
                           ComplexMatrix::identity(2) * Complex(0.5)),
              0.0);
    EXPECT_THROW(reduced_state(a, Party::A), ShapeError);
}

TEST(MixtureEquality, SingleProductComponent) {
    Rng rng(9);
    const auto c = SeparableComponents({{1.0, random_density(2, 1), random_density(2, 2)}});
    EXPECT_LE(verify_mixture_equality(c, random_measurement(2, rng), random_measurement(2, rng)), 1e-14);
}

TEST(MixtureEquality, RandomComponents) {
    Rng rng(10);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = random_separable_components(3, 2, 2, derive_seed(77, seed));
        EXPECT_LE(verify_mixture_equality(c, random_measurement(2, rng), random_measurement(2, rng)),
                  1e-12);
    }
    const auto c = random_separable_components(3, 2, 3, 5);
    EXPECT_LE(verify_mixture_equality(c, random_measurement(2, rng), random_measurement(3, rng)), 1e-12);
    EXPECT_THROW(verify_mixture_equality(c, random_measurement(2, rng), random_measurement(2, rng)),
                 ShapeError);
}
