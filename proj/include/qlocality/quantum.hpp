#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlocality/linalg.hpp"
#include "qlocality/random.hpp"

namespace qlocality {

// Bipartite (or, with dimB == 1, single-party) quantum state. Construction validates
// hermiticity, unit trace and positivity; a failing matrix never becomes a DensityOperator.
class DensityOperator {
public:
    DensityOperator(ComplexMatrix matrix, std::size_t dimA, std::size_t dimB = 1,
                    double tol = kDefaultTolerance);

    std::size_t dimA() const { return dimA_; }
    std::size_t dimB() const { return dimB_; }
    std::size_t dimension() const { return dimA_ * dimB_; }
    bool is_bipartite() const { return dimB_ > 1; }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
    std::size_t dimA_;
    std::size_t dimB_;
};

// Complete set of orthogonal projectors, one per outcome, in label order.
class ProjectiveMeasurement {
public:
    ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                          std::vector<std::string> labels = {},
                          double tol = kDefaultTolerance);

    // Rank-1 projectors onto the columns of a unitary.
    static ProjectiveMeasurement from_basis(const ComplexMatrix& unitary);
    static ProjectiveMeasurement computational(std::size_t dim);
    // Qubit observable n.sigma: outcome "+1" projects onto (I + n.sigma)/2, "-1" onto
    // (I - n.sigma)/2. `direction` is normalised; it must be nonzero.
    static ProjectiveMeasurement qubit_direction(const std::array<double, 3>& direction);

    std::size_t dim() const { return dim_; }
    std::size_t outcomes() const { return projectors_.size(); }
    const ComplexMatrix& projector(std::size_t k) const { return projectors_.at(k); }
    const std::string& label(std::size_t k) const { return labels_.at(k); }
    const std::vector<ComplexMatrix>& projectors() const { return projectors_; }

private:
    std::size_t dim_ = 0;
    std::vector<ComplexMatrix> projectors_;
    std::vector<std::string> labels_;
};

struct SeparableComponent {
    double weight;
    DensityOperator rhoA;
    DensityOperator rhoB;
};

// Convex weights over product states. Weights are nonnegative and sum to one within 1e-12.
class SeparableComponents {
public:
    explicit SeparableComponents(std::vector<SeparableComponent> components);

    const std::vector<SeparableComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    std::size_t dimA() const { return components_.front().rhoA.dimension(); }
    std::size_t dimB() const { return components_.front().rhoB.dimension(); }

private:
    std::vector<SeparableComponent> components_;
};

// P(a, b) for one pair of measurements, row-major over (a, b).
class JointDistribution {
public:
    JointDistribution(std::size_t outcomesA, std::size_t outcomesB, std::vector<double> p);

    std::size_t outcomesA() const { return outcomesA_; }
    std::size_t outcomesB() const { return outcomesB_; }
    double operator()(std::size_t a, std::size_t b) const { return p_[a * outcomesB_ + b]; }
    std::span<const double> values() const { return p_; }

    std::vector<double> marginal_a() const;
    std::vector<double> marginal_b() const;

private:
    std::size_t outcomesA_;
    std::size_t outcomesB_;
    std::vector<double> p_;
};

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Pauli matrix: 0 identity, 1 x, 2 y, 3 z.
const ComplexMatrix& pauli(int k);

// (I + r.sigma) / 2; |r| <= 1.
DensityOperator bloch_state(const std::array<double, 3>& r);

std::array<Complex, 4> bell_vector(BellKind kind);
DensityOperator bell_state(BellKind kind);

// p |Psi-><Psi-| + (1 - p) I/4, 0 <= p <= 1.
DensityOperator werner_state(double p);

// p |psi><psi| + (1 - p) I/d for a (normalised internally) pure state psi.
DensityOperator noisy_pure_state(std::span<const Complex> psi, std::size_t dimA,
                                 std::size_t dimB, double p);

DensityOperator product_state(const DensityOperator& rhoA, const DensityOperator& rhoB);

DensityOperator separable_mixture(const SeparableComponents& c);

// G G^dagger / Tr(G G^dagger), G filled row-major with (re, im) pairs of Rng::normal().
DensityOperator random_density(std::size_t dim, std::uint64_t seed);

// Measurement in the basis given by Gram-Schmidt on a Gaussian complex matrix.
ProjectiveMeasurement random_measurement(std::size_t dim, Rng& rng);

// Uniform on the unit sphere.
std::array<double, 3> random_direction(Rng& rng);

// Random convex weights (normalised exponentials) of the given size.
std::vector<double> random_weights(std::size_t n, Rng& rng);

// Mixture of `n` random product qubit-qubit (or dimA x dimB) states.
SeparableComponents random_separable_components(std::size_t n, std::size_t dimA,
                                                std::size_t dimB, std::uint64_t seed);

// Tr(rho P_a (x) P_b). Tiny negative round-off (>= -1e-12) is clamped to zero; anything
// else, or a total off by more than 1e-10, raises NumericError.
JointDistribution joint_probabilities(const DensityOperator& rho,
                                      const ProjectiveMeasurement& measA,
                                      const ProjectiveMeasurement& measB);

DensityOperator reduced_state(const DensityOperator& rho, Party keep);

// max_{i,j} |Tr(rho_AB P_i (x) P_j) - sum_mu w_mu Tr(rhoA_mu P_i) Tr(rhoB_mu P_j)|
// with rho_AB = separable_mixture(c).
double verify_mixture_equality(const SeparableComponents& c,
                               const ProjectiveMeasurement& measA,
                               const ProjectiveMeasurement& measB);

}  // namespace qlocality
