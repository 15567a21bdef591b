#include "qlocality/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qlocality/errors.hpp"

namespace qlocality {

namespace {

constexpr double kClampTolerance = 1e-12;
constexpr double kTotalTolerance = 1e-10;
constexpr double kWeightTolerance = 1e-12;

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k));
    return labels;
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, std::size_t dimA, std::size_t dimB,
                                 double tol)
    : matrix_(std::move(matrix)), dimA_(dimA), dimB_(dimB) {
    if (dimA == 0 || dimB == 0 || !matrix_.is_square() || matrix_.rows() != dimA * dimB) {
        std::ostringstream msg;
        msg << "density operator: matrix " << matrix_.rows() << "x" << matrix_.cols()
            << " does not match dims " << dimA << "x" << dimB;
        throw ShapeError(msg.str());
    }
    const DensityValidation v = validate_density(matrix_, tol);
    if (!v.passed) {
        std::ostringstream msg;
        msg << "not a density operator at tolerance " << tol << ":";
        if (v.hermiticity_residual > tol) msg << " hermiticity residual " << v.hermiticity_residual;
        if (v.trace_deviation > tol) msg << " trace deviation " << v.trace_deviation;
        if (v.min_eigenvalue < -tol) msg << " minimum eigenvalue " << v.min_eigenvalue;
        throw DomainError(msg.str());
    }
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<ComplexMatrix> projectors,
                                             std::vector<std::string> labels, double tol)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
    if (projectors_.empty()) throw ShapeError("measurement needs at least one projector");
    dim_ = projectors_.front().rows();
    if (labels_.empty()) labels_ = default_labels(projectors_.size());
    if (labels_.size() != projectors_.size()) {
        throw ShapeError("measurement: one label per projector required");
    }
    ComplexMatrix sum(dim_, dim_);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const auto& p = projectors_[i];
        if (!p.is_square() || p.rows() != dim_) throw ShapeError("measurement: projector shape");
        if (hermiticity_residual(p) > tol) {
            throw DomainError("measurement: projector " + labels_[i] + " is not Hermitian");
        }
        if (max_abs_diff(p * p, p) > tol) {
            throw DomainError("measurement: projector " + labels_[i] + " is not idempotent");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if ((p * projectors_[j]).max_abs() > tol) {
                throw DomainError("measurement: projectors " + labels_[j] + " and " +
                                  labels_[i] + " are not orthogonal");
            }
        }
        sum += p;
    }
    if (max_abs_diff(sum, ComplexMatrix::identity(dim_)) > tol) {
        throw DomainError("measurement: projectors do not sum to the identity");
    }
}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(const ComplexMatrix& unitary) {
    if (!unitary.is_square()) throw ShapeError("basis matrix must be square");
    const std::size_t n = unitary.rows();
    std::vector<ComplexMatrix> projectors;
    projectors.reserve(n);
    std::vector<Complex> column(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t r = 0; r < n; ++r) column[r] = unitary(r, k);
        projectors.push_back(ComplexMatrix::outer(column));
    }
    return ProjectiveMeasurement(std::move(projectors));
}

ProjectiveMeasurement ProjectiveMeasurement::computational(std::size_t dim) {
    return from_basis(ComplexMatrix::identity(dim));
}

ProjectiveMeasurement ProjectiveMeasurement::qubit_direction(
    const std::array<double, 3>& direction) {
    const double norm = std::hypot(direction[0], direction[1], direction[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("measurement direction must be a finite nonzero vector");
    }
    ComplexMatrix n_sigma(2, 2);
    for (int k = 0; k < 3; ++k) n_sigma += pauli(k + 1) * Complex(direction[k] / norm);
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return ProjectiveMeasurement({(id + n_sigma) * Complex(0.5), (id - n_sigma) * Complex(0.5)},
                                 {"+1", "-1"});
}

SeparableComponents::SeparableComponents(std::vector<SeparableComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("separable decomposition has no components");
    double total = 0.0;
    for (const auto& c : components_) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw DomainError("separable decomposition: negative or non-finite weight");
        }
        if (c.rhoA.dimension() != dimA() || c.rhoB.dimension() != dimB()) {
            throw ShapeError("separable decomposition: components have mismatched dimensions");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > kWeightTolerance) {
        std::ostringstream msg;
        msg << "separable decomposition: weights sum to " << total;
        throw DomainError(msg.str());
    }
}

JointDistribution::JointDistribution(std::size_t outcomesA, std::size_t outcomesB,
                                     std::vector<double> p)
    : outcomesA_(outcomesA), outcomesB_(outcomesB), p_(std::move(p)) {
    if (p_.size() != outcomesA_ * outcomesB_) throw ShapeError("joint distribution size");
}

std::vector<double> JointDistribution::marginal_a() const {
    std::vector<double> m(outcomesA_, 0.0);
    for (std::size_t a = 0; a < outcomesA_; ++a) {
        for (std::size_t b = 0; b < outcomesB_; ++b) m[a] += (*this)(a, b);
    }
    return m;
}

std::vector<double> JointDistribution::marginal_b() const {
    std::vector<double> m(outcomesB_, 0.0);
    for (std::size_t a = 0; a < outcomesA_; ++a) {
        for (std::size_t b = 0; b < outcomesB_; ++b) m[b] += (*this)(a, b);
    }
    return m;
}

const ComplexMatrix& pauli(int k) {
    static const std::array<ComplexMatrix, 4> matrices = {
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}),
        ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}),
        ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}),
    };
    return matrices.at(static_cast<std::size_t>(k));
}

DensityOperator bloch_state(const std::array<double, 3>& r) {
    ComplexMatrix m = ComplexMatrix::identity(2);
    for (int k = 0; k < 3; ++k) m += pauli(k + 1) * Complex(r[k]);
    m *= 0.5;
    return DensityOperator(std::move(m), 2);
}

std::array<Complex, 4> bell_vector(BellKind kind) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (kind) {
        case BellKind::PhiPlus: return {h, 0.0, 0.0, h};
        case BellKind::PhiMinus: return {h, 0.0, 0.0, -h};
        case BellKind::PsiPlus: return {0.0, h, h, 0.0};
        case BellKind::PsiMinus: return {0.0, h, -h, 0.0};
    }
    throw DomainError("unknown Bell state");
}

DensityOperator bell_state(BellKind kind) {
    // Entries are exactly 0 or +-1/2.
    const auto v = bell_vector(kind);
    ComplexMatrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (v[i] != 0.0 && v[j] != 0.0) {
                m(i, j) = ((v[i].real() > 0) == (v[j].real() > 0)) ? 0.5 : -0.5;
            }
        }
    }
    return DensityOperator(std::move(m), 2, 2);
}

DensityOperator werner_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "Werner parameter " << p << " outside [0, 1]";
        throw DomainError(msg.str());
    }
    ComplexMatrix m = bell_state(BellKind::PsiMinus).matrix() * Complex(p);
    for (std::size_t i = 0; i < 4; ++i) m(i, i) += (1.0 - p) / 4.0;
    return DensityOperator(std::move(m), 2, 2);
}

DensityOperator noisy_pure_state(std::span<const Complex> psi, std::size_t dimA,
                                 std::size_t dimB, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "mixing parameter " << p << " outside [0, 1]";
        throw DomainError(msg.str());
    }
    const std::size_t d = dimA * dimB;
    if (psi.size() != d) throw ShapeError("pure state vector length does not match dims");
    double norm2 = 0.0;
    for (const auto& z : psi) norm2 += std::norm(z);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("pure state vector is zero");
    ComplexMatrix m = ComplexMatrix::outer(psi) * Complex(p / norm2);
    for (std::size_t i = 0; i < d; ++i) m(i, i) += (1.0 - p) / static_cast<double>(d);
    return DensityOperator(std::move(m), dimA, dimB);
}

DensityOperator product_state(const DensityOperator& rhoA, const DensityOperator& rhoB) {
    return DensityOperator(kron(rhoA.matrix(), rhoB.matrix()), rhoA.dimension(),
                           rhoB.dimension());
}

DensityOperator separable_mixture(const SeparableComponents& c) {
    ComplexMatrix m(c.dimA() * c.dimB(), c.dimA() * c.dimB());
    for (const auto& comp : c.components()) {
        m += kron(comp.rhoA.matrix(), comp.rhoB.matrix()) * Complex(comp.weight);
    }
    return DensityOperator(std::move(m), c.dimA(), c.dimB());
}

DensityOperator random_density(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw DomainError("random_density: dim must be positive");
    Rng rng(seed);
    std::vector<Complex> g(dim * dim);
    for (auto& z : g) {
        const double re = rng.normal();
        const double im = rng.normal();
        z = Complex(re, im);
    }
    const ComplexMatrix gm(dim, dim, std::move(g));
    ComplexMatrix m = gm * gm.adjoint();
    // Exact hermiticity: the product is Hermitian only up to round-off.
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) m(j, i) = std::conj(m(i, j));
    }
    m *= 1.0 / m.trace().real();
    return DensityOperator(std::move(m), dim);
}

ProjectiveMeasurement random_measurement(std::size_t dim, Rng& rng) {
    ComplexMatrix u(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            u(r, c) = Complex(re, im);
        }
    }
    // Modified Gram-Schmidt over the columns.
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            Complex overlap = 0.0;
            for (std::size_t r = 0; r < dim; ++r) overlap += std::conj(u(r, j)) * u(r, k);
            for (std::size_t r = 0; r < dim; ++r) u(r, k) -= overlap * u(r, j);
        }
        double norm2 = 0.0;
        for (std::size_t r = 0; r < dim; ++r) norm2 += std::norm(u(r, k));
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < dim; ++r) u(r, k) *= inv;
    }
    return ProjectiveMeasurement::from_basis(u);
}

std::array<double, 3> random_direction(Rng& rng) {
    for (;;) {
        std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
        const double n = std::hypot(v[0], v[1], v[2]);
        if (n > 1e-12) return {v[0] / n, v[1] / n, v[2] / n};
    }
}

std::vector<double> random_weights(std::size_t n, Rng& rng) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    if (!(total > 0.0)) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    for (auto& x : w) x /= total;
    return w;
}

SeparableComponents random_separable_components(std::size_t n, std::size_t dimA,
                                                std::size_t dimB, std::uint64_t seed) {
    Rng rng(seed);
    const auto weights = random_weights(n, rng);
    std::vector<SeparableComponent> comps;
    comps.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        comps.push_back({weights[k], random_density(dimA, derive_seed(seed, 2 * k)),
                         random_density(dimB, derive_seed(seed, 2 * k + 1))});
    }
    return SeparableComponents(std::move(comps));
}

JointDistribution joint_probabilities(const DensityOperator& rho,
                                      const ProjectiveMeasurement& measA,
                                      const ProjectiveMeasurement& measB) {
    if (measA.dim() != rho.dimA() || measB.dim() != rho.dimB()) {
        std::ostringstream msg;
        msg << "joint_probabilities: measurement dims " << measA.dim() << "x" << measB.dim()
            << " vs state dims " << rho.dimA() << "x" << rho.dimB();
        throw ShapeError(msg.str());
    }
    std::vector<double> p(measA.outcomes() * measB.outcomes());
    double total = 0.0;
    for (std::size_t a = 0; a < measA.outcomes(); ++a) {
        for (std::size_t b = 0; b < measB.outcomes(); ++b) {
            double v =
                trace_of_product(rho.matrix(), kron(measA.projector(a), measB.projector(b)))
                    .real();
            if (v < 0.0) {
                if (v < -kClampTolerance) {
                    std::ostringstream msg;
                    msg << "negative probability " << v << " for outcome (" << a << ", " << b
                        << ")";
                    throw NumericError(msg.str());
                }
                v = 0.0;
            }
            p[a * measB.outcomes() + b] = v;
            total += v;
        }
    }
    if (std::abs(total - 1.0) > kTotalTolerance) {
        std::ostringstream msg;
        msg << "joint probabilities sum to " << total;
        throw NumericError(msg.str());
    }
    return JointDistribution(measA.outcomes(), measB.outcomes(), std::move(p));
}

DensityOperator reduced_state(const DensityOperator& rho, Party keep) {
    if (!rho.is_bipartite()) throw ShapeError("reduced_state needs a bipartite state");
    const Party traced = keep == Party::A ? Party::B : Party::A;
    ComplexMatrix m = partial_trace(rho.matrix(), rho.dimA(), rho.dimB(), traced);
    const std::size_t d = keep == Party::A ? rho.dimA() : rho.dimB();
    return DensityOperator(std::move(m), d);
}

double verify_mixture_equality(const SeparableComponents& c,
                               const ProjectiveMeasurement& measA,
                               const ProjectiveMeasurement& measB) {
    const DensityOperator rho = separable_mixture(c);
    if (measA.dim() != rho.dimA() || measB.dim() != rho.dimB()) {
        throw ShapeError("verify_mixture_equality: measurement dims do not match components");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < measA.outcomes(); ++i) {
        for (std::size_t j = 0; j < measB.outcomes(); ++j) {
            const double lhs =
                trace_of_product(rho.matrix(), kron(measA.projector(i), measB.projector(j)))
                    .real();
            double rhs = 0.0;
            for (const auto& comp : c.components()) {
                rhs += comp.weight *
                       trace_of_product(comp.rhoA.matrix(), measA.projector(i)).real() *
                       trace_of_product(comp.rhoB.matrix(), measB.projector(j)).real();
            }
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace qlocality
