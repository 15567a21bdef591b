#include "qlocality/separability.hpp"

#include <cmath>
#include <functional>
#include <utility>
#include <sstream>

#include "qlocality/errors.hpp"

namespace qlocality {

namespace {

// Verdict tolerance inside the threshold searches; keeps the bias far below any useful tol.
constexpr double kThresholdVerdictTol = 1e-12;

constexpr const char* kScanCaveat =
    "lhv_verdict is evaluated at the two CHSH-optimal settings per party only; feasibility at "
    "finitely many settings does not certify a local model for all measurements";

double bisect(double lo, double hi, double tol, const std::function<bool(double)>& above) {
    if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
    for (int step = 0; step < kMaxBisectionSteps && hi - lo > tol; ++step) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PptReport ppt_test(const DensityOperator& rho, double tol) {
    if (!rho.is_bipartite()) throw ShapeError("ppt_test needs a bipartite state");
    const auto pt = partial_transpose(rho.matrix(), rho.dimA(), rho.dimB(), Party::B);
    PptReport report;
    report.dimA = rho.dimA();
    report.dimB = rho.dimB();
    report.min_eigenvalue = hermitian_eigenvalues(pt, std::max(tol, kDefaultTolerance)).front();
    if (report.min_eigenvalue < -tol) {
        report.verdict = PptVerdict::Entangled;
    } else if (rho.dimension() <= 6) {
        report.verdict = PptVerdict::Separable;
    } else {
        report.verdict = PptVerdict::Inconclusive;
    }
    return report;
}

DecompositionCheck verify_separable_decomposition(const DensityOperator& rho,
                                                  const SeparableComponents& c, double tol) {
    if (rho.dimA() != c.dimA() || rho.dimB() != c.dimB()) {
        std::ostringstream msg;
        msg << "decomposition dims " << c.dimA() << "x" << c.dimB() << " vs state dims "
            << rho.dimA() << "x" << rho.dimB();
        throw ShapeError(msg.str());
    }
    ComplexMatrix sum(rho.dimension(), rho.dimension());
    for (const auto& comp : c.components()) {
        sum += kron(comp.rhoA.matrix(), comp.rhoB.matrix()) * Complex(comp.weight);
    }
    DecompositionCheck check;
    check.residual = max_abs_diff(rho.matrix(), sum);
    check.certified = check.residual <= tol;
    return check;
}

double werner_ppt_threshold(double tol) {
    return bisect(0.0, 1.0, tol, [](double p) {
        return ppt_test(werner_state(p), kThresholdVerdictTol).verdict == PptVerdict::Entangled;
    });
}

double werner_chsh_threshold(double tol) {
    return bisect(0.0, 1.0, tol, [](double p) { return chsh_max(werner_state(p)) > 2.0; });
}

StateFamily::StateFamily(std::string name, std::vector<Complex> psi)
    : name_(std::move(name)), psi_(std::move(psi)) {
    if (psi_.size() != 4) throw ShapeError("state families are defined over two qubits");
    double norm2 = 0.0;
    for (const auto& z : psi_) norm2 += std::norm(z);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("family pure state is zero");
    for (auto& z : psi_) z /= std::sqrt(norm2);
}

StateFamily StateFamily::werner() {
    const auto v = bell_vector(BellKind::PsiMinus);
    StateFamily f("werner", std::vector<Complex>(v.begin(), v.end()));
    f.werner_ = true;
    return f;
}

StateFamily StateFamily::noisy_pure(std::vector<Complex> psi, std::string name) {
    return StateFamily(std::move(name), std::move(psi));
}

DensityOperator StateFamily::at(double p) const {
    if (werner_) return werner_state(p);
    return noisy_pure_state(psi_, 2, 2, p);
}

Regime classify(const DensityOperator& rho, double tol) {
    if (ppt_test(rho, tol).verdict != PptVerdict::Entangled) return Regime::Separable;
    return chsh_max(rho) > 2.0 + tol ? Regime::EntangledChshViolating
                                     : Regime::EntangledLocalChsh;
}

ScanResult scan_family(const StateFamily& family, std::span<const double> grid,
                       const ScanOptions& options) {
    if (grid.empty()) throw DomainError("scan grid is empty");
    for (double p : grid) {
        if (!(p >= 0.0 && p <= 1.0)) {
            std::ostringstream msg;
            msg << "grid value " << p << " outside [0, 1]";
            throw DomainError(msg.str());
        }
    }
    ScanResult result;
    result.family = family.name();
    result.caveat = kScanCaveat;
    result.rows.reserve(grid.size());
    for (double p : grid) {
        const DensityOperator rho = family.at(p);
        ScanRow row;
        row.parameter = p;
        row.ppt = ppt_test(rho, options.tol);
        const ChshOptimum opt = chsh_optimum(rho);
        row.chsh_max = opt.value;
        const auto measA = opt.measurementsA();
        const auto measB = opt.measurementsB();
        const LhvResult lhv = lhv_membership(behavior_from_state(rho, measA, measB));
        row.lhv_verdict = lhv.verdict;
        row.lhv_evidence = lhv.verdict == LhvVerdict::Feasible ? lhv.reconstruction_error : lhv.gap;
        if (row.ppt.verdict != PptVerdict::Entangled) {
            row.regime = Regime::Separable;
        } else {
            row.regime = row.chsh_max > 2.0 + options.tol ? Regime::EntangledChshViolating
                                                          : Regime::EntangledLocalChsh;
        }
        result.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
        const ScanRow& lo = result.rows[i];
        const ScanRow& hi = result.rows[i + 1];
        if (lo.regime == hi.regime) continue;
        double left = lo.parameter;
        double right = hi.parameter;
        Regime base = lo.regime;
        if (left > right) {
            std::swap(left, right);
            base = hi.regime;
        }
        const double estimate = bisect(left, right, options.boundary_tol, [&](double p) {
            return classify(family.at(p), options.tol) != base;
        });
        result.boundaries.push_back({lo.regime, hi.regime, lo.parameter, hi.parameter, estimate});
    }
    return result;
}

const char* to_string(PptVerdict v) {
    switch (v) {
        case PptVerdict::Separable: return "separable";
        case PptVerdict::Entangled: return "entangled";
        case PptVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Separable: return "separable";
        case Regime::EntangledLocalChsh: return "entangled-local-CHSH";
        case Regime::EntangledChshViolating: return "entangled-CHSH-violating";
    }
    return "?";
}

const char* to_string(LhvVerdict v) {
    return v == LhvVerdict::Feasible ? "feasible" : "infeasible";
}

}  // namespace qlocality
