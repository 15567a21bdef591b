#pragma once

#include <span>
#include <string>
#include <vector>

#include "qlocality/locality.hpp"
#include "qlocality/quantum.hpp"

namespace qlocality {

enum class PptVerdict { Separable, Entangled, Inconclusive };

struct PptReport {
    double min_eigenvalue = 0.0;
    PptVerdict verdict = PptVerdict::Inconclusive;
    std::size_t dimA = 0;
    std::size_t dimB = 0;
};

// Partial transpose on B. Positive partial transpose decides separability only when
// dimA * dimB <= 6; larger PPT states are reported inconclusive.
PptReport ppt_test(const DensityOperator& rho, double tol = kDefaultTolerance);

struct DecompositionCheck {
    double residual = 0.0;  // max |rho - sum w rhoA (x) rhoB|
    bool certified = false; // residual <= tol
};

DecompositionCheck verify_separable_decomposition(const DensityOperator& rho,
                                                  const SeparableComponents& c,
                                                  double tol = 1e-10);

inline constexpr int kMaxBisectionSteps = 60;

// Bisection on the Werner parameter; results lie within `tol` of the PPT boundary and the
// CHSH boundary respectively.
double werner_ppt_threshold(double tol);
double werner_chsh_threshold(double tol);

// p |psi><psi| + (1 - p) I/4 over two qubits. The Werner family uses the singlet.
class StateFamily {
public:
    static StateFamily werner();
    static StateFamily noisy_pure(std::vector<Complex> psi, std::string name = "noisy-pure");

    const std::string& name() const { return name_; }
    const std::vector<Complex>& pure_state() const { return psi_; }
    DensityOperator at(double p) const;

private:
    StateFamily(std::string name, std::vector<Complex> psi);

    std::string name_;
    std::vector<Complex> psi_;
    bool werner_ = false;
};

enum class Regime { Separable, EntangledLocalChsh, EntangledChshViolating };

struct ScanRow {
    double parameter = 0.0;
    PptReport ppt;
    double chsh_max = 0.0;
    LhvVerdict lhv_verdict = LhvVerdict::Feasible;
    // Dual gap when infeasible, reconstruction error when feasible.
    double lhv_evidence = 0.0;
    Regime regime = Regime::Separable;
};

struct RegimeBoundary {
    Regime below;
    Regime above;
    double lower_grid;
    double upper_grid;
    double estimate;  // bisection between the two grid points
};

struct ScanResult {
    std::string family;
    std::vector<ScanRow> rows;
    std::vector<RegimeBoundary> boundaries;
    // Attached to every scan: the LHV column only covers the CHSH-optimal settings.
    std::string caveat;
};

struct ScanOptions {
    double tol = kDefaultTolerance;
    double boundary_tol = 1e-6;
};

Regime classify(const DensityOperator& rho, double tol = kDefaultTolerance);

ScanResult scan_family(const StateFamily& family, std::span<const double> grid,
                       const ScanOptions& options = {});

const char* to_string(PptVerdict v);
const char* to_string(Regime r);
const char* to_string(LhvVerdict v);

}  // namespace qlocality
