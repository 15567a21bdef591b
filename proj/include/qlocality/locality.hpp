#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qlocality/quantum.hpp"

namespace qlocality {

inline constexpr std::size_t kMaxStrategies = 1'000'000;

// Number of settings and outcomes per party. Outcome counts are uniform across settings.
struct Scenario {
    std::size_t settingsA = 2;
    std::size_t settingsB = 2;
    std::size_t outcomesA = 2;
    std::size_t outcomesB = 2;

    // Throws ShapeError on degenerate counts and SizeError past kMaxStrategies.
    void validate() const;
    std::size_t strategy_count() const;
    // Length of the flattened (x, y, a, b) table.
    std::size_t table_size() const { return settingsA * settingsB * outcomesA * outcomesB; }
    std::size_t index(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
        return ((x * settingsB + y) * outcomesA + a) * outcomesB + b;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// The two-setting, two-outcome scenario the CHSH functions expect.
inline constexpr Scenario kChshScenario{2, 2, 2, 2};

// P(a, b | x, y), flattened by Scenario::index.
class BehaviorTable {
public:
    BehaviorTable(Scenario scenario, std::vector<double> p);

    const Scenario& scenario() const { return scenario_; }
    std::span<const double> values() const { return p_; }
    double operator()(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
        return p_[scenario_.index(x, y, a, b)];
    }
    JointDistribution joint(std::size_t x, std::size_t y) const;
    // Uniform P(a, b | x, y) = 1 / (outcomesA * outcomesB).
    static BehaviorTable uniform(const Scenario& s);

private:
    Scenario scenario_;
    std::vector<double> p_;
};

// A finite set of common causes mu with probability weights[mu], and per-cause local
// response tables responseA[mu][x][a] = P(a | x, mu), responseB[mu][y][b] = P(b | y, mu).
class LocalModel {
public:
    using Response = std::vector<std::vector<double>>;

    LocalModel(Scenario scenario, std::vector<double> weights, std::vector<Response> responseA,
               std::vector<Response> responseB);

    const Scenario& scenario() const { return scenario_; }
    std::size_t causes() const { return weights_.size(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Response>& responseA() const { return responseA_; }
    const std::vector<Response>& responseB() const { return responseB_; }

private:
    Scenario scenario_;
    std::vector<double> weights_;
    std::vector<Response> responseA_;
    std::vector<Response> responseB_;
};

// Random model with `causes` causes and random (generally non-deterministic) responses.
LocalModel random_local_model(const Scenario& s, std::size_t causes, std::uint64_t seed);

// A point-mass cause: outcomesA[x] for every x, outcomesB[y] for every y.
struct DeterministicStrategy {
    std::vector<std::size_t> outcomesA;
    std::vector<std::size_t> outcomesB;
};

// Strategy number `index` in enumeration order: the A-assignment is the slow index, and within
// each assignment setting 0 is the most significant digit.
DeterministicStrategy strategy_at(const Scenario& s, std::size_t index);
BehaviorTable strategy_behavior(const Scenario& s, const DeterministicStrategy& d);
std::vector<BehaviorTable> enumerate_deterministic_strategies(const Scenario& s);

BehaviorTable behavior_from_state(const DensityOperator& rho,
                                  std::span<const ProjectiveMeasurement> measA,
                                  std::span<const ProjectiveMeasurement> measB);

// max |P(a,b) - P(a) P(b)|. Marginals off by more than 1e-8 raise ConsistencyError.
double factorization_residual(const JointDistribution& joint, std::span<const double> margA,
                              std::span<const double> margB);

BehaviorTable mix_local_model(const LocalModel& model);

enum class LhvVerdict { Feasible, Infeasible };

// c . p <= bound holds for every local behavior p.
struct LinearFunctional {
    std::vector<double> coefficients;
    double bound = 0.0;

    double evaluate(std::span<const double> p) const;
};

struct LhvResult {
    LhvVerdict verdict = LhvVerdict::Feasible;
    // Weights over deterministic strategies in enumeration order (feasible only).
    std::vector<double> weights;
    double reconstruction_error = 0.0;
    // Separating inequality (infeasible only); bound re-verified over every vertex.
    LinearFunctional dual;
    // c . p - bound for the tested behavior (infeasible only).
    double gap = 0.0;
    double phase_one_objective = 0.0;
    std::size_t pivots = 0;
};

inline constexpr double kLpTolerance = 1e-9;
inline constexpr double kCertificateTolerance = 1e-8;

// Phase-1 simplex (Bland's rule) over the deterministic-strategy weights. The verdict always
// rests on an independently checked certificate; when neither certificate can be produced a
// NumericError is raised instead.
LhvResult lhv_membership(const BehaviorTable& b, double tol = kLpTolerance);

// D . weights, evaluated from the strategy enumeration.
std::vector<double> reconstruct_from_strategies(const Scenario& s, std::span<const double> weights);

// S = E(0,0) + E(0,1) + E(1,0) - E(1,1); outcome 0 maps to +1, outcome 1 to -1.
double chsh_value(const BehaviorTable& b);
double correlator(const BehaviorTable& b, std::size_t x, std::size_t y);

// The eight CHSH expressions: +-E00 +-E01 +-E10 +-E11 with an odd number of minus signs.
std::array<double, 8> chsh_symmetrizations(const BehaviorTable& b);

// T_kl = Tr(rho sigma_k (x) sigma_l), row-major 3x3.
std::array<double, 9> correlation_matrix(const DensityOperator& rho);

struct ChshOptimum {
    double value = 0.0;
    std::array<std::array<double, 3>, 2> directionsA{};
    std::array<std::array<double, 3>, 2> directionsB{};

    std::vector<ProjectiveMeasurement> measurementsA() const;
    std::vector<ProjectiveMeasurement> measurementsB() const;
};

// 2 sqrt(t1 + t2) from the two largest eigenvalues of T^T T, plus the settings attaining it.
ChshOptimum chsh_optimum(const DensityOperator& rho);
double chsh_max(const DensityOperator& rho);

// Largest dependence of one party's marginal on the other party's setting.
double no_signaling_residual(const BehaviorTable& b);

struct SampleResult {
    Scenario scenario;
    std::uint64_t trials = 0;
    // counts[Scenario::index(x, y, a, b)]
    std::vector<std::uint64_t> counts;
    // trials_per_setting[x * settingsB + y]
    std::vector<std::uint64_t> trials_per_setting;
    // Setting pairs never scheduled; their frequencies are left at zero.
    std::vector<std::pair<std::size_t, std::size_t>> missing;
    std::vector<double> frequencies;

    bool complete() const { return missing.empty(); }
    // Throws DomainError when a setting pair is missing.
    BehaviorTable empirical() const;
};

inline constexpr std::size_t kSampleChunk = 1 << 16;

// Round-robin over all (x, y) in row-major order.
std::vector<std::pair<std::size_t, std::size_t>> default_schedule(const Scenario& s);

// Trial t uses schedule[t % schedule.size()]. Trials are processed in chunks of kSampleChunk;
// chunk k draws from Rng(derive_seed(seed, k)) so any partition of chunks over `workers`
// threads yields identical counts. Per trial: mu, then a, then b by inverse CDF, one uniform
// each.
SampleResult sample_local_model(const LocalModel& model, std::uint64_t n, std::uint64_t seed,
                                std::span<const std::pair<std::size_t, std::size_t>> schedule,
                                unsigned workers = 1);

}  // namespace qlocality
