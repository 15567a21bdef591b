#include "qlocality/locality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "qlocality/errors.hpp"

namespace qlocality {

namespace {

constexpr double kEntryTolerance = 1e-12;
constexpr double kNormTolerance = 1e-10;
constexpr double kModelTolerance = 1e-12;
constexpr double kMarginalTolerance = 1e-8;
constexpr double kPivotEpsilon = 1e-12;

std::size_t checked_power(std::size_t base, std::size_t exponent) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < exponent; ++k) {
        if (r > kMaxStrategies / base) {
            throw SizeError("deterministic strategy count exceeds the 1e6 guard");
        }
        r *= base;
    }
    return r;
}

double outcome_sign(std::size_t outcome) { return outcome == 0 ? 1.0 : -1.0; }

void require_chsh_scenario(const BehaviorTable& b) {
    if (b.scenario() != kChshScenario) {
        throw ShapeError("CHSH needs two settings and two outcomes on each side");
    }
}

void check_distribution(std::span<const double> row, const char* what) {
    double total = 0.0;
    for (double v : row) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError(std::string(what) + ": negative or non-finite probability");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > kModelTolerance) {
        std::ostringstream msg;
        msg << what << ": probabilities sum to " << total;
        throw DomainError(msg.str());
    }
}

void check_response(const std::vector<LocalModel::Response>& response, std::size_t causes,
                    std::size_t settings, std::size_t outcomes, const char* what) {
    if (response.size() != causes) {
        throw ShapeError(std::string(what) + ": one response table per cause required");
    }
    for (const auto& table : response) {
        if (table.size() != settings) throw ShapeError(std::string(what) + ": settings count");
        for (const auto& row : table) {
            if (row.size() != outcomes) throw ShapeError(std::string(what) + ": outcome count");
            check_distribution(row, what);
        }
    }
}

std::vector<double> random_response_row(std::size_t outcomes, Rng& rng) {
    // Half of the rows are point masses so that models land on faces of the polytope too.
    if (rng.uniform() < 0.5) {
        std::vector<double> row(outcomes, 0.0);
        row[static_cast<std::size_t>(rng.uniform() * static_cast<double>(outcomes))] = 1.0;
        return row;
    }
    return random_weights(outcomes, rng);
}

// Cumulative table whose tail from the last positive entry on is pushed above 1, so that
// uniform draws in [0, 1) never fall off the end.
std::vector<double> sampling_cdf(std::span<const double> probabilities) {
    std::vector<double> cdf(probabilities.size());
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        acc += probabilities[k];
        cdf[k] = acc;
        if (probabilities[k] > 0.0) last_positive = k;
    }
    for (std::size_t k = last_positive; k < cdf.size(); ++k) cdf[k] = 2.0;
    return cdf;
}

std::size_t draw(const std::vector<double>& cdf, double u) {
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        if (u < cdf[k]) return k;
    }
    return cdf.size() - 1;
}

// Dense phase-1 tableau for  D q + s = p,  1.q + s0 = 1,  q, s >= 0,  minimise sum(s).
class PhaseOneTableau {
public:
    PhaseOneTableau(const Scenario& s, std::span<const double> p)
        : rows_(s.table_size() + 1),
          structural_(s.strategy_count()),
          cols_(structural_ + rows_),
          width_(cols_ + 1),
          cells_(rows_ * width_, 0.0),
          objective_(width_, 0.0),
          basis_(rows_),
          signs_(rows_, 1.0) {
        for (std::size_t j = 0; j < structural_; ++j) {
            const auto d = strategy_at(s, j);
            for (std::size_t x = 0; x < s.settingsA; ++x) {
                for (std::size_t y = 0; y < s.settingsB; ++y) {
                    at(s.index(x, y, d.outcomesA[x], d.outcomesB[y]), j) = 1.0;
                }
            }
            at(rows_ - 1, j) = 1.0;
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            double rhs = i + 1 < rows_ ? p[i] : 1.0;
            if (rhs < 0.0) {
                signs_[i] = -1.0;
                for (std::size_t j = 0; j < structural_; ++j) at(i, j) = -at(i, j);
                rhs = -rhs;
            }
            at(i, structural_ + i) = 1.0;
            at(i, cols_) = rhs;
            basis_[i] = structural_ + i;
        }
        // Reduced costs with every artificial basic at cost one.
        for (std::size_t j = 0; j < width_; ++j) {
            if (j >= structural_ && j < cols_) continue;
            double sum = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) sum += at(i, j);
            objective_[j] = -sum;
        }
    }

    // Returns the number of pivots performed.
    std::size_t solve(double tol) {
        const std::size_t cap = 50 * (rows_ + cols_);
        std::size_t pivots = 0;
        for (;;) {
            std::size_t entering = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (objective_[j] < -tol) {
                    entering = j;
                    break;
                }
            }
            if (entering == cols_) return pivots;

            std::size_t leaving = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, entering);
                if (a <= kPivotEpsilon) continue;
                const double ratio = at(i, cols_) / a;
                if (leaving == rows_ || ratio < best - 1e-15) {
                    best = ratio;
                    leaving = i;
                } else if (ratio <= best + 1e-15 && basis_[i] < basis_[leaving]) {
                    best = std::min(best, ratio);
                    leaving = i;
                }
            }
            if (leaving == rows_) {
                // Unbounded direction cannot occur: the objective is bounded below by zero.
                throw NumericError("phase-1 simplex found no leaving row");
            }
            pivot(leaving, entering);
            if (++pivots > cap) {
                std::ostringstream msg;
                msg << "phase-1 simplex exceeded " << cap << " pivots";
                throw NumericError(msg.str());
            }
        }
    }

    double objective_value() const { return -objective_[cols_]; }

    std::vector<double> weights() const {
        std::vector<double> q(structural_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < structural_) q[basis_[i]] = std::max(0.0, at(i, cols_));
        }
        return q;
    }

    // Simplex multipliers in the original (unflipped) row orientation.
    std::vector<double> duals() const {
        std::vector<double> y(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            y[i] = signs_[i] * (1.0 - objective_[structural_ + i]);
        }
        return y;
    }

private:
    double& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }

    void pivot(std::size_t row, std::size_t col) {
        const double inv = 1.0 / at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) *= inv;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        const double f = objective_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) objective_[j] -= f * at(row, j);
            objective_[col] = 0.0;
        }
        basis_[row] = col;
    }

    std::size_t rows_;
    std::size_t structural_;
    std::size_t cols_;
    std::size_t width_;
    std::vector<double> cells_;
    std::vector<double> objective_;
    std::vector<std::size_t> basis_;
    std::vector<double> signs_;
};

double strategy_score(const Scenario& s, const DeterministicStrategy& d,
                      std::span<const double> c) {
    double v = 0.0;
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            v += c[s.index(x, y, d.outcomesA[x], d.outcomesB[y])];
        }
    }
    return v;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace

void Scenario::validate() const {
    if (settingsA < 1 || settingsB < 1) throw ShapeError("scenario needs at least one setting");
    if (outcomesA < 2 || outcomesB < 2) throw ShapeError("scenario needs at least two outcomes");
    (void)strategy_count();
}

std::size_t Scenario::strategy_count() const {
    const std::size_t a = checked_power(outcomesA, settingsA);
    const std::size_t b = checked_power(outcomesB, settingsB);
    if (a > kMaxStrategies / b) throw SizeError("deterministic strategy count exceeds the 1e6 guard");
    return a * b;
}

BehaviorTable::BehaviorTable(Scenario scenario, std::vector<double> p)
    : scenario_(scenario), p_(std::move(p)) {
    scenario_.validate();
    if (p_.size() != scenario_.table_size()) {
        std::ostringstream msg;
        msg << "behavior table has " << p_.size() << " entries, scenario needs "
            << scenario_.table_size();
        throw ShapeError(msg.str());
    }
    for (double v : p_) {
        if (!std::isfinite(v) || v < -kEntryTolerance || v > 1.0 + kEntryTolerance) {
            throw DomainError("behavior entry outside [0, 1]");
        }
    }
    for (std::size_t x = 0; x < scenario_.settingsA; ++x) {
        for (std::size_t y = 0; y < scenario_.settingsB; ++y) {
            double total = 0.0;
            for (std::size_t a = 0; a < scenario_.outcomesA; ++a) {
                for (std::size_t b = 0; b < scenario_.outcomesB; ++b) total += (*this)(x, y, a, b);
            }
            if (std::abs(total - 1.0) > kNormTolerance) {
                std::ostringstream msg;
                msg << "behavior for settings (" << x << ", " << y << ") sums to " << total;
                throw DomainError(msg.str());
            }
        }
    }
}

JointDistribution BehaviorTable::joint(std::size_t x, std::size_t y) const {
    std::vector<double> p(scenario_.outcomesA * scenario_.outcomesB);
    for (std::size_t a = 0; a < scenario_.outcomesA; ++a) {
        for (std::size_t b = 0; b < scenario_.outcomesB; ++b) {
            p[a * scenario_.outcomesB + b] = (*this)(x, y, a, b);
        }
    }
    return JointDistribution(scenario_.outcomesA, scenario_.outcomesB, std::move(p));
}

BehaviorTable BehaviorTable::uniform(const Scenario& s) {
    s.validate();
    return BehaviorTable(s, std::vector<double>(s.table_size(),
                                                1.0 / static_cast<double>(s.outcomesA * s.outcomesB)));
}

LocalModel::LocalModel(Scenario scenario, std::vector<double> weights,
                       std::vector<Response> responseA, std::vector<Response> responseB)
    : scenario_(scenario),
      weights_(std::move(weights)),
      responseA_(std::move(responseA)),
      responseB_(std::move(responseB)) {
    scenario_.validate();
    if (weights_.empty()) throw DomainError("local model needs at least one cause");
    check_distribution(weights_, "cause weights");
    check_response(responseA_, weights_.size(), scenario_.settingsA, scenario_.outcomesA,
                   "response A");
    check_response(responseB_, weights_.size(), scenario_.settingsB, scenario_.outcomesB,
                   "response B");
}

LocalModel random_local_model(const Scenario& s, std::size_t causes, std::uint64_t seed) {
    Rng rng(seed);
    auto weights = random_weights(causes, rng);
    std::vector<LocalModel::Response> ra(causes), rb(causes);
    for (std::size_t mu = 0; mu < causes; ++mu) {
        for (std::size_t x = 0; x < s.settingsA; ++x) ra[mu].push_back(random_response_row(s.outcomesA, rng));
        for (std::size_t y = 0; y < s.settingsB; ++y) rb[mu].push_back(random_response_row(s.outcomesB, rng));
    }
    return LocalModel(s, std::move(weights), std::move(ra), std::move(rb));
}

DeterministicStrategy strategy_at(const Scenario& s, std::size_t index) {
    const std::size_t countB = checked_power(s.outcomesB, s.settingsB);
    if (index >= s.strategy_count()) throw DomainError("strategy index out of range");
    std::size_t ia = index / countB;
    std::size_t ib = index % countB;
    DeterministicStrategy d{std::vector<std::size_t>(s.settingsA),
                            std::vector<std::size_t>(s.settingsB)};
    for (std::size_t k = s.settingsA; k-- > 0;) {
        d.outcomesA[k] = ia % s.outcomesA;
        ia /= s.outcomesA;
    }
    for (std::size_t k = s.settingsB; k-- > 0;) {
        d.outcomesB[k] = ib % s.outcomesB;
        ib /= s.outcomesB;
    }
    return d;
}

BehaviorTable strategy_behavior(const Scenario& s, const DeterministicStrategy& d) {
    std::vector<double> p(s.table_size(), 0.0);
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            p[s.index(x, y, d.outcomesA.at(x), d.outcomesB.at(y))] = 1.0;
        }
    }
    return BehaviorTable(s, std::move(p));
}

std::vector<BehaviorTable> enumerate_deterministic_strategies(const Scenario& s) {
    s.validate();
    const std::size_t n = s.strategy_count();
    std::vector<BehaviorTable> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(strategy_behavior(s, strategy_at(s, j)));
    return out;
}

BehaviorTable behavior_from_state(const DensityOperator& rho,
                                  std::span<const ProjectiveMeasurement> measA,
                                  std::span<const ProjectiveMeasurement> measB) {
    if (measA.empty() || measB.empty()) throw ShapeError("need at least one setting per party");
    const Scenario s{measA.size(), measB.size(), measA.front().outcomes(),
                     measB.front().outcomes()};
    for (const auto& m : measA) {
        if (m.outcomes() != s.outcomesA) throw ShapeError("party A outcome counts differ");
    }
    for (const auto& m : measB) {
        if (m.outcomes() != s.outcomesB) throw ShapeError("party B outcome counts differ");
    }
    s.validate();
    std::vector<double> p(s.table_size());
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            const auto joint = joint_probabilities(rho, measA[x], measB[y]);
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                for (std::size_t b = 0; b < s.outcomesB; ++b) p[s.index(x, y, a, b)] = joint(a, b);
            }
        }
    }
    return BehaviorTable(s, std::move(p));
}

double factorization_residual(const JointDistribution& joint, std::span<const double> margA,
                              std::span<const double> margB) {
    if (margA.size() != joint.outcomesA() || margB.size() != joint.outcomesB()) {
        throw ShapeError("factorization_residual: marginal lengths do not match the joint");
    }
    const auto ma = joint.marginal_a();
    const auto mb = joint.marginal_b();
    const double mismatch = std::max(max_abs_diff(ma, margA), max_abs_diff(mb, margB));
    if (mismatch > kMarginalTolerance) {
        std::ostringstream msg;
        msg << "marginals differ from the joint distribution by " << mismatch;
        throw ConsistencyError(msg.str());
    }
    double r = 0.0;
    for (std::size_t a = 0; a < joint.outcomesA(); ++a) {
        for (std::size_t b = 0; b < joint.outcomesB(); ++b) {
            r = std::max(r, std::abs(joint(a, b) - margA[a] * margB[b]));
        }
    }
    return r;
}

BehaviorTable mix_local_model(const LocalModel& model) {
    const Scenario& s = model.scenario();
    std::vector<double> p(s.table_size(), 0.0);
    for (std::size_t mu = 0; mu < model.causes(); ++mu) {
        const double w = model.weights()[mu];
        if (w == 0.0) continue;
        const auto& ra = model.responseA()[mu];
        const auto& rb = model.responseB()[mu];
        for (std::size_t x = 0; x < s.settingsA; ++x) {
            for (std::size_t y = 0; y < s.settingsB; ++y) {
                for (std::size_t a = 0; a < s.outcomesA; ++a) {
                    for (std::size_t b = 0; b < s.outcomesB; ++b) {
                        p[s.index(x, y, a, b)] += w * ra[x][a] * rb[y][b];
                    }
                }
            }
        }
    }
    return BehaviorTable(s, std::move(p));
}

double LinearFunctional::evaluate(std::span<const double> p) const {
    if (p.size() != coefficients.size()) throw ShapeError("functional length mismatch");
    return std::inner_product(coefficients.begin(), coefficients.end(), p.begin(), 0.0);
}

std::vector<double> reconstruct_from_strategies(const Scenario& s,
                                                std::span<const double> weights) {
    if (weights.size() != s.strategy_count()) throw ShapeError("one weight per strategy required");
    std::vector<double> p(s.table_size(), 0.0);
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0.0) continue;
        const auto d = strategy_at(s, j);
        for (std::size_t x = 0; x < s.settingsA; ++x) {
            for (std::size_t y = 0; y < s.settingsB; ++y) {
                p[s.index(x, y, d.outcomesA[x], d.outcomesB[y])] += weights[j];
            }
        }
    }
    return p;
}

LhvResult lhv_membership(const BehaviorTable& b, double tol) {
    const Scenario& s = b.scenario();
    PhaseOneTableau tableau(s, b.values());
    LhvResult result;
    result.pivots = tableau.solve(tol);
    result.phase_one_objective = tableau.objective_value();

    auto feasible_certificate = [&]() -> bool {
        auto q = tableau.weights();
        const auto p = reconstruct_from_strategies(s, q);
        const double err = max_abs_diff(p, b.values());
        if (err > kCertificateTolerance) return false;
        result.verdict = LhvVerdict::Feasible;
        result.weights = std::move(q);
        result.reconstruction_error = err;
        return true;
    };

    if (result.phase_one_objective <= tol && feasible_certificate()) return result;

    const auto y = tableau.duals();
    LinearFunctional dual{std::vector<double>(y.begin(), y.end() - 1), 0.0};
    double bound = -std::numeric_limits<double>::infinity();
    const std::size_t n = s.strategy_count();
    for (std::size_t j = 0; j < n; ++j) {
        bound = std::max(bound, strategy_score(s, strategy_at(s, j), dual.coefficients));
    }
    dual.bound = bound;
    const double gap = dual.evaluate(b.values()) - bound;
    if (gap > kCertificateTolerance) {
        result.verdict = LhvVerdict::Infeasible;
        result.dual = std::move(dual);
        result.gap = gap;
        return result;
    }
    if (feasible_certificate()) return result;

    std::ostringstream msg;
    msg << "LHV membership undecided: phase-1 objective " << result.phase_one_objective
        << ", verified dual gap " << gap;
    throw NumericError(msg.str());
}

double correlator(const BehaviorTable& b, std::size_t x, std::size_t y) {
    double e = 0.0;
    for (std::size_t a = 0; a < b.scenario().outcomesA; ++a) {
        for (std::size_t bb = 0; bb < b.scenario().outcomesB; ++bb) {
            e += outcome_sign(a) * outcome_sign(bb) * b(x, y, a, bb);
        }
    }
    return e;
}

double chsh_value(const BehaviorTable& b) {
    require_chsh_scenario(b);
    return correlator(b, 0, 0) + correlator(b, 0, 1) + correlator(b, 1, 0) - correlator(b, 1, 1);
}

std::array<double, 8> chsh_symmetrizations(const BehaviorTable& b) {
    require_chsh_scenario(b);
    const std::array<double, 4> e{correlator(b, 0, 0), correlator(b, 0, 1), correlator(b, 1, 0),
                                  correlator(b, 1, 1)};
    std::array<double, 8> out{};
    std::size_t k = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        if (std::popcount(mask) % 2 == 0) continue;
        double v = 0.0;
        for (unsigned i = 0; i < 4; ++i) v += ((mask >> i) & 1U) ? -e[i] : e[i];
        out[k++] = v;
    }
    return out;
}

std::array<double, 9> correlation_matrix(const DensityOperator& rho) {
    if (rho.dimA() != 2 || rho.dimB() != 2) throw ShapeError("correlation matrix needs two qubits");
    std::array<double, 9> t{};
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            t[static_cast<std::size_t>(3 * k + l)] =
                trace_of_product(rho.matrix(), kron(pauli(k + 1), pauli(l + 1))).real();
        }
    }
    return t;
}

std::vector<ProjectiveMeasurement> ChshOptimum::measurementsA() const {
    return {ProjectiveMeasurement::qubit_direction(directionsA[0]),
            ProjectiveMeasurement::qubit_direction(directionsA[1])};
}

std::vector<ProjectiveMeasurement> ChshOptimum::measurementsB() const {
    return {ProjectiveMeasurement::qubit_direction(directionsB[0]),
            ProjectiveMeasurement::qubit_direction(directionsB[1])};
}

ChshOptimum chsh_optimum(const DensityOperator& rho) {
    const auto t = correlation_matrix(rho);
    ComplexMatrix tt(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k < 3; ++k) v += t[3 * k + i] * t[3 * k + j];
            tt(i, j) = v;
        }
    }
    const auto eig = hermitian_eigen(tt);
    const double t1 = std::max(eig.values[2], 0.0);
    const double t2 = std::max(eig.values[1], 0.0);

    auto column = [&](std::size_t c) {
        std::array<double, 3> v{eig.vectors(0, c).real(), eig.vectors(1, c).real(),
                                eig.vectors(2, c).real()};
        const double n = std::hypot(v[0], v[1], v[2]);
        return std::array<double, 3>{v[0] / n, v[1] / n, v[2] / n};
    };
    auto apply_t = [&](const std::array<double, 3>& v) {
        std::array<double, 3> r{};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) r[i] += t[3 * i + j] * v[j];
        }
        const double n = std::hypot(r[0], r[1], r[2]);
        if (n < 1e-15) return std::array<double, 3>{0.0, 0.0, 1.0};
        return std::array<double, 3>{r[0] / n, r[1] / n, r[2] / n};
    };

    const auto e1 = column(2);
    const auto e2 = column(1);
    const double theta = std::atan2(std::sqrt(t2), std::sqrt(t1));
    const double c = std::cos(theta);
    const double sn = std::sin(theta);

    ChshOptimum opt;
    opt.value = 2.0 * std::sqrt(t1 + t2);
    for (std::size_t i = 0; i < 3; ++i) {
        opt.directionsB[0][i] = c * e1[i] + sn * e2[i];
        opt.directionsB[1][i] = c * e1[i] - sn * e2[i];
    }
    opt.directionsA[0] = apply_t(e1);
    opt.directionsA[1] = apply_t(e2);
    return opt;
}

double chsh_max(const DensityOperator& rho) { return chsh_optimum(rho).value; }

double no_signaling_residual(const BehaviorTable& b) {
    const Scenario& s = b.scenario();
    double r = 0.0;
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t a = 0; a < s.outcomesA; ++a) {
            std::vector<double> m(s.settingsB, 0.0);
            for (std::size_t y = 0; y < s.settingsB; ++y) {
                for (std::size_t bb = 0; bb < s.outcomesB; ++bb) m[y] += b(x, y, a, bb);
            }
            const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
            r = std::max(r, *hi - *lo);
        }
    }
    for (std::size_t y = 0; y < s.settingsB; ++y) {
        for (std::size_t bb = 0; bb < s.outcomesB; ++bb) {
            std::vector<double> m(s.settingsA, 0.0);
            for (std::size_t x = 0; x < s.settingsA; ++x) {
                for (std::size_t a = 0; a < s.outcomesA; ++a) m[x] += b(x, y, a, bb);
            }
            const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
            r = std::max(r, *hi - *lo);
        }
    }
    return r;
}

BehaviorTable SampleResult::empirical() const {
    if (!complete()) {
        std::ostringstream msg;
        msg << missing.size() << " setting pair(s) were never sampled";
        throw DomainError(msg.str());
    }
    return BehaviorTable(scenario, frequencies);
}

std::vector<std::pair<std::size_t, std::size_t>> default_schedule(const Scenario& s) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) out.emplace_back(x, y);
    }
    return out;
}

SampleResult sample_local_model(const LocalModel& model, std::uint64_t n, std::uint64_t seed,
                                std::span<const std::pair<std::size_t, std::size_t>> schedule,
                                unsigned workers) {
    const Scenario& s = model.scenario();
    if (n == 0) throw DomainError("sample_local_model: n must be at least 1");
    if (schedule.empty()) throw DomainError("sample_local_model: empty settings schedule");
    for (const auto& [x, y] : schedule) {
        if (x >= s.settingsA || y >= s.settingsB) {
            throw DomainError("sample_local_model: schedule names an unknown setting");
        }
    }

    const auto cause_cdf = sampling_cdf(model.weights());
    std::vector<std::vector<std::vector<double>>> cdfA(model.causes()), cdfB(model.causes());
    for (std::size_t mu = 0; mu < model.causes(); ++mu) {
        for (const auto& row : model.responseA()[mu]) cdfA[mu].push_back(sampling_cdf(row));
        for (const auto& row : model.responseB()[mu]) cdfB[mu].push_back(sampling_cdf(row));
    }

    const std::uint64_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
    auto run_chunks = [&](std::uint64_t first, std::uint64_t stride,
                          std::vector<std::uint64_t>& counts) {
        for (std::uint64_t k = first; k < chunks; k += stride) {
            Rng rng(derive_seed(seed, k));
            const std::uint64_t begin = k * kSampleChunk;
            const std::uint64_t end = std::min<std::uint64_t>(n, begin + kSampleChunk);
            for (std::uint64_t t = begin; t < end; ++t) {
                const auto [x, y] = schedule[t % schedule.size()];
                const std::size_t mu = draw(cause_cdf, rng.uniform());
                const std::size_t a = draw(cdfA[mu][x], rng.uniform());
                const std::size_t b = draw(cdfB[mu][y], rng.uniform());
                ++counts[s.index(x, y, a, b)];
            }
        }
    };

    SampleResult result;
    result.scenario = s;
    result.trials = n;
    result.counts.assign(s.table_size(), 0);
    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(chunks, 1)));
    if (threads == 1) {
        run_chunks(0, 1, result.counts);
    } else {
        std::vector<std::vector<std::uint64_t>> partial(threads,
                                                        std::vector<std::uint64_t>(s.table_size(), 0));
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] { run_chunks(w, threads, partial[w]); });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : partial) {
            for (std::size_t i = 0; i < part.size(); ++i) result.counts[i] += part[i];
        }
    }

    result.trials_per_setting.assign(s.settingsA * s.settingsB, 0);
    result.frequencies.assign(s.table_size(), 0.0);
    for (std::size_t x = 0; x < s.settingsA; ++x) {
        for (std::size_t y = 0; y < s.settingsB; ++y) {
            std::uint64_t total = 0;
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                for (std::size_t b = 0; b < s.outcomesB; ++b) total += result.counts[s.index(x, y, a, b)];
            }
            result.trials_per_setting[x * s.settingsB + y] = total;
            if (total == 0) {
                result.missing.emplace_back(x, y);
                continue;
            }
            for (std::size_t a = 0; a < s.outcomesA; ++a) {
                for (std::size_t b = 0; b < s.outcomesB; ++b) {
                    result.frequencies[s.index(x, y, a, b)] =
                        static_cast<double>(result.counts[s.index(x, y, a, b)]) /
                        static_cast<double>(total);
                }
            }
        }
    }
    return result;
}

}  // namespace qlocality
