#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <vector>

#include "qlocality/locality.hpp"
#include "qlocality/quantum.hpp"
#include "qlocality/random.hpp"

namespace qlocality::test {

inline std::filesystem::path fixture_path(const char* name) {
    return std::filesystem::path(QLOCALITY_FIXTURE_DIR) / name;
}

// Werner(p), p <= 1/3, as the uniform mixture over n in {+-x, +-y, +-z} of
// |n><n| (x) (I - 3p n.sigma)/2.
inline SeparableComponents werner_pauli_decomposition(double p) {
    std::vector<SeparableComponent> out;
    for (int axis = 0; axis < 3; ++axis) {
        for (double sign : {1.0, -1.0}) {
            std::array<double, 3> n{};
            n[static_cast<std::size_t>(axis)] = sign;
            std::array<double, 3> r{};
            for (std::size_t k = 0; k < 3; ++k) r[k] = -3.0 * p * n[k];
            out.push_back({1.0 / 6.0, bloch_state(n), bloch_state(r)});
        }
    }
    return SeparableComponents(std::move(out));
}

// PR box relabelled so that a xor b = xy xor (alpha x) xor (beta y) xor gamma.
inline BehaviorTable pr_box(int alpha, int beta, int gamma) {
    std::vector<double> p(16, 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    const std::size_t parity = (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma;
                    if ((a ^ b) == parity) p[kChshScenario.index(x, y, a, b)] = 0.5;
                }
    return BehaviorTable(kChshScenario, std::move(p));
}

inline std::vector<ProjectiveMeasurement> random_qubit_settings(std::size_t n, Rng& rng) {
    std::vector<ProjectiveMeasurement> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(ProjectiveMeasurement::qubit_direction(random_direction(rng)));
    return out;
}

// No-signaling 2x2x2 behavior: a random mixture of a PR box, a quantum behavior from a random
// two-qubit state (or a Bell state) and a deterministic strategy.
inline BehaviorTable random_nosignaling_behavior(std::uint64_t seed) {
    Rng rng(seed);
    const auto box = pr_box(static_cast<int>(rng.next_u64() & 1), static_cast<int>(rng.next_u64() & 1),
                            static_cast<int>(rng.next_u64() & 1));
    const bool bell = rng.uniform() < 0.5;
    const auto rho = bell ? bell_state(static_cast<BellKind>(rng.next_u64() % 4))
                          : DensityOperator(random_density(4, rng.next_u64()).matrix(), 2, 2);
    const auto measA = random_qubit_settings(2, rng);
    const auto measB = random_qubit_settings(2, rng);
    const auto quantum = behavior_from_state(rho, measA, measB);
    const auto det = strategy_behavior(kChshScenario, strategy_at(kChshScenario, rng.next_u64() % 16));
    auto w = random_weights(3, rng);
    w[0] *= 0.5;  // keep a fair share of local cases
    const double total = w[0] + w[1] + w[2];
    std::vector<double> p(16);
    for (std::size_t i = 0; i < 16; ++i) {
        p[i] = (w[0] * box.values()[i] + w[1] * quantum.values()[i] + w[2] * det.values()[i]) / total;
    }
    return BehaviorTable(kChshScenario, std::move(p));
}

// Marginal of A at setting x shifts by `deviation` between y = 0 and y = 1.
inline BehaviorTable planted_signaling_behavior(double deviation) {
    std::vector<double> p(16);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) {
                    const double pa = y == 0 ? 0.5 : 0.5 + deviation;
                    p[kChshScenario.index(x, y, a, b)] = 0.5 * (a == 0 ? pa : 1.0 - pa);
                }
    return BehaviorTable(kChshScenario, std::move(p));
}

inline double max_chsh_symmetrization(const BehaviorTable& b) {
    const auto s = chsh_symmetrizations(b);
    return *std::max_element(s.begin(), s.end());
}

}  // namespace qlocality::test
