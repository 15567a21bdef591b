#pragma once

// Test-only reference computations. Nothing here calls into the code paths it is used to
// check: eigenvalues come from Eigen, CHSH optima from a brute-force angle grid, correlators
// from explicit Pauli traces.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qlocality/linalg.hpp"

namespace qlocality::oracle {

inline std::vector<double> eigenvalues(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
    std::vector<double> v(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

// T_kl = Re Tr(rho sigma_k (x) sigma_l) from hand-written Pauli matrices.
inline std::array<std::array<double, 3>, 3> correlations(const ComplexMatrix& rho) {
    using C = std::complex<double>;
    const std::array<std::array<C, 4>, 3> s{{
        {C(0), C(1), C(1), C(0)},
        {C(0), C(0, -1), C(0, 1), C(0)},
        {C(1), C(0), C(0), C(-1)},
    }};
    std::array<std::array<double, 3>, 3> t{};
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            C tr = 0;
            // (sigma_k (x) sigma_l)[(i,j),(i',j')] = s_k[i,i'] s_l[j,j']
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int ip = 0; ip < 2; ++ip)
                        for (int jp = 0; jp < 2; ++jp)
                            tr += rho(static_cast<std::size_t>(ip * 2 + jp),
                                      static_cast<std::size_t>(i * 2 + j)) *
                                  s[k][i * 2 + ip] * s[l][j * 2 + jp];
            t[k][l] = tr.real();
        }
    }
    return t;
}

// Best CHSH value over Bob's two directions on a spherical angle grid of `step_deg`, with
// Alice's directions chosen optimally (a . v <= |v|). A coarse global pass is refined by a
// 1-degree local pass.
inline double chsh_grid_search(const ComplexMatrix& rho) {
    const auto t = correlations(rho);
    auto dir = [](double theta, double phi) {
        return std::array<double, 3>{std::sin(theta) * std::cos(phi),
                                     std::sin(theta) * std::sin(phi), std::cos(theta)};
    };
    auto norm_t = [&](const std::array<double, 3>& v) {
        double r2 = 0;
        for (int i = 0; i < 3; ++i) {
            double s = 0;
            for (int j = 0; j < 3; ++j) s += t[i][j] * v[j];
            r2 += s * s;
        }
        return std::sqrt(r2);
    };
    auto score = [&](double t0, double p0, double t1, double p1) {
        const auto b0 = dir(t0, p0);
        const auto b1 = dir(t1, p1);
        std::array<double, 3> sum{}, diff{};
        for (int i = 0; i < 3; ++i) {
            sum[i] = b0[i] + b1[i];
            diff[i] = b0[i] - b1[i];
        }
        return norm_t(sum) + norm_t(diff);
    };
    const double deg = std::numbers::pi / 180.0;
    double best = -1.0;
    std::array<double, 4> arg{};
    const double coarse = 10.0 * deg;
    for (double t0 = 0; t0 <= std::numbers::pi + 1e-12; t0 += coarse)
        for (double p0 = 0; p0 < 2 * std::numbers::pi; p0 += coarse)
            for (double t1 = 0; t1 <= std::numbers::pi + 1e-12; t1 += coarse)
                for (double p1 = 0; p1 < 2 * std::numbers::pi; p1 += coarse) {
                    const double v = score(t0, p0, t1, p1);
                    if (v > best) {
                        best = v;
                        arg = {t0, p0, t1, p1};
                    }
                }
    // 1-degree refinement around the coarse optimum, repeated while it keeps improving.
    for (int round = 0; round < 8; ++round) {
        const auto centre = arg;
        for (int a = -10; a <= 10; ++a)
            for (int b = -10; b <= 10; ++b)
                for (int c = -10; c <= 10; ++c)
                    for (int d = -10; d <= 10; ++d) {
                        const double v = score(centre[0] + a * deg, centre[1] + b * deg,
                                               centre[2] + c * deg, centre[3] + d * deg);
                        if (v > best) {
                            best = v;
                            arg = {centre[0] + a * deg, centre[1] + b * deg, centre[2] + c * deg,
                                   centre[3] + d * deg};
                        }
                    }
        if (arg == centre) break;
    }
    return best;
}

}  // namespace qlocality::oracle
