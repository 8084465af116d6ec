#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cmgiant/distributions.hpp"

namespace cmgiant::testing {

using Rng = std::mt19937_64;

inline const FinitePmf& counterexample_p() {
    static const FinitePmf p({{1, 1.0 / 8}, {2, 6.0 / 8}, {3, 1.0 / 8}});
    return p;
}

inline const FinitePmf& counterexample_q() {
    static const FinitePmf q({{0, 1.0 / 16}, {1, 1.0 / 8}, {2, 5.0 / 8}, {3, 1.0 / 8}, {4, 1.0 / 16}});
    return q;
}

/// Random pmf on {0..K}, K <= max_k, with random sparsity. Always puts mass on
/// some k >= 1 so the mean is positive.
inline FinitePmf random_pmf(Rng& rng, std::uint64_t max_k = 15) {
    std::uniform_int_distribution<std::uint64_t> top(1, max_k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k_max = top(rng);
    std::vector<double> w(k_max + 1, 0.0);
    const double density = 0.2 + 0.8 * u(rng);
    for (auto& x : w)
        if (u(rng) < density) x = std::pow(u(rng), 2.0);
    w[k_max] += 0.05 + u(rng);
    return FinitePmf::from_dense(w, true);
}

/// Grid oracle for Pareto(a1, c1) vs Pareto(a2, c2) orders from integrated
/// quantiles. With beta = 1 - 1/a and F^-1(v) = c (1 - v)^(-1/a):
///   int_p^1 F^-1 = mean * (1 - p)^beta          (icx: compare for all p)
///   int_0^p F^-1 = (c / beta) (1 - (1 - p)^beta) (icv: compare for all p)
/// The icv grid reaches p = 1e-300; the icx grid reaches 1 - p = exp(-1e8).
struct ParetoOracle {
    bool icx = true, cx = true, icv = true;
};

inline ParetoOracle pareto_order_oracle(double a1, double c1, double a2, double c2) {
    constexpr double slack = 1e-12;
    constexpr int points = 3001;
    const double b1 = 1 - 1 / a1, b2 = 1 - 1 / a2;
    const double m1 = c1 / b1, m2 = c2 / b2;
    ParetoOracle o;
    for (int i = 0; i < points; ++i) {
        // u = 1 - p. The icx side is compared in log space, so |log u| can run
        // far past double underflow; tails that cross late need it.
        const double log_u = i == 0 ? 0.0 : -std::pow(10.0, -3.0 + 11.0 * (i - 1) / (points - 2));
        if (std::log(m1) + b1 * log_u > std::log(m2) + b2 * log_u + slack) o.icx = false;
        const double t = std::pow(10.0, -300.0 * i / (points - 1));  // p itself, log grid down to 1e-300
        const double h1 = c1 / b1 * -std::expm1(b1 * std::log1p(-t));
        const double h2 = c2 / b2 * -std::expm1(b2 * std::log1p(-t));
        if (h1 > h2 * (1 + slack)) o.icv = false;
    }
    o.cx = o.icx && std::abs(m1 - m2) <= slack * std::max(m1, m2);
    return o;
}

}  // namespace cmgiant::testing
