#pragma once

// Misprinted variants of two bounds, kept only so the checks can show that
// they miss the reference optima.

#include <cmath>
#include <numbers>

#include "hardcore/closed_form.hpp"
#include "hardcore/entropy.hpp"

namespace hardcore::detail {

// Final exponent fixed at 2 regardless of m'.
inline double printed_tripartite(double p, double q, int m_prime) {
    const double dot_free = std::pow(1.0 - p, m_prime);
    return (bernoulli_entropy(p) +
            dot_free * (bernoulli_entropy(q) + std::pow(1.0 - (1.0 - p) * q, 2) * std::numbers::ln2)) /
           3.0;
}

// Third term 3 [p1 + p0 (1-q)] a^3 (2-q)^2 ln 2.
inline double printed_three_hex_triangular(const ThreeHexParam& pv, double q) {
    const double a = pv.zero_marginal();
    return (pv.entropy() + (pv[0] + 2.0 * a * a * a) * bernoulli_entropy(q) +
            3.0 * (pv[1] + pv[0] * (1.0 - q)) * a * a * a * (2.0 - q) * (2.0 - q) * std::numbers::ln2) /
           9.0;
}

} // namespace hardcore::detail
