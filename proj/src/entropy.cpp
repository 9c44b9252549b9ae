#include "hardcore/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hardcore {

double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}

double bernoulli_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("Bernoulli parameter outside [0,1]: " + std::to_string(p));
    return -xlogx(p) - xlogx(1.0 - p);
}

double weighted_entropy(std::span<const double> probs, std::span<const double> weights) {
    if (probs.size() != weights.size())
        throw std::invalid_argument("weighted_entropy: size mismatch");
    double h = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        h -= weights[i] * xlogx(probs[i]);
    return h;
}

} // namespace hardcore
