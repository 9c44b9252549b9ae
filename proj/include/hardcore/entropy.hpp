#pragma once

#include <span>

namespace hardcore {

/// x ln x with the convention 0 ln 0 = 0.
double xlogx(double x);

/// Shannon entropy (nats) of a Bernoulli(p) variable. Throws std::domain_error
/// when p lies outside [0, 1].
double bernoulli_entropy(double p);

/// -sum w_i x_i ln x_i, the entropy of a distribution given per-arrangement
/// probabilities x_i with multiplicities w_i.
double weighted_entropy(std::span<const double> probs, std::span<const double> weights);

} // namespace hardcore
