#pragma once

#include <array>
#include <span>
#include <vector>

#include "hardcore/bound_report.hpp"
#include "hardcore/lattice.hpp"

namespace hardcore {

/// A probability in [0, 1]; construction throws std::domain_error otherwise.
class BernoulliParam {
public:
    explicit BernoulliParam(double p);
    double value() const { return p_; }

private:
    double p_;
};

/// Per-arrangement probabilities of a three-hex carrying 0..3 one-tiles.
/// Invariant: p0 + 3 p1 + 3 p2 + p3 = 1 (to 1e-12), all entries >= 0.
class ThreeHexParam {
public:
    ThreeHexParam(double p0, double p1, double p2, double p3);
    /// p3 is fixed by normalization.
    static ThreeHexParam from_free(double p0, double p1, double p2);

    const std::array<double, 4>& values() const { return p_; }
    double operator[](std::size_t k) const { return p_[k]; }

    /// Probability that a given site of the three-hex carries 0.
    double zero_marginal() const { return p_[0] + 2.0 * p_[1] + p_[2]; }
    /// Probability that a given site of the three-hex carries 1.
    double one_marginal() const { return p_[1] + 2.0 * p_[2] + p_[3]; }
    /// Entropy of one three-hex (nats).
    double entropy() const;

    static constexpr std::array<double, 4> multiplicities{1.0, 3.0, 3.0, 1.0};

private:
    std::array<double, 4> p_;
};

double entropy_bernoulli(BernoulliParam p);

/// Square (m = 4) or honeycomb (m = 3): circle sublattice B(p), then free
/// dots B(1/2).
BoundReport bound_bipartite(BernoulliParam p, int m);
/// d/dp of bound_bipartite(p, m).value.
double bound_bipartite_derivative(double p, int m);

/// Triangular (m' = 3) or Kagome (m' = 2): circles B(p), unforced dots B(q),
/// unforced triangles B(1/2).
BoundReport bound_tripartite(BernoulliParam p, BernoulliParam q, int m_prime);

/// Square lattice with the 8-site Moore neighbourhood, four stages.
BoundReport bound_square_moore(BernoulliParam p, BernoulliParam q, BernoulliParam r);

/// Largest p for which the equalizing last-stage parameter p(1-p)^-m is <= 1.
double equalization_limit(int m);

/// Bipartite scheme with the last stage at p' = p (1-p)^-m so both
/// sublattices carry density p. Throws std::domain_error when p' > 1.
BoundReport bound_equalized_bipartite(BernoulliParam p, int m);

/// Circle three-hexes on the honeycomb lattice, free dots at B(1/2).
BoundReport bound_three_hex_honeycomb(const ThreeHexParam& pvec);

/// Circle three-hexes on the triangular lattice, unforced dots B(q),
/// unforced triangles B(1/2).
BoundReport bound_three_hex_triangular(const ThreeHexParam& pvec, BernoulliParam q);

/// Unforced probability of a site at each fill stage of the single-site
/// sequential scheme on `kind` (stage 0 is always 1). `params` holds one
/// Bernoulli parameter per stage except the last.
std::vector<double> sequential_unforced(LatticeKind kind, std::span<const double> params);

/// Same for the three-hex schemes (honeycomb: 2 stages, triangular: 3).
/// For stage 0 this is 1; the circle density is the three-hex one-marginal.
std::vector<double> three_hex_unforced(LatticeKind kind, const ThreeHexParam& pvec, double q);

} // namespace hardcore
