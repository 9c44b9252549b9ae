#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hardcore/block_family.hpp"
#include "hardcore/bound_report.hpp"

namespace hardcore {

/// Per-arrangement class probabilities over a block family. Validated on
/// construction (see check_simplex).
class BlockDistribution {
public:
    BlockDistribution(std::shared_ptr<const BlockFamily> family, std::vector<double> probs,
                      double tol = 1e-10);

    const BlockFamily& family() const { return *family_; }
    const std::shared_ptr<const BlockFamily>& family_ptr() const { return family_; }
    int n() const { return family_->n(); }
    std::span<const double> probs() const { return probs_; }
    double prob_of(Mask mask) const { return probs_[family_->class_of(mask)]; }

    /// Expected number of 1's per block divided by n^2.
    double density() const;

private:
    std::shared_ptr<const BlockFamily> family_;
    std::vector<double> probs_;
};

/// Bound objective over raw class-probability vectors, with the zero-set
/// marginals precomputed as a (events x classes) count matrix.
class BlockObjective {
public:
    explicit BlockObjective(std::shared_ptr<const BlockFamily> family);

    const BlockFamily& family() const { return *family_; }

    double entropy_term(std::span<const double> probs) const;
    double unforced(std::span<const double> probs) const;
    double mean_ones(std::span<const double> probs) const;
    double value(std::span<const double> probs) const;
    void gradient(std::span<const double> probs, std::span<double> g) const;

private:
    std::vector<double> marginals(std::span<const double> probs) const;

    std::shared_ptr<const BlockFamily> family_;
    std::vector<double> mult_;
    std::vector<double> ones_;      // total 1's over the members of each class
    std::vector<double> counts_;    // row-major, events x classes
    std::size_t events_ = 0;
};

/// -(1/n^2) sum_classes multiplicity * p ln p.
double block_entropy_term(const BlockDistribution& dist);
/// Fraction of odd sites left unforced when blocks tile Z^2 independently.
double unforced_odd_density(const BlockDistribution& dist);
/// value = (H/n^2 + u ln 2) / 2, densities (even, odd).
BoundReport block_bound(const BlockDistribution& dist);

struct MonotonicityViolation {
    InclusionPair pair;
    double p_sub = 0.0;
    double p_super = 0.0;
};

/// Checks p(sub) >= p(super) on strict inclusion pairs and equality on
/// weak-only pairs, with tolerance relative to max(p(sub), p(super)).
std::vector<MonotonicityViolation> check_monotonicity(const BlockDistribution& dist, double tol = 1e-6);

struct DensityProfile {
    int n = 0;
    std::vector<double> occupancy; // k = 0..n^2
    std::string generator;

    double mean() const;
    double variance() const;
};

/// Occupancy profile of n x n windows over a tiling by independent blocks of
/// `generator`. When the generator block is smaller the window offset is
/// averaged uniformly over its m^2 values.
DensityProfile density_profile(int n, const BlockDistribution& generator);

/// Sign changes of a - b, as the lower k of each (k, k+1) bracket. An exact
/// zero at k counts as a crossing at k.
std::vector<int> profile_crossings(const DensityProfile& a, const DensityProfile& b);

/// Warm start for (n+1) x (n+1) blocks: the top-left n x n subblock follows
/// `opt` and the 2n+1 frame sites are independent B(rho), rho = opt.density().
/// Class probabilities are averaged over members.
BlockDistribution extend_distribution(const BlockDistribution& opt,
                                      std::shared_ptr<const BlockFamily> larger);

} // namespace hardcore
