#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardcore/block_bound.hpp"
#include "hardcore/closed_form.hpp"
#include "hardcore/lattice.hpp"

namespace hardcore {

/// ln of the golden mean, from power iteration on [[1,1],[1,0]].
double entropy_1d();

enum class StripBoundary { Free, Periodic };

std::string_view to_string(StripBoundary b);
StripBoundary parse_strip_boundary(std::string_view name);

inline constexpr int max_strip_width = 14;

struct StripSpec {
    int width = 1;
    StripBoundary boundary = StripBoundary::Free;
};

/// ln(lambda_max) / width for the column transfer matrix of hard squares on a
/// strip of the given width. Throws std::length_error outside 1..14.
double strip_entropy(StripSpec spec);

/// Legal columns of the strip (no two vertically adjacent 1's; the ends are
/// adjacent for periodic strips of width >= 3).
std::vector<std::uint32_t> strip_columns(StripSpec spec);

struct StageStats {
    int stage = 0;
    Sublattice sublattice = Sublattice::Circle;
    double probability = 0.0; // Bernoulli parameter used at unforced sites
    double analytic_unforced = 0.0;
    double empirical_unforced = 0.0;
    double stderr_unforced = 0.0;
    double analytic_density = 0.0;
    double empirical_density = 0.0;
    double stderr_density = 0.0;
    std::size_t n_sites = 0;
};

struct FillInSample {
    TorusConfiguration config;
    std::vector<StageStats> stages;
};

/// Seed of the generator used for fill stage `stage`:
/// splitmix64(seed + (stage + 1) * 0x9E3779B97F4A7C15). Every stage draws one
/// uniform per site of its sublattice, in torus index order, from
/// mt19937_64 (top 53 bits).
std::uint64_t stage_seed(std::uint64_t seed, int stage);

/// Sequential fill-in on a torus: stage k gives each unforced site of its
/// sublattice a 1 with probability params[k], the final stage with
/// `final_p`. Standard errors are batch means over a 16 x 16 grid of
/// rectangles. Throws std::invalid_argument on arity mismatch.
FillInSample fill_in_sample(LatticeKind kind, std::span<const double> params, TorusDims dims,
                            std::uint64_t seed, double final_p = 0.5);

/// Three-hex fill-in: circle sites are grouped in three-hexes carrying each
/// k-one arrangement with probability pvec[k], then dots get B(q)
/// (triangular only) and the last stage B(1/2). Honeycomb torus sides and
/// triangular torus sides must be multiples of 3.
FillInSample three_hex_sample(LatticeKind kind, const ThreeHexParam& pvec, double q, TorusDims dims,
                              std::uint64_t seed);

inline constexpr std::size_t max_window_sites = 24;

/// Earlier-stage sites that can influence whether one site of stage `stage`
/// is unforced (closure of earlier-stage neighbours), as offsets from it.
std::vector<Site> conditioning_window(LatticeKind kind, int stage);

/// Exact probability that a site of fill stage `stage` is unforced, by
/// enumerating every assignment of its conditioning window under the
/// sequential measure. Throws std::length_error when the window exceeds
/// max_window_sites.
double window_probability_exhaustive(LatticeKind kind, std::span<const double> params, int stage);

struct Estimate {
    double value = 0.0;
    double error = 0.0; // standard error
};

/// Monte Carlo estimate of the unforced odd-site fraction when a
/// (tiles*n) x (tiles*n) even-sublattice torus is tiled with independent
/// blocks drawn from `dist`. Standard error from per-block-row batches.
Estimate block_tiling_unforced(const BlockDistribution& dist, int tiles, std::uint64_t seed);

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Expected number of odd sites a central 1 blocks exclusively, crediting
/// 1/(1+k) to an odd neighbour whose other three even neighbours hold k 1's,
/// over the 2^8 B(1/2) assignments of those eight even sites.
Rational blocking_constant_lower();
/// 1 / (2 + c) for the lower blocking constant.
Rational density_upper_bound();

struct BlockingUpper {
    double c_max = 0.0;
    double rho_min = 0.0;
};

/// Solves (h_B(1/(2+c)) + 2 ln 2 / (2+c)) / 2 = h_ref on [0, 20] by bisection.
/// Throws std::domain_error when h_ref has no root there.
BlockingUpper blocking_constant_upper(double h_ref = 0.4075);

struct ReferenceConstant {
    LatticeKind kind;
    double entropy;
    double density;
};

/// Best published estimates of h_top and the 1-density.
std::span<const ReferenceConstant> reference_constants();
std::optional<ReferenceConstant> reference_constant(LatticeKind kind);

} // namespace hardcore
