#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>

#include "hardcore/block_bound.hpp"
#include "hardcore/closed_form.hpp"
#include "hardcore/entropy.hpp"
#include "hardcore/oracles.hpp"
#include "hardcore/optimizer.hpp"
#include "hardcore/schemes.hpp"

using namespace hardcore;
using doctest::Approx;

namespace {

std::shared_ptr<const BlockFamily> family(int n, Reduction r = Reduction::SymmetryWeak) {
    return std::make_shared<const BlockFamily>(reduce_family(n, r));
}

std::vector<double> random_probs(const BlockFamily& fam, std::uint64_t seed, double lo = 0.05) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, 1.0);
    std::vector<double> p(fam.class_count());
    for (auto& x : p) x = u(rng);
    const auto mult = fam.multiplicities();
    const double z = std::inner_product(p.begin(), p.end(), mult.begin(), 0.0);
    for (auto& x : p) x /= z;
    return p;
}

double plogp(double x) { return x > 0 ? x * std::log(x) : 0.0; }

struct Optima {
    BlockOptimum n1, n2, n3;
};

const Optima& optima() {
    static const Optima o{optimize_block(family(1)), optimize_block(family(2)), optimize_block(family(3))};
    return o;
}

} // namespace

TEST_CASE("distribution validation") {
    auto f = family(2);
    CHECK_THROWS_AS(BlockDistribution(f, std::vector<double>(6, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(BlockDistribution(f, std::vector<double>(5, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(BlockDistribution(f, {1.1, 0, 0, 0, 0, -0.1}), std::invalid_argument);
    const BlockDistribution full(f, {0, 0, 0, 0, 0, 1});
    CHECK(full.density() == 1.0);
}

TEST_CASE("single-site blocks reproduce the bipartite bound") {
    auto f = family(1);
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        const BlockDistribution d(f, {1.0 - p, p});
        CHECK(block_entropy_term(d) == Approx(bernoulli_entropy(p)).epsilon(1e-14));
        CHECK(std::abs(block_bound(d).value - bound_bipartite(BernoulliParam{p}, 4).value) < 1e-12);
        const auto dens = block_bound(d).densities;
        const auto ref = bound_bipartite(BernoulliParam{p}, 4).densities;
        CHECK(std::abs(dens[0] - ref[0]) < 1e-12);
        CHECK(std::abs(dens[1] - ref[1]) < 1e-12);
    }
}

TEST_CASE("2x2 blocks match the explicit formulas") {
    auto f = family(2);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto p = random_probs(*f, seed);
        const BlockDistribution d(f, p);
        const double p0 = p[0], p1 = p[1], p21 = p[2], p22 = p[3], p3 = p[4], p4 = p[5];
        const double h = -(plogp(p0) + 4 * plogp(p1) + 4 * plogp(p21) + 2 * plogp(p22) + 4 * plogp(p3) + plogp(p4)) / 4;
        const double u = (p0 + 2 * std::pow(p0 + 2 * p1 + p21, 2) + std::pow(p0 + 3 * p1 + 2 * p21 + p22 + p3, 4)) / 4;
        CHECK(block_entropy_term(d) == Approx(h).epsilon(1e-13));
        CHECK(unforced_odd_density(d) == Approx(u).epsilon(1e-13));
        CHECK(block_bound(d).value == Approx(0.5 * (h + u * std::numbers::ln2)).epsilon(1e-13));
    }
}

TEST_CASE("point mass on the empty block") {
    for (int n = 1; n <= 3; ++n) {
        auto f = family(n);
        std::vector<double> p(f->class_count(), 0.0);
        p[0] = 1.0;
        const BlockDistribution d(f, p);
        CHECK(block_entropy_term(d) == 0.0);
        CHECK(unforced_odd_density(d) == Approx(1.0).epsilon(1e-15));
        CHECK(block_bound(d).value == Approx(0.5 * std::numbers::ln2));
    }
}

TEST_CASE("unforced density agrees with tiling Monte Carlo") {
    auto f = family(3);
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const BlockDistribution d(f, random_probs(*f, seed, 0.0));
        const auto est = block_tiling_unforced(d, 100, seed);
        CAPTURE(est.value);
        CAPTURE(est.error);
        CHECK(std::abs(est.value - unforced_odd_density(d)) <= 3.0 * est.error);
    }
}

TEST_CASE("block objective gradient") {
    for (int n = 2; n <= 3; ++n) {
        auto f = family(n);
        const BlockObjective obj(f);
        const auto p = random_probs(*f, 17 + n);
        const BlockDistribution d(f, p);
        CHECK(obj.value(p) == Approx(block_bound(d).value).epsilon(1e-14));
        const Objective value = [&](std::span<const double> x) { return obj.value(x); };
        const GradientFn grad = [&](std::span<const double> x, std::span<double> g) { obj.gradient(x, g); };
        CHECK(finite_difference_gradient_check(value, grad, p) < 1e-5);
    }
}

TEST_CASE("block optima") {
    const auto& o = optima();
    CHECK(std::abs(o.n1.report.value - 0.392421) < 1e-5);
    CHECK(std::abs(o.n2.report.value - 0.39877) < 1e-4);
    CHECK(std::abs(o.n3.report.value - 0.4014) < 1e-4);
    CHECK(std::abs(o.n2.report.densities[0] - 0.1993) < 5e-3);
    CHECK(std::abs(o.n2.report.densities[1] - 0.2254) < 5e-3);
    CHECK(o.n1.report.value <= o.n2.report.value);
    CHECK(o.n2.report.value <= o.n3.report.value);
    CHECK(o.n3.report.value <= reference_constant(LatticeKind::Square)->entropy);
    CHECK(o.n3.report.param_names.size() == 47);
}

TEST_CASE("optima respect the inclusion order") {
    const auto& o = optima();
    CHECK(check_monotonicity(o.n2.distribution).empty());
    CHECK(check_monotonicity(o.n3.distribution).empty());
    // Members of one class carry one probability by construction.
    const auto& d = o.n3.distribution;
    for (const auto& cls : d.family().classes())
        for (Mask m : cls.members) CHECK(d.prob_of(m) == d.prob_of(cls.representative));

    auto f = family(2);
    const BlockDistribution adversarial(f, {0.1, 0, 0, 0, 0, 0.9});
    const auto v = check_monotonicity(adversarial);
    const bool flagged = std::any_of(v.begin(), v.end(), [](const MonotonicityViolation& x) {
        return x.pair.sub == 0 && x.pair.super == 5;
    });
    CHECK(flagged);
}

TEST_CASE("density profiles") {
    const auto& o = optima();
    const double p = o.n1.distribution.probs()[1];
    const auto binom = density_profile(3, o.n1.distribution);
    REQUIRE(binom.occupancy.size() == 10);
    CHECK(binom.occupancy[0] == Approx(std::pow(1 - p, 9)).epsilon(1e-12));
    CHECK(binom.occupancy[0] == Approx(0.1866).epsilon(5e-3));
    CHECK(binom.mean() == Approx(9 * p));
    CHECK(binom.variance() == Approx(9 * p * (1 - p)));
    for (const auto& prof : {binom, density_profile(3, o.n2.distribution), density_profile(3, o.n3.distribution)}) {
        CHECK(std::accumulate(prof.occupancy.begin(), prof.occupancy.end(), 0.0) == Approx(1.0).epsilon(1e-10));
        for (double x : prof.occupancy) CHECK(x >= 0.0);
    }
    const auto same = density_profile(3, o.n3.distribution);
    CHECK(same.mean() == Approx(9 * o.n3.distribution.density()));
    // The 2x2 profile on 2x2 windows is the block occupancy itself.
    const auto two = density_profile(2, o.n2.distribution);
    const auto& pr = o.n2.distribution.probs();
    CHECK(two.occupancy[0] == Approx(pr[0]));
    CHECK(two.occupancy[1] == Approx(4 * pr[1]));
    CHECK(two.occupancy[2] == Approx(4 * pr[2] + 2 * pr[3]));
    CHECK_THROWS(density_profile(2, o.n3.distribution));

    DensityProfile a{1, {0.5, 0.5}, "a"};
    DensityProfile b{1, {0.3, 0.7}, "b"};
    CHECK(profile_crossings(a, b) == std::vector<int>{0});
}

TEST_CASE("extension to larger blocks") {
    const auto& o = optima();
    auto f2 = family(2);
    const auto ext = extend_distribution(o.n1.distribution, f2);
    const double rho = o.n1.distribution.density();
    CHECK(ext.probs()[0] == Approx(o.n1.distribution.probs()[0] * std::pow(1 - rho, 3)).epsilon(1e-12));
    const auto mult = f2->multiplicities();
    CHECK(std::inner_product(ext.probs().begin(), ext.probs().end(), mult.begin(), 0.0) ==
          Approx(1.0).epsilon(1e-12));
    // A product measure extends to the same product measure.
    CHECK(block_bound(ext).value == Approx(o.n1.report.value).epsilon(1e-12));

    auto f3 = family(3);
    const auto ext3 = extend_distribution(o.n2.distribution, f3);
    CHECK(ext3.probs()[0] == Approx(o.n2.distribution.probs()[0] * std::pow(1 - o.n2.distribution.density(), 5)));
    BlockOptions opts;
    opts.warm_start = ext3;
    const auto warm = optimize_block(f3, {}, opts);
    CHECK(warm.report.value == Approx(optima().n3.report.value).epsilon(1e-8));
}
