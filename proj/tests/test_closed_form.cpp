#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hardcore/closed_form.hpp"
#include "hardcore/entropy.hpp"
#include "hardcore/oracles.hpp"
#include "hardcore/schemes.hpp"
#include "printed_variants.hpp"

using namespace hardcore;
using doctest::Approx;

namespace {

const double ln2 = std::numbers::ln2;

void check_densities(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CAPTURE(i);
        CHECK(std::abs(got[i] - want[i]) <= tol);
    }
}

std::vector<double> grid11() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
    return g;
}

} // namespace

TEST_CASE("parameter types validate their ranges") {
    CHECK_THROWS_AS(BernoulliParam{-1e-9}, std::domain_error);
    CHECK_THROWS_AS(BernoulliParam{1.5}, std::domain_error);
    CHECK_NOTHROW(ThreeHexParam(1, 0, 0, 0));
    CHECK_THROWS_AS(ThreeHexParam(0.5, 0.5, 0, 0), std::domain_error);
    CHECK_THROWS_AS(ThreeHexParam(1.2, 0, 0, -0.2), std::domain_error);
    const auto free = ThreeHexParam::from_free(0.4, 0.1, 0.05);
    CHECK(free[3] == Approx(1.0 - 0.4 - 0.3 - 0.15));
    CHECK(ThreeHexParam(1, 0, 0, 0).zero_marginal() == 1.0);
    CHECK(ThreeHexParam(0, 0, 0, 1).one_marginal() == 1.0);
}

TEST_CASE("bernoulli entropy values") {
    CHECK(entropy_bernoulli(BernoulliParam{0.5}) == Approx(0.693147).epsilon(1e-6));
    CHECK(entropy_bernoulli(BernoulliParam{0.0}) == 0.0);
    CHECK(entropy_bernoulli(BernoulliParam{1.0}) == 0.0);
    const double p = 0.1702;
    CHECK(entropy_bernoulli(BernoulliParam{p}) ==
          Approx(-p * std::log(p) - (1 - p) * std::log1p(-p)).epsilon(1e-14));
    CHECK(entropy_bernoulli(BernoulliParam{p}) == Approx(0.456203).epsilon(1e-6));
}

TEST_CASE("bipartite bound") {
    auto r = bound_bipartite(BernoulliParam{0.1702}, 4);
    CHECK(std::abs(r.value - 0.3924) < 5e-4);
    check_densities(r.densities, {0.1702, 0.2370}, 5e-4);
    r = bound_bipartite(BernoulliParam{0.2202}, 3);
    CHECK(std::abs(r.value - 0.4279) < 5e-4);
    check_densities(r.densities, {0.2202, 0.2371}, 5e-4);
    for (int m : {3, 4}) {
        r = bound_bipartite(BernoulliParam{0.0}, m);
        CHECK(r.value == Approx(0.5 * ln2).epsilon(1e-14));
        check_densities(r.densities, {0.0, 0.5}, 1e-15);
    }
    CHECK_THROWS(bound_bipartite(BernoulliParam{0.2}, 5));
}

TEST_CASE("bipartite derivative matches central differences") {
    for (int m : {3, 4})
        for (double p : {0.05, 0.17, 0.3, 0.6}) {
            const double h = 1e-6;
            const double fd = (bound_bipartite(BernoulliParam{p + h}, m).value -
                               bound_bipartite(BernoulliParam{p - h}, m).value) / (2 * h);
            CHECK(bound_bipartite_derivative(p, m) == Approx(fd).epsilon(1e-7));
        }
}

TEST_CASE("tripartite bound") {
    auto r = bound_tripartite(BernoulliParam{0.1457}, BernoulliParam{0.2501}, 3);
    CHECK(std::abs(r.value - 0.3253) < 5e-4);
    check_densities(r.densities, {0.1457, 0.1559, 0.1517}, 5e-4);
    r = bound_tripartite(BernoulliParam{0.1944}, BernoulliParam{0.3002}, 2);
    CHECK(std::abs(r.value - 0.3826) < 5e-4);
    check_densities(r.densities, {0.1944, 0.1948, 0.1866}, 5e-4);
    r = bound_tripartite(BernoulliParam{0.0}, BernoulliParam{0.0}, 3);
    CHECK(r.value == Approx(ln2 / 3).epsilon(1e-14));
}

TEST_CASE("square-moore bound") {
    auto r = bound_square_moore(BernoulliParam{0.119}, BernoulliParam{0.1636}, BernoulliParam{0.3122});
    CHECK(std::abs(r.value - 0.2858) < 5e-4);
    check_densities(r.densities, {0.119, 0.127, 0.130, 0.126}, 1e-3);
    r = bound_square_moore(BernoulliParam{0}, BernoulliParam{0}, BernoulliParam{0});
    CHECK(r.value == Approx(ln2 / 4).epsilon(1e-14));
}

TEST_CASE("equalized bound") {
    CHECK(bound_equalized_bipartite(BernoulliParam{0.0}, 4).value == 0.0);
    const double p = 0.15;
    const auto r = bound_equalized_bipartite(BernoulliParam{p}, 4);
    check_densities(r.densities, {p, p}, 1e-14);
    const double pp = p / std::pow(1 - p, 4);
    CHECK(r.value == Approx(0.5 * (bernoulli_entropy(p) + std::pow(1 - p, 4) * bernoulli_entropy(pp))));
    CHECK_THROWS_AS(bound_equalized_bipartite(BernoulliParam{0.4}, 4), std::domain_error);
    CHECK(equalization_limit(4) > 0.2);
    CHECK_NOTHROW(bound_equalized_bipartite(BernoulliParam{equalization_limit(4)}, 4));
}

TEST_CASE("three-hex bounds") {
    // Printed vectors are rounded to three decimals; the last entry absorbs the rest.
    const ThreeHexParam hp(0.504, 0.110, 0.048, 1.0 - 0.504 - 3 * 0.110 - 3 * 0.048);
    auto r = bound_three_hex_honeycomb(hp);
    CHECK(std::abs(r.value - 0.4304) < 1e-3);
    check_densities(r.densities, {0.2276, 0.2376}, 5e-3);
    r = bound_three_hex_honeycomb(ThreeHexParam(1, 0, 0, 0));
    CHECK(r.value == Approx(0.5 * ln2).epsilon(1e-14));

    const ThreeHexParam tp(0.64, 0.092, 0.025, 1.0 - 0.64 - 3 * 0.092 - 3 * 0.025);
    r = bound_three_hex_triangular(tp, BernoulliParam{0.25});
    CHECK(std::abs(r.value - 0.3265) < 2e-3);
    check_densities(r.densities, {0.153, 0.155, 0.151}, 5e-3);
    CHECK(bound_three_hex_triangular(ThreeHexParam(1, 0, 0, 0), BernoulliParam{1.0}).value == Approx(0.0));
}

TEST_CASE("three-hex schemes reduce to single-site schemes with empty circles") {
    CHECK(bound_three_hex_honeycomb(ThreeHexParam(1, 0, 0, 0)).value ==
          Approx(bound_bipartite(BernoulliParam{0.0}, 3).value).epsilon(1e-14));
    for (double q : grid11()) {
        CAPTURE(q);
        const auto hex = bound_three_hex_triangular(ThreeHexParam(1, 0, 0, 0), BernoulliParam{q});
        const auto single = bound_tripartite(BernoulliParam{0.0}, BernoulliParam{q}, 3);
        CHECK(std::abs(hex.value - single.value) < 1e-12);
    }
}

TEST_CASE("misprinted variants do not reproduce the reference optima") {
    // Exponent 2 agrees with the corrected form only when m' = 2.
    for (double p : {0.1, 0.2})
        for (double q : {0.2, 0.4})
            CHECK(detail::printed_tripartite(p, q, 2) ==
                  Approx(bound_tripartite(BernoulliParam{p}, BernoulliParam{q}, 2).value).epsilon(1e-14));
    const auto corrected = optimize_closed(LatticeKind::Triangular);
    const double printed_at_opt = detail::printed_tripartite(corrected.params[0], corrected.params[1], 3);
    CHECK(std::abs(printed_at_opt - 0.3253) > 5e-4);

    const auto hex = optimize_three_hex(LatticeKind::Triangular);
    const ThreeHexParam pv(hex.params[0], hex.params[1], hex.params[2], hex.params[3]);
    const double misprint = detail::printed_three_hex_triangular(pv, hex.params[4]);
    CHECK(std::abs(misprint - 0.3265) > 0.1);
    CHECK(std::abs(misprint - 0.505) < 5e-3);
}

TEST_CASE("bound invariants over parameter grids") {
    for (double p : grid11()) {
        for (int m : {3, 4}) {
            const auto r = bound_bipartite(BernoulliParam{p}, m);
            CHECK_NOTHROW(check_report(r));
            CHECK(r.value <= ln2);
        }
        for (double q : grid11()) {
            for (int mp : {2, 3}) {
                const auto r = bound_tripartite(BernoulliParam{p}, BernoulliParam{q}, mp);
                CHECK_NOTHROW(check_report(r));
                CHECK(r.densities.size() == 3);
            }
            const auto r = bound_square_moore(BernoulliParam{p}, BernoulliParam{q}, BernoulliParam{0.5});
            CHECK_NOTHROW(check_report(r));
            CHECK(r.densities.size() == 4);
        }
    }
}

TEST_CASE("optima stay below the reference entropies and refine monotonically") {
    for (auto kind : all_lattice_kinds) {
        const auto r = optimize_closed(kind);
        if (auto ref = reference_constant(kind)) CHECK(r.value <= ref->entropy);
    }
    const auto hex_h = optimize_three_hex(LatticeKind::Honeycomb);
    const auto hex_t = optimize_three_hex(LatticeKind::Triangular);
    CHECK(hex_h.value >= optimize_closed(LatticeKind::Honeycomb).value);
    CHECK(hex_t.value >= optimize_closed(LatticeKind::Triangular).value);
    CHECK(hex_h.value <= reference_constant(LatticeKind::Honeycomb)->entropy);
    CHECK(hex_t.value <= reference_constant(LatticeKind::Triangular)->entropy);
    const auto eq = optimize_equalized(LatticeKind::Square);
    CHECK(std::abs(eq.value - 0.3921) < 5e-4);
    CHECK(std::abs(eq.densities[0] - 0.2015) < 5e-4);
    const auto eq_h = optimize_equalized(LatticeKind::Honeycomb);
    CHECK(std::abs(eq_h.value - 0.427875) < 5e-5);
    CHECK(std::abs(eq_h.densities[0] - 0.2284) < 5e-4);
}

TEST_CASE("reported densities match the fill-in sampler") {
    struct Point {
        LatticeKind kind;
        std::vector<double> params;
    };
    const std::vector<Point> points{
        {LatticeKind::Square, {0.1}}, {LatticeKind::Square, {0.1702}}, {LatticeKind::Square, {0.4}},
        {LatticeKind::Honeycomb, {0.1}}, {LatticeKind::Honeycomb, {0.2202}}, {LatticeKind::Honeycomb, {0.5}},
        {LatticeKind::Triangular, {0.1, 0.1}}, {LatticeKind::Triangular, {0.1457, 0.2501}},
        {LatticeKind::Triangular, {0.3, 0.6}},
        {LatticeKind::Kagome, {0.1, 0.1}}, {LatticeKind::Kagome, {0.1944, 0.3002}}, {LatticeKind::Kagome, {0.4, 0.5}},
        {LatticeKind::SquareMoore, {0.1, 0.1, 0.1}}, {LatticeKind::SquareMoore, {0.119, 0.1636, 0.3122}},
        {LatticeKind::SquareMoore, {0.3, 0.2, 0.5}},
    };
    std::uint64_t seed = 11;
    for (const auto& pt : points) {
        CAPTURE(to_string(pt.kind));
        CAPTURE(pt.params[0]);
        const auto report = closed_bound(pt.kind, pt.params);
        const auto sample = fill_in_sample(pt.kind, pt.params, {240, 240}, seed++);
        REQUIRE(sample.stages.size() == report.densities.size());
        for (std::size_t k = 0; k < sample.stages.size(); ++k) {
            CAPTURE(k);
            const auto& s = sample.stages[k];
            CHECK(std::abs(s.empirical_density - report.densities[k]) <= 3.0 * s.stderr_density);
        }
        CHECK(verify_hard_core(sample.config));
    }
}

TEST_CASE("three-hex densities match the three-hex sampler") {
    const std::vector<ThreeHexParam> pvecs{
        ThreeHexParam(0.504, 0.110, 0.048, 1.0 - 0.504 - 0.33 - 0.144),
        ThreeHexParam(0.3, 0.1, 0.1, 0.1), ThreeHexParam(0.7, 0.05, 0.03, 1.0 - 0.7 - 0.15 - 0.09)};
    std::uint64_t seed = 101;
    for (const auto& pv : pvecs) {
        const auto h = bound_three_hex_honeycomb(pv);
        const auto hs = three_hex_sample(LatticeKind::Honeycomb, pv, 0.0, {240, 240}, seed++);
        for (std::size_t k = 0; k < h.densities.size(); ++k)
            CHECK(std::abs(hs.stages[k].empirical_density - h.densities[k]) <= 3.0 * hs.stages[k].stderr_density);
        CHECK(verify_hard_core(hs.config));
        for (double q : {0.1, 0.25, 0.6}) {
            const auto t = bound_three_hex_triangular(pv, BernoulliParam{q});
            const auto ts = three_hex_sample(LatticeKind::Triangular, pv, q, {240, 240}, seed++);
            for (std::size_t k = 0; k < t.densities.size(); ++k)
                CHECK(std::abs(ts.stages[k].empirical_density - t.densities[k]) <=
                      3.0 * ts.stages[k].stderr_density);
            CHECK(verify_hard_core(ts.config));
        }
    }
}
