#include "hardcore/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "hardcore/block_bound.hpp"
#include "hardcore/closed_form.hpp"
#include "hardcore/oracles.hpp"
#include "hardcore/schemes.hpp"
#include "printed_variants.hpp"

namespace hardcore {

namespace {

struct Target {
    LatticeKind kind;
    double value;
    std::vector<double> densities;
};

SubCheck near(std::string label, double got, double want, double tol) {
    const bool ok = std::abs(got - want) <= tol;
    return {std::move(label), ok, fmt::format("{:.6f} vs {} (tol {:g})", got, want, tol)};
}

SubCheck densities_near(std::string label, const std::vector<double>& got, const std::vector<double>& want,
                        double tol) {
    bool ok = got.size() == want.size();
    double worst = 0.0;
    for (std::size_t i = 0; ok && i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]));
    ok = ok && worst <= tol;
    std::string g;
    std::string w;
    for (std::size_t i = 0; i < got.size(); ++i)
        g += fmt::format("{}{:.4f}", i ? ", " : "", got[i]);
    for (std::size_t i = 0; i < want.size(); ++i)
        w += fmt::format("{}{}", i ? ", " : "", want[i]);
    return {std::move(label), ok, fmt::format("({}) vs ({}), max dev {:.4f} (tol {:g})", g, w, worst, tol)};
}

SubCheck within_time(double seconds, double limit) {
    return {"runtime", seconds < limit, fmt::format("{:.1f} s (limit {:g} s)", seconds, limit)};
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string name(LatticeKind k) {
    return std::string(to_string(k));
}

CriterionResult table1(const AcceptanceOptions& o) {
    CriterionResult r{1, "closed-form optima for the five lattices", {}, 0.0};
    const std::vector<Target> targets{
        {LatticeKind::Square, 0.3924, {0.1702, 0.2370}},
        {LatticeKind::Honeycomb, 0.4279, {0.2202, 0.2371}},
        {LatticeKind::Triangular, 0.3253, {0.1457, 0.1559, 0.1517}},
        {LatticeKind::Kagome, 0.3826, {0.1944, 0.1948, 0.1866}},
        {LatticeKind::SquareMoore, 0.2858, {0.119, 0.127, 0.130, 0.126}},
    };
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& t : targets) {
        const auto rep = optimize_closed(t.kind, o.optimizer);
        r.checks.push_back(near(name(t.kind) + " optimum", rep.value, t.value, 5e-4));
        r.checks.push_back(densities_near(name(t.kind) + " densities", rep.densities, t.densities, 5e-3));
    }
    r.checks.push_back(within_time(since(t0), 60.0));
    return r;
}

CriterionResult typo_regressions(const AcceptanceOptions& o) {
    CriterionResult r{2, "misprinted variants fail to reproduce the reference optima", {}, 0.0};
    const Domain square({Box{0.0, 1.0}, Box{0.0, 1.0}});
    const Problem printed{[](std::span<const double> x) { return detail::printed_tripartite(x[0], x[1], 3); }, {}};
    const auto best = maximize(printed, square, o.optimizer);
    r.checks.push_back({"triangular bound with final exponent 2 misses 0.3253", std::abs(best.value - 0.3253) > 5e-4,
                        fmt::format("optimum {:.6f} (0.3253 +- 5e-4 would be a reproduction)", best.value)});

    const auto corrected = optimize_three_hex(LatticeKind::Triangular, o.optimizer);
    const ThreeHexParam pv(corrected.params[0], corrected.params[1], corrected.params[2], corrected.params[3]);
    const double misprint = detail::printed_three_hex_triangular(pv, corrected.params[4]);
    r.checks.push_back({"three-hex triangular bound with a^3 (2-q)^2 term misses 0.3265",
                        std::abs(misprint - 0.3265) > 1e-3,
                        fmt::format("{:.6f} at the corrected optimum", misprint)});
    r.checks.push_back(near("misprinted three-hex value at the corrected optimum", misprint, 0.505, 5e-3));
    return r;
}

CriterionResult table2(const AcceptanceOptions& o) {
    CriterionResult r{3, "three-hex optima", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const auto h = optimize_three_hex(LatticeKind::Honeycomb, o.optimizer);
    r.checks.push_back(near("honeycomb three-hex optimum", h.value, 0.4304, 1e-3));
    r.checks.push_back(densities_near("honeycomb three-hex densities", h.densities, {0.2276, 0.2376}, 5e-3));
    const auto t = optimize_three_hex(LatticeKind::Triangular, o.optimizer);
    r.checks.push_back(near("triangular three-hex optimum", t.value, 0.3265, 1e-3));
    r.checks.push_back(densities_near("triangular three-hex densities", t.densities, {0.153, 0.155, 0.151}, 5e-3));
    r.checks.push_back(within_time(since(t0), 300.0));
    return r;
}

BlockOptimum block_optimum(int n, const OptimizerSettings& s) {
    return optimize_block(std::make_shared<const BlockFamily>(reduce_family(n)), s);
}

CriterionResult table3(const AcceptanceOptions& o) {
    CriterionResult r{4, "block-bound optima for n = 1, 2, 3", {}, 0.0};
    struct Row {
        int n;
        double value;
        double tol;
        std::vector<double> dens;
    };
    const std::vector<Row> rows{{1, 0.392421, 1e-5, {0.1702, 0.2370}},
                                {2, 0.39877, 2e-4, {0.1993, 0.2254}},
                                {3, 0.4014, 5e-4, {0.2073, 0.2254}}};
    for (const auto& row : rows) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto opt = block_optimum(row.n, o.optimizer);
        const auto label = fmt::format("{0}x{0}", row.n);
        r.checks.push_back(near(label + " optimum", opt.report.value, row.value, row.tol));
        r.checks.push_back(densities_near(label + " densities", opt.report.densities, row.dens, 5e-3));
        if (row.n == 3) {
            auto t = within_time(since(t0), 1800.0);
            t.label = "3x3 runtime";
            r.checks.push_back(t);
        }
    }
    return r;
}

CriterionResult reduction_counts(const AcceptanceOptions&) {
    CriterionResult r{5, "block reduction counts", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    auto count = [&](int n, Reduction red, std::size_t classes, std::size_t free, const std::string& what) {
        const auto f = reduce_family(n, red);
        const bool ok = f.class_count() == classes && f.free_variables() == free;
        r.checks.push_back({what, ok,
                            fmt::format("{} classes / {} free (expected {} / {})", f.class_count(),
                                        f.free_variables(), classes, free)});
    };
    count(2, Reduction::SymmetryWeak, 6, 5, "2x2 classes");
    count(3, Reduction::Symmetry, 102, 101, "3x3 symmetry-only free variables");
    count(3, Reduction::SymmetryWeak, 47, 46, "3x3 free variables after weak reduction");
    count(4, Reduction::SymmetryWeak, 992, 991, "4x4 free variables after weak reduction");
    r.checks.push_back(within_time(since(t0), 60.0));
    return r;
}

CriterionResult blocking(const AcceptanceOptions& o) {
    CriterionResult r{6, "blocking constants and density interval", {}, 0.0};
    const auto c = blocking_constant_lower();
    r.checks.push_back({"lower blocking constant", c == Rational(15, 8), fmt::format("{} (expected 15/8)", c.str())});
    const auto upper = blocking_constant_upper(o.h_ref);
    r.checks.push_back(near("upper blocking constant", upper.c_max, 2.6801, 1e-3));
    r.checks.push_back(near("lower density endpoint", upper.rho_min, 0.21367, 1e-4));
    const auto rho = density_upper_bound();
    r.checks.push_back({"upper density endpoint", rho == Rational(8, 31), fmt::format("{} (expected 8/31)", rho.str())});
    return r;
}

CriterionResult equalization(const AcceptanceOptions& o) {
    CriterionResult r{7, "density-equalized optima", {}, 0.0};
    const auto sq = optimize_equalized(LatticeKind::Square, o.optimizer);
    r.checks.push_back(near("square equalized optimum", sq.value, 0.3921, 5e-4));
    r.checks.push_back(near("square joint density", sq.densities[0], 0.2015, 5e-3));
    const auto hx = optimize_equalized(LatticeKind::Honeycomb, o.optimizer);
    r.checks.push_back(near("honeycomb equalized optimum", hx.value, 0.427875, 5e-4));
    r.checks.push_back(near("honeycomb joint density", hx.densities[0], 0.2284, 5e-3));
    return r;
}

CriterionResult oracle_checks(const AcceptanceOptions& o) {
    CriterionResult r{8, "transfer-matrix and exhaustive-window oracles", {}, 0.0};
    const double golden = std::log(std::numbers::phi);
    const double e1 = entropy_1d();
    r.checks.push_back({"1-D entropy equals ln of the golden mean", std::abs(e1 - golden) <= 1e-12,
                        fmt::format("{:.15f} vs {:.15f}", e1, golden)});
    r.checks.push_back(near("free strip entropy at width 12 vs reference 0.4075",
                            strip_entropy({12, StripBoundary::Free}), 0.4075, 3e-3));

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (auto kind : all_lattice_kinds) {
        const auto spec = build_lattice(kind);
        double worst = 0.0;
        for (int point = 0; point < 5; ++point) {
            std::vector<double> params(static_cast<std::size_t>(spec.partite_count - 1));
            for (auto& v : params)
                v = unif(rng);
            const auto analytic = sequential_unforced(kind, params);
            for (int stage = 0; stage < spec.partite_count; ++stage)
                worst = std::max(worst, std::abs(window_probability_exhaustive(kind, params, stage) -
                                                 analytic[static_cast<std::size_t>(stage)]));
        }
        r.checks.push_back({name(kind) + " exhaustive windows match closed forms", worst <= 1e-12,
                            fmt::format("max deviation {:.2e} over 5 random points", worst)});
    }
    return r;
}

CriterionResult sampler(const AcceptanceOptions& o) {
    CriterionResult r{9, "fill-in sampler consistency", {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    int consistent = 0;
    bool legal = true;
    std::string misses;
    for (int run = 0; run < 20; ++run) {
        const auto kind = all_lattice_kinds[static_cast<std::size_t>(run % 5)];
        const auto params = optimize_closed(kind, o.optimizer).params;
        const TorusDims dims = kind == LatticeKind::Triangular ? TorusDims{510, 510} : TorusDims{512, 512};
        const auto sample = fill_in_sample(kind, params, dims, o.seed + static_cast<std::uint64_t>(run));
        legal = legal && verify_hard_core(sample.config);
        bool ok = true;
        for (const auto& s : sample.stages) {
            if (std::abs(s.empirical_density - s.analytic_density) > 3.0 * s.stderr_density)
                ok = false;
            if (s.stage > 0 && std::abs(s.empirical_unforced - s.analytic_unforced) > 3.0 * s.stderr_unforced)
                ok = false;
        }
        if (ok)
            ++consistent;
        else
            misses += fmt::format(" {}:{}", run, name(kind));
    }
    r.checks.push_back({"runs with every stage within 3 standard errors", consistent >= 19,
                        fmt::format("{} of 20{}", consistent, misses.empty() ? "" : " (missed" + misses + ")")});
    r.checks.push_back({"every sampled configuration obeys the hard-core rule", legal, legal ? "yes" : "no"});
    r.checks.push_back(within_time(since(t0), 120.0));
    return r;
}

CriterionResult monotonicity(const AcceptanceOptions& o) {
    CriterionResult r{10, "monotonicity of optimal block probabilities", {}, 0.0};
    for (int n : {2, 3}) {
        const auto opt = block_optimum(n, o.optimizer);
        const auto violations = check_monotonicity(opt.distribution, 1e-6);
        const auto pairs = inclusion_pairs(opt.distribution.family());
        const auto equal = std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return !p.strict; });
        r.checks.push_back({fmt::format("{0}x{0} strict-inclusion violations", n), violations.empty(),
                            fmt::format("{} violations over {} pairs", violations.size(), pairs.size())});
        r.checks.push_back({fmt::format("{0}x{0} weak-equal pairs share a class", n), equal == 0,
                            fmt::format("{} weak-only pairs across distinct classes", equal)});
    }
    return r;
}

CriterionResult profiles(const AcceptanceOptions& o) {
    CriterionResult r{11, "3x3 occupancy profile properties", {}, 0.0};
    std::vector<DensityProfile> p;
    for (int m : {1, 2, 3})
        p.push_back(density_profile(3, block_optimum(m, o.optimizer).distribution));
    const double lo = std::min({p[0].mean(), p[1].mean(), p[2].mean()}) / 9.0;
    const double hi = std::max({p[0].mean(), p[1].mean(), p[2].mean()}) / 9.0;
    r.checks.push_back({"per-site profile means within 0.01 of each other", hi - lo <= 0.01,
                        fmt::format("means {:.4f}, {:.4f}, {:.4f} (1x1, 2x2, 3x3); spread {:.4f}", p[0].mean() / 9.0,
                                    p[1].mean() / 9.0, p[2].mean() / 9.0, hi - lo)});
    const bool order = p[2].variance() > p[1].variance() && p[1].variance() > p[0].variance();
    r.checks.push_back({"variance 3x3 > 2x2 > 1x1", order,
                        fmt::format("{:.4f} > {:.4f} > {:.4f}", p[2].variance(), p[1].variance(), p[0].variance())});
    const auto crossings = profile_crossings(p[2], p[0]);
    const bool crosses = std::find(crossings.begin(), crossings.end(), 3) != crossings.end();
    std::string where;
    for (int k : crossings)
        where += fmt::format(" ({},{})", k, k + 1);
    r.checks.push_back({"3x3 and 1x1 profiles cross between k = 3 and k = 4", crosses,
                        "sign changes in" + (where.empty() ? std::string(" none") : where)});
    return r;
}

} // namespace

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    switch (id) {
    case 1: r = table1(options); break;
    case 2: r = typo_regressions(options); break;
    case 3: r = table2(options); break;
    case 4: r = table3(options); break;
    case 5: r = reduction_counts(options); break;
    case 6: r = blocking(options); break;
    case 7: r = equalization(options); break;
    case 8: r = oracle_checks(options); break;
    case 9: r = sampler(options); break;
    case 10: r = monotonicity(options); break;
    case 11: r = profiles(options); break;
    default: throw std::out_of_range("no acceptance criterion " + std::to_string(id));
    }
    r.seconds = since(t0);
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= acceptance_criteria; ++id)
        out.push_back(run_criterion(id, options));
    return out;
}

} // namespace hardcore
