#include "hardcore/schemes.hpp"

#include <stdexcept>
#include <string>

#include "hardcore/closed_form.hpp"

namespace hardcore {

namespace {

OptimizerInfo info_of(const OptimizationResult& r) {
    return {r.iterations, r.total_iterations, r.starts_used, r.converged, r.gradient_norm};
}

int stage_params(LatticeKind kind) {
    return build_lattice(kind).partite_count - 1;
}

void require(bool ok, Scheme s, LatticeKind kind) {
    if (!ok)
        throw std::invalid_argument("scheme " + std::string(to_string(s)) + " is not defined on " +
                                    std::string(to_string(kind)));
}

} // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::Closed: return "closed";
    case Scheme::Equalized: return "equalized";
    case Scheme::ThreeHex: return "three-hex";
    case Scheme::Block: return "block";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    for (auto s : {Scheme::Closed, Scheme::Equalized, Scheme::ThreeHex, Scheme::Block})
        if (to_string(s) == name)
            return s;
    throw std::invalid_argument("unknown scheme: " + std::string(name));
}

std::vector<LatticeKind> scheme_lattices(Scheme s) {
    switch (s) {
    case Scheme::Closed: return {all_lattice_kinds.begin(), all_lattice_kinds.end()};
    case Scheme::Equalized: return {LatticeKind::Square, LatticeKind::Honeycomb};
    case Scheme::ThreeHex: return {LatticeKind::Honeycomb, LatticeKind::Triangular};
    case Scheme::Block: return {LatticeKind::Square};
    }
    return {};
}

BoundReport closed_bound(LatticeKind kind, std::span<const double> params) {
    if (static_cast<int>(params.size()) != stage_params(kind))
        throw std::invalid_argument("closed_bound: expected " + std::to_string(stage_params(kind)) +
                                    " parameters for " + std::string(to_string(kind)));
    switch (kind) {
    case LatticeKind::Square: return bound_bipartite(BernoulliParam(params[0]), 4);
    case LatticeKind::Honeycomb: return bound_bipartite(BernoulliParam(params[0]), 3);
    case LatticeKind::Triangular:
        return bound_tripartite(BernoulliParam(params[0]), BernoulliParam(params[1]), 3);
    case LatticeKind::Kagome:
        return bound_tripartite(BernoulliParam(params[0]), BernoulliParam(params[1]), 2);
    case LatticeKind::SquareMoore:
        return bound_square_moore(BernoulliParam(params[0]), BernoulliParam(params[1]),
                                  BernoulliParam(params[2]));
    }
    throw std::logic_error("unknown lattice kind");
}

BoundReport optimize_closed(LatticeKind kind, const OptimizerSettings& settings) {
    Domain domain;
    for (int i = 0; i < stage_params(kind); ++i)
        domain.add(Box{0.0, 1.0});
    Problem problem{[kind](std::span<const double> x) { return closed_bound(kind, x).value; }, {}};
    if (kind == LatticeKind::Square || kind == LatticeKind::Honeycomb) {
        const int m = kind == LatticeKind::Square ? 4 : 3;
        problem.gradient = [m](std::span<const double> x, std::span<double> g) {
            g[0] = bound_bipartite_derivative(x[0], m);
        };
    }
    const auto r = maximize(problem, domain, settings);
    auto report = closed_bound(kind, r.argmax);
    report.optimizer = info_of(r);
    return report;
}

BoundReport optimize_equalized(LatticeKind kind, const OptimizerSettings& settings) {
    require(kind == LatticeKind::Square || kind == LatticeKind::Honeycomb, Scheme::Equalized, kind);
    const int m = build_lattice(kind).coordination;
    const Domain domain({Box{0.0, equalization_limit(m)}});
    const Problem problem{
        [m](std::span<const double> x) { return bound_equalized_bipartite(BernoulliParam(x[0]), m).value; }, {}};
    const auto r = maximize(problem, domain, settings);
    auto report = bound_equalized_bipartite(BernoulliParam(r.argmax[0]), m);
    report.optimizer = info_of(r);
    return report;
}

BoundReport optimize_three_hex(LatticeKind kind, const OptimizerSettings& settings) {
    require(kind == LatticeKind::Honeycomb || kind == LatticeKind::Triangular, Scheme::ThreeHex, kind);
    const bool tri = kind == LatticeKind::Triangular;
    Domain domain({Simplex{{1.0, 3.0, 3.0, 1.0}}});
    if (tri)
        domain.add(Box{0.0, 1.0});
    auto evaluate = [tri](std::span<const double> x) {
        const ThreeHexParam p(x[0], x[1], x[2], x[3]);
        return tri ? bound_three_hex_triangular(p, BernoulliParam(x[4])) : bound_three_hex_honeycomb(p);
    };
    const Problem problem{[&](std::span<const double> x) { return evaluate(x).value; }, {}};
    const auto r = maximize(problem, domain, settings);
    auto report = evaluate(r.argmax);
    report.optimizer = info_of(r);
    return report;
}

BlockOptimum optimize_block(std::shared_ptr<const BlockFamily> family, const OptimizerSettings& settings,
                            const BlockOptions& options) {
    if (!family)
        throw std::invalid_argument("optimize_block needs a family");
    const auto objective = std::make_shared<const BlockObjective>(family);
    const auto mult = family->multiplicities();
    const std::size_t classes = family->class_count();

    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < classes; ++c)
        if (!(options.prune_below > 0.0 && options.warm_start && options.warm_start->probs()[c] < options.prune_below))
            kept.push_back(c);
    if (kept.empty())
        throw std::invalid_argument("pruning removed every block class");

    std::vector<double> weights;
    for (auto c : kept)
        weights.push_back(mult[c]);
    const Domain domain({Simplex{weights}});

    auto expand = [kept, classes](std::span<const double> x) {
        std::vector<double> full(classes, 0.0);
        for (std::size_t i = 0; i < kept.size(); ++i)
            full[kept[i]] = x[i];
        return full;
    };
    Problem problem;
    problem.value = [objective, expand](std::span<const double> x) { return objective->value(expand(x)); };
    problem.gradient = [objective, expand, kept, classes](std::span<const double> x, std::span<double> g) {
        std::vector<double> full_g(classes);
        objective->gradient(expand(x), full_g);
        for (std::size_t i = 0; i < kept.size(); ++i)
            g[i] = full_g[kept[i]];
    };

    auto s = settings;
    if (options.warm_start) {
        if (options.warm_start->family().n() != family->n() ||
            options.warm_start->family().class_count() != classes)
            throw std::invalid_argument("warm start belongs to a different family");
        std::vector<double> x;
        double total = 0.0;
        for (auto c : kept) {
            x.push_back(options.warm_start->probs()[c]);
            total += mult[c] * x.back();
        }
        for (auto& v : x)
            v /= total;
        s.initial_points.insert(s.initial_points.begin(), std::move(x));
    }
    const auto r = maximize(problem, domain, s);
    auto full = expand(r.argmax);
    double total = 0.0;
    for (std::size_t c = 0; c < classes; ++c)
        total += mult[c] * full[c];
    for (auto& v : full)
        v /= total;
    BlockDistribution dist(family, std::move(full));
    auto report = block_bound(dist);
    report.optimizer = info_of(r);
    return {std::move(report), std::move(dist)};
}

} // namespace hardcore
