#include "hardcore/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hardcore/entropy.hpp"

namespace hardcore {

namespace {

constexpr double ln2 = std::numbers::ln2;

void require_exponent(int m, int lo, int hi, const char* what) {
    if (m < lo || m > hi)
        throw std::domain_error(std::string(what) + ": exponent " + std::to_string(m) +
                                " not supported");
}

} // namespace

BernoulliParam::BernoulliParam(double p) : p_(p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("probability outside [0,1]: " + std::to_string(p));
}

ThreeHexParam::ThreeHexParam(double p0, double p1, double p2, double p3) : p_{p0, p1, p2, p3} {
    for (double v : p_)
        if (!(v >= 0.0))
            throw std::domain_error("three-hex probability must be non-negative");
    const double total = p0 + 3.0 * p1 + 3.0 * p2 + p3;
    if (std::abs(total - 1.0) > 1e-12)
        throw std::domain_error("three-hex probabilities violate p0+3p1+3p2+p3=1 (sum " +
                                std::to_string(total) + ")");
}

ThreeHexParam ThreeHexParam::from_free(double p0, double p1, double p2) {
    return {p0, p1, p2, 1.0 - p0 - 3.0 * p1 - 3.0 * p2};
}

double ThreeHexParam::entropy() const {
    return weighted_entropy(p_, multiplicities);
}

double entropy_bernoulli(BernoulliParam p) {
    return bernoulli_entropy(p.value());
}

BoundReport bound_bipartite(BernoulliParam p_param, int m) {
    require_exponent(m, 3, 4, "bound_bipartite");
    const double p = p_param.value();
    const double free_odd = std::pow(1.0 - p, m);
    BoundReport r;
    r.scheme = "closed";
    r.lattice = m == 4 ? "square" : "honeycomb";
    r.value = 0.5 * (bernoulli_entropy(p) + free_odd * ln2);
    r.param_names = {"p"};
    r.params = {p};
    r.densities = {p, free_odd / 2.0};
    return r;
}

double bound_bipartite_derivative(double p, int m) {
    require_exponent(m, 3, 4, "bound_bipartite_derivative");
    return 0.5 * (std::log((1.0 - p) / p) - m * std::pow(1.0 - p, m - 1) * ln2);
}

BoundReport bound_tripartite(BernoulliParam p_param, BernoulliParam q_param, int m_prime) {
    require_exponent(m_prime, 2, 3, "bound_tripartite");
    const double p = p_param.value();
    const double q = q_param.value();
    const double dot_free = std::pow(1.0 - p, m_prime);
    // Each dot next to a triangle is 0 unless its one outside circle is 0 and it drew a 1.
    const double tri_free = dot_free * std::pow(1.0 - (1.0 - p) * q, m_prime);
    BoundReport r;
    r.scheme = "closed";
    r.lattice = m_prime == 3 ? "triangular" : "kagome";
    r.value = (bernoulli_entropy(p) + dot_free * bernoulli_entropy(q) + tri_free * ln2) / 3.0;
    r.param_names = {"p", "q"};
    r.params = {p, q};
    r.densities = {p, dot_free * q, tri_free / 2.0};
    return r;
}

BoundReport bound_square_moore(BernoulliParam p_param, BernoulliParam q_param,
                               BernoulliParam r_param) {
    const double p = p_param.value();
    const double q = q_param.value();
    const double rr = r_param.value();
    const double a = 1.0 - (1.0 - p) * q;
    const double dot_free = std::pow(1.0 - p, 2);
    const double tri_free = dot_free * std::pow(a, 4);
    const double dia_free =
        std::pow(1.0 - p, 4) * std::pow(1.0 - q, 2) * std::pow(1.0 - a * a * rr, 2);
    BoundReport r;
    r.scheme = "closed";
    r.lattice = "square-moore";
    r.value = (bernoulli_entropy(p) + dot_free * bernoulli_entropy(q) +
               tri_free * bernoulli_entropy(rr) + dia_free * ln2) /
              4.0;
    r.param_names = {"p", "q", "r"};
    r.params = {p, q, rr};
    r.densities = {p, dot_free * q, tri_free * rr, dia_free / 2.0};
    return r;
}

double equalization_limit(int m) {
    require_exponent(m, 3, 4, "equalization_limit");
    // p (1-p)^-m is increasing on [0,1); find where it reaches 1.
    double lo = 0.0;
    double hi = 0.5;
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid <= std::pow(1.0 - mid, m) ? lo : hi) = mid;
    }
    return lo;
}

BoundReport bound_equalized_bipartite(BernoulliParam p_param, int m) {
    require_exponent(m, 3, 4, "bound_equalized_bipartite");
    const double p = p_param.value();
    const double free_odd = std::pow(1.0 - p, m);
    const double p_last = p == 0.0 ? 0.0 : p / free_odd;
    if (p_last > 1.0)
        throw std::domain_error("equalization infeasible at this p (p' = " +
                                std::to_string(p_last) + ")");
    BoundReport r;
    r.scheme = "equalized";
    r.lattice = m == 4 ? "square" : "honeycomb";
    r.value = 0.5 * (bernoulli_entropy(p) + free_odd * bernoulli_entropy(p_last));
    r.param_names = {"p", "p_last"};
    r.params = {p, p_last};
    r.densities = {p, free_odd * p_last};
    return r;
}

BoundReport bound_three_hex_honeycomb(const ThreeHexParam& pvec) {
    const double a = pvec.zero_marginal();
    // One dot per three-hex sits at its centre (free iff the three-hex is empty);
    // the other two touch three different three-hexes.
    const double dot_free = pvec[0] + 2.0 * a * a * a;
    BoundReport r;
    r.scheme = "three-hex";
    r.lattice = "honeycomb";
    r.value = (pvec.entropy() + dot_free * ln2) / 6.0;
    r.param_names = {"p0", "p1", "p2", "p3"};
    r.params = {pvec[0], pvec[1], pvec[2], pvec[3]};
    r.densities = {pvec.one_marginal(), dot_free / 6.0};
    return r;
}

BoundReport bound_three_hex_triangular(const ThreeHexParam& pvec, BernoulliParam q_param) {
    const double q = q_param.value();
    const double a = pvec.zero_marginal();
    const double dot_free = pvec[0] + 2.0 * a * a * a;
    const double tri_free = a * (pvec[1] + pvec[0] * (1.0 - q)) * std::pow(1.0 - a * q, 2);
    BoundReport r;
    r.scheme = "three-hex";
    r.lattice = "triangular";
    r.value = (pvec.entropy() + dot_free * bernoulli_entropy(q) + 3.0 * tri_free * ln2) / 9.0;
    r.param_names = {"p0", "p1", "p2", "p3", "q"};
    r.params = {pvec[0], pvec[1], pvec[2], pvec[3], q};
    r.densities = {pvec.one_marginal(), dot_free / 3.0 * q, tri_free / 2.0};
    return r;
}

std::vector<double> sequential_unforced(LatticeKind kind, std::span<const double> params) {
    const auto spec = build_lattice(kind);
    if (params.size() + 1 != static_cast<std::size_t>(spec.partite_count))
        throw std::invalid_argument("sequential_unforced: expected " +
                                    std::to_string(spec.partite_count - 1) + " parameters");
    for (double v : params)
        (void)BernoulliParam{v};
    switch (kind) {
    case LatticeKind::Square:
    case LatticeKind::Honeycomb:
        return {1.0, std::pow(1.0 - params[0], spec.coordination)};
    case LatticeKind::Triangular:
    case LatticeKind::Kagome: {
        const int m = kind == LatticeKind::Triangular ? 3 : 2;
        const double p = params[0];
        const double q = params[1];
        const double dot_free = std::pow(1.0 - p, m);
        return {1.0, dot_free, dot_free * std::pow(1.0 - (1.0 - p) * q, m)};
    }
    case LatticeKind::SquareMoore: {
        const double p = params[0];
        const double q = params[1];
        const double r = params[2];
        const double a = 1.0 - (1.0 - p) * q;
        return {1.0, std::pow(1.0 - p, 2), std::pow(1.0 - p, 2) * std::pow(a, 4),
                std::pow(1.0 - p, 4) * std::pow(1.0 - q, 2) * std::pow(1.0 - a * a * r, 2)};
    }
    }
    throw std::logic_error("unknown lattice kind");
}

std::vector<double> three_hex_unforced(LatticeKind kind, const ThreeHexParam& pvec, double q) {
    (void)BernoulliParam{q};
    const double a = pvec.zero_marginal();
    const double dot_free = (pvec[0] + 2.0 * a * a * a) / 3.0;
    switch (kind) {
    case LatticeKind::Honeycomb:
        return {1.0, dot_free};
    case LatticeKind::Triangular:
        return {1.0, dot_free, a * (pvec[1] + pvec[0] * (1.0 - q)) * std::pow(1.0 - a * q, 2)};
    default:
        throw std::invalid_argument("three-hex schemes exist only for honeycomb and triangular");
    }
}

} // namespace hardcore
