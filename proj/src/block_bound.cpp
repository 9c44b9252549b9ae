#include "hardcore/block_bound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hardcore/entropy.hpp"

namespace hardcore {

namespace {

constexpr double ln2 = std::numbers::ln2;

struct Layout {
    std::size_t interior;
    std::size_t side; // dominoes per side
};

Layout layout(int n) {
    return {static_cast<std::size_t>((n - 1) * (n - 1)), static_cast<std::size_t>(n - 1)};
}

// u * n^2 from the zero-set marginals in marginal_zero_sets order.
double unforced_sum(int n, std::span<const double> m) {
    const auto [interior, side] = layout(n);
    const double* top = m.data() + interior;
    const double* bottom = top + side;
    const double* left = bottom + side;
    const double* right = left + side;
    const double* corner = right + side;
    double total = 0.0;
    for (std::size_t k = 0; k < interior; ++k)
        total += m[k];
    for (std::size_t k = 0; k < side; ++k)
        total += right[k] * left[k] + bottom[k] * top[k];
    return total + corner[0] * corner[1] * corner[2] * corner[3];
}

// d(u * n^2) / d(marginal).
std::vector<double> unforced_sum_gradient(int n, std::span<const double> m) {
    const auto [interior, side] = layout(n);
    std::vector<double> g(m.size(), 0.0);
    const std::size_t top = interior;
    const std::size_t bottom = top + side;
    const std::size_t left = bottom + side;
    const std::size_t right = left + side;
    const std::size_t corner = right + side;
    for (std::size_t k = 0; k < interior; ++k)
        g[k] = 1.0;
    for (std::size_t k = 0; k < side; ++k) {
        g[right + k] = m[left + k];
        g[left + k] = m[right + k];
        g[bottom + k] = m[top + k];
        g[top + k] = m[bottom + k];
    }
    for (std::size_t c = 0; c < 4; ++c) {
        double prod = 1.0;
        for (std::size_t o = 0; o < 4; ++o)
            if (o != c)
                prod *= m[corner + o];
        g[corner + c] = prod;
    }
    return g;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

} // namespace

BlockDistribution::BlockDistribution(std::shared_ptr<const BlockFamily> family, std::vector<double> probs,
                                     double tol)
    : family_(std::move(family)), probs_(std::move(probs)) {
    if (!family_)
        throw std::invalid_argument("block distribution needs a family");
    check_simplex(*family_, probs_, tol);
}

double BlockDistribution::density() const {
    const auto classes = family_->classes();
    double ones = 0.0;
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (Mask m : classes[c].members)
            ones += probs_[c] * std::popcount(m);
    return ones / (family_->n() * family_->n());
}

BlockObjective::BlockObjective(std::shared_ptr<const BlockFamily> family) : family_(std::move(family)) {
    const auto classes = family_->classes();
    const auto sets = marginal_zero_sets(family_->n());
    events_ = sets.size();
    mult_ = family_->multiplicities();
    ones_.assign(classes.size(), 0.0);
    counts_.assign(events_ * classes.size(), 0.0);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (Mask m : classes[c].members) {
            ones_[c] += std::popcount(m);
            for (std::size_t e = 0; e < events_; ++e)
                if ((m & sets[e]) == 0)
                    counts_[e * classes.size() + c] += 1.0;
        }
    }
}

std::vector<double> BlockObjective::marginals(std::span<const double> probs) const {
    const std::size_t classes = mult_.size();
    std::vector<double> m(events_, 0.0);
    for (std::size_t e = 0; e < events_; ++e) {
        const double* row = counts_.data() + e * classes;
        double acc = 0.0;
        for (std::size_t c = 0; c < classes; ++c)
            acc += row[c] * probs[c];
        m[e] = acc;
    }
    return m;
}

double BlockObjective::entropy_term(std::span<const double> probs) const {
    double h = 0.0;
    for (std::size_t c = 0; c < mult_.size(); ++c)
        h -= mult_[c] * xlogx(probs[c]);
    const int n = family_->n();
    return h / (n * n);
}

double BlockObjective::unforced(std::span<const double> probs) const {
    const int n = family_->n();
    return unforced_sum(n, marginals(probs)) / (n * n);
}

double BlockObjective::mean_ones(std::span<const double> probs) const {
    double total = 0.0;
    for (std::size_t c = 0; c < ones_.size(); ++c)
        total += ones_[c] * probs[c];
    return total;
}

double BlockObjective::value(std::span<const double> probs) const {
    if (probs.size() != mult_.size())
        throw std::invalid_argument("block objective: wrong number of class probabilities");
    return 0.5 * (entropy_term(probs) + unforced(probs) * ln2);
}

void BlockObjective::gradient(std::span<const double> probs, std::span<double> g) const {
    const int n = family_->n();
    const double scale = 0.5 / (n * n);
    const std::size_t classes = mult_.size();
    const auto m = marginals(probs);
    const auto dm = unforced_sum_gradient(n, m);
    for (std::size_t c = 0; c < classes; ++c)
        g[c] = -scale * mult_[c] * (std::log(std::max(probs[c], 1e-300)) + 1.0);
    for (std::size_t e = 0; e < events_; ++e) {
        const double w = scale * ln2 * dm[e];
        const double* row = counts_.data() + e * classes;
        for (std::size_t c = 0; c < classes; ++c)
            g[c] += w * row[c];
    }
}

double block_entropy_term(const BlockDistribution& dist) {
    const auto mult = dist.family().multiplicities();
    const int n = dist.n();
    return weighted_entropy(dist.probs(), mult) / (n * n);
}

double unforced_odd_density(const BlockDistribution& dist) {
    const int n = dist.n();
    const auto bm = boundary_marginals(dist.family(), dist.probs());
    std::vector<double> flat(bm.interior);
    for (const auto& s : bm.sides)
        flat.insert(flat.end(), s.begin(), s.end());
    flat.insert(flat.end(), bm.corners.begin(), bm.corners.end());
    return unforced_sum(n, flat) / (n * n);
}

BoundReport block_bound(const BlockDistribution& dist) {
    const double h = block_entropy_term(dist);
    const double u = unforced_odd_density(dist);
    BoundReport r;
    r.scheme = "block";
    r.lattice = "square";
    r.block_size = dist.n();
    r.value = 0.5 * (h + u * ln2);
    const auto classes = dist.family().classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        r.param_names.push_back("p[" + std::to_string(classes[c].representative) + "]");
        r.params.push_back(dist.probs()[c]);
    }
    r.densities = {dist.density(), u / 2.0};
    return r;
}

std::vector<MonotonicityViolation> check_monotonicity(const BlockDistribution& dist, double tol) {
    std::vector<MonotonicityViolation> out;
    const auto p = dist.probs();
    for (const auto& pair : inclusion_pairs(dist.family())) {
        const double a = p[pair.sub];
        const double b = p[pair.super];
        const double slack = tol * std::max(a, b);
        const bool ok = pair.strict ? a > b - slack : std::abs(a - b) <= slack;
        if (!ok)
            out.push_back({pair, a, b});
    }
    return out;
}

double DensityProfile::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < occupancy.size(); ++k)
        m += static_cast<double>(k) * occupancy[k];
    return m;
}

double DensityProfile::variance() const {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t k = 0; k < occupancy.size(); ++k)
        v += (static_cast<double>(k) - mu) * (static_cast<double>(k) - mu) * occupancy[k];
    return v;
}

DensityProfile density_profile(int n, const BlockDistribution& generator) {
    check_block_side(n);
    const int m = generator.n();
    if (m > n)
        throw std::invalid_argument("generator blocks must not exceed the window size");
    DensityProfile profile;
    profile.n = n;
    profile.generator = std::to_string(m) + "x" + std::to_string(m);
    profile.occupancy.assign(static_cast<std::size_t>(n * n + 1), 0.0);
    const Mask gen_masks = static_cast<Mask>(generator.family().mask_count());

    if (m == n) {
        for (Mask mask = 0; mask < gen_masks; ++mask)
            profile.occupancy[static_cast<std::size_t>(std::popcount(mask))] += generator.prob_of(mask);
        return profile;
    }

    const double weight = 1.0 / (m * m);
    for (int dy = 0; dy < m; ++dy) {
        for (int dx = 0; dx < m; ++dx) {
            std::vector<double> dist{1.0};
            const int rows = (dy + n - 1) / m + 1;
            const int cols = (dx + n - 1) / m + 1;
            for (int bi = 0; bi < rows; ++bi) {
                for (int bj = 0; bj < cols; ++bj) {
                    Mask rect = 0;
                    for (int i = 0; i < m; ++i) {
                        const int r = bi * m + i - dy;
                        for (int j = 0; j < m; ++j) {
                            const int c = bj * m + j - dx;
                            if (r >= 0 && r < n && c >= 0 && c < n)
                                rect |= Mask{1} << (i * m + j);
                        }
                    }
                    std::vector<double> part(static_cast<std::size_t>(std::popcount(rect) + 1), 0.0);
                    for (Mask mask = 0; mask < gen_masks; ++mask)
                        part[static_cast<std::size_t>(std::popcount(mask & rect))] += generator.prob_of(mask);
                    dist = convolve(dist, part);
                }
            }
            for (std::size_t k = 0; k < profile.occupancy.size(); ++k)
                profile.occupancy[k] += weight * dist[k];
        }
    }
    return profile;
}

std::vector<int> profile_crossings(const DensityProfile& a, const DensityProfile& b) {
    if (a.occupancy.size() != b.occupancy.size())
        throw std::invalid_argument("profiles have different lengths");
    std::vector<int> out;
    for (std::size_t k = 0; k + 1 < a.occupancy.size(); ++k) {
        const double d0 = a.occupancy[k] - b.occupancy[k];
        const double d1 = a.occupancy[k + 1] - b.occupancy[k + 1];
        if (d0 == 0.0 || (d0 < 0.0) != (d1 < 0.0))
            out.push_back(static_cast<int>(k));
    }
    return out;
}

BlockDistribution extend_distribution(const BlockDistribution& opt, std::shared_ptr<const BlockFamily> larger) {
    const int n = opt.n();
    if (!larger || larger->n() != n + 1)
        throw std::invalid_argument("extend_distribution needs the family of side n+1");
    const int big = n + 1;
    const double rho = opt.density();
    std::vector<double> probs(larger->class_count(), 0.0);
    const auto classes = larger->classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        double total = 0.0;
        for (Mask mask : classes[c].members) {
            Mask sub = 0;
            int frame_ones = 0;
            for (int i = 0; i < big; ++i) {
                for (int j = 0; j < big; ++j) {
                    const bool bit = (mask >> (i * big + j)) & 1u;
                    if (i < n && j < n)
                        sub |= static_cast<Mask>(bit) << (i * n + j);
                    else
                        frame_ones += bit;
                }
            }
            total += opt.prob_of(sub) * std::pow(rho, frame_ones) * std::pow(1.0 - rho, 2 * n + 1 - frame_ones);
        }
        probs[c] = total / static_cast<double>(classes[c].multiplicity());
    }
    return BlockDistribution(std::move(larger), std::move(probs), 1e-9);
}

} // namespace hardcore
