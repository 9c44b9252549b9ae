#include "hardcore/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hardcore/entropy.hpp"

namespace hardcore {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int wrap(int v, int m) {
    return ((v % m) + m) % m;
}

int stage_of(const LatticeSpec& spec, Sublattice s) {
    const auto it = std::find(spec.fill_order.begin(), spec.fill_order.end(), s);
    return static_cast<int>(it - spec.fill_order.begin());
}

// Accumulates per-batch means of an indicator.
class BatchMeans {
public:
    explicit BatchMeans(std::size_t batches) : sum_(batches, 0.0), count_(batches, 0.0) {}

    void add(std::size_t batch, double v) {
        sum_[batch] += v;
        count_[batch] += 1.0;
        total_ += v;
        n_ += 1.0;
    }

    double mean() const { return n_ > 0 ? total_ / n_ : 0.0; }

    double standard_error() const {
        std::vector<double> means;
        for (std::size_t b = 0; b < sum_.size(); ++b)
            if (count_[b] > 0)
                means.push_back(sum_[b] / count_[b]);
        if (means.size() < 2)
            return 0.0;
        const double mu = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
        double ss = 0.0;
        for (double m : means)
            ss += (m - mu) * (m - mu);
        const double k = static_cast<double>(means.size());
        return std::sqrt(ss / (k - 1.0) / k);
    }

private:
    std::vector<double> sum_;
    std::vector<double> count_;
    double total_ = 0.0;
    double n_ = 0.0;
};

struct BatchGrid {
    int bx;
    int by;
    TorusDims dims;

    explicit BatchGrid(TorusDims d) : bx(std::min(16, d.width)), by(std::min(16, d.height)), dims(d) {}
    std::size_t count() const { return static_cast<std::size_t>(bx * by); }
    std::size_t of(Site s) const {
        return static_cast<std::size_t>((s.x * bx / dims.width) * by + s.y * by / dims.height);
    }
};

// Collects stage statistics for a filled configuration.
std::vector<StageStats> collect_stats(const TorusConfiguration& config, std::span<const double> probs,
                                      std::span<const double> analytic_unforced) {
    const auto& torus = config.torus();
    const auto& spec = torus.spec();
    const BatchGrid grid(torus.dims());
    const auto values = config.values();
    std::vector<StageStats> stats;
    for (int k = 0; k < static_cast<int>(spec.fill_order.size()); ++k) {
        const auto label = spec.fill_order[static_cast<std::size_t>(k)];
        BatchMeans unforced(grid.count());
        BatchMeans ones(grid.count());
        std::size_t n = 0;
        for (std::size_t i = 0; i < torus.site_count(); ++i) {
            if (torus.sublattice(i) != label)
                continue;
            ++n;
            bool forced = false;
            for (auto j : torus.neighbors(i))
                if (values[j] && stage_of(spec, torus.sublattice(j)) < k)
                    forced = true;
            const auto b = grid.of(torus.site_at(i));
            unforced.add(b, forced ? 0.0 : 1.0);
            ones.add(b, values[i]);
        }
        StageStats s;
        s.stage = k;
        s.sublattice = label;
        s.probability = probs[static_cast<std::size_t>(k)];
        s.analytic_unforced = analytic_unforced[static_cast<std::size_t>(k)];
        s.empirical_unforced = unforced.mean();
        s.stderr_unforced = unforced.standard_error();
        s.analytic_density = s.analytic_unforced * s.probability;
        s.empirical_density = ones.mean();
        s.stderr_density = ones.standard_error();
        s.n_sites = n;
        stats.push_back(s);
    }
    return stats;
}

// Fills stage k of the configuration: each unforced site of the stage's
// sublattice gets a 1 with probability p.
void fill_stage(TorusConfiguration& config, int k, double p, std::uint64_t seed) {
    const auto& torus = config.torus();
    const auto label = torus.spec().fill_order[static_cast<std::size_t>(k)];
    auto values = config.values();
    std::mt19937_64 rng(stage_seed(seed, k));
    for (std::size_t i = 0; i < torus.site_count(); ++i) {
        if (torus.sublattice(i) != label)
            continue;
        const double u = uniform01(rng);
        bool forced = false;
        for (auto j : torus.neighbors(i))
            forced = forced || values[j] != 0;
        values[i] = (!forced && u < p) ? 1 : 0;
    }
}

} // namespace

double entropy_1d() {
    // Power iteration on [[1,1],[1,0]].
    double a = 1.0;
    double b = 1.0;
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double na = a + b;
        const double nb = a;
        const double next = na / a;
        a = na / na;
        b = nb / na;
        if (std::abs(next - lambda) <= 1e-16 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::log(lambda);
}

std::string_view to_string(StripBoundary b) {
    return b == StripBoundary::Free ? "free" : "periodic";
}

StripBoundary parse_strip_boundary(std::string_view name) {
    if (name == "free")
        return StripBoundary::Free;
    if (name == "periodic")
        return StripBoundary::Periodic;
    throw std::invalid_argument("unknown strip boundary: " + std::string(name));
}

std::vector<std::uint32_t> strip_columns(StripSpec spec) {
    if (spec.width < 1 || spec.width > max_strip_width)
        throw std::length_error("strip width must lie in 1.." + std::to_string(max_strip_width));
    const std::uint32_t count = 1u << spec.width;
    const std::uint32_t top = 1u << (spec.width - 1);
    std::vector<std::uint32_t> cols;
    for (std::uint32_t c = 0; c < count; ++c) {
        if (c & (c >> 1))
            continue;
        if (spec.boundary == StripBoundary::Periodic && spec.width >= 3 && (c & 1u) && (c & top))
            continue;
        cols.push_back(c);
    }
    return cols;
}

double strip_entropy(StripSpec spec) {
    const auto cols = strip_columns(spec);
    const std::size_t s = cols.size();
    std::vector<double> v(s, 1.0 / std::sqrt(static_cast<double>(s)));
    std::vector<double> w(s);
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        for (std::size_t a = 0; a < s; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < s; ++b)
                if ((cols[a] & cols[b]) == 0)
                    acc += v[b];
            w[a] = acc;
        }
        // Rayleigh quotient of the symmetric transfer matrix.
        const double next = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
        const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        for (std::size_t a = 0; a < s; ++a)
            v[a] = w[a] / norm;
        if (std::abs(next - lambda) <= 1e-13 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::log(lambda) / spec.width;
}

std::uint64_t stage_seed(std::uint64_t seed, int stage) {
    return splitmix64(seed + static_cast<std::uint64_t>(stage + 1) * 0x9E3779B97F4A7C15ull);
}

FillInSample fill_in_sample(LatticeKind kind, std::span<const double> params, TorusDims dims,
                            std::uint64_t seed, double final_p) {
    const auto spec = build_lattice(kind);
    if (static_cast<int>(params.size()) != spec.partite_count - 1)
        throw std::invalid_argument("fill_in_sample: " + std::string(to_string(kind)) + " takes " +
                                    std::to_string(spec.partite_count - 1) + " parameters, got " +
                                    std::to_string(params.size()));
    (void)BernoulliParam{final_p};
    std::vector<double> probs(params.begin(), params.end());
    probs.push_back(final_p);
    const auto analytic = sequential_unforced(kind, params);

    TorusConfiguration config(kind, dims);
    for (int k = 0; k < spec.partite_count; ++k)
        fill_stage(config, k, probs[static_cast<std::size_t>(k)], seed);
    auto stats = collect_stats(config, probs, analytic);
    return {std::move(config), std::move(stats)};
}

FillInSample three_hex_sample(LatticeKind kind, const ThreeHexParam& pvec, double q, TorusDims dims,
                              std::uint64_t seed) {
    const bool tri = kind == LatticeKind::Triangular;
    if (!tri && kind != LatticeKind::Honeycomb)
        throw std::invalid_argument("three-hex sampling exists only for honeycomb and triangular");
    if (dims.width % 3 != 0 || dims.height % 3 != 0)
        throw std::invalid_argument("three-hex sampling needs torus sides divisible by 3");
    (void)BernoulliParam{q};
    TorusConfiguration config(kind, dims);
    const auto& torus = config.torus();
    auto values = config.values();

    // Tile sites relative to the anchor, and which sites are anchors.
    std::array<Site, 3> shape = tri ? std::array<Site, 3>{Site{0, 0, 0}, Site{1, 1, 0}, Site{2, -1, 0}}
                                    : std::array<Site, 3>{Site{0, 0, 0}, Site{1, 0, 0}, Site{0, 1, 0}};
    auto is_anchor = [&](Site s) {
        if (s.basis != 0 || torus.sublattice(torus.index_of(s)) != Sublattice::Circle)
            return false;
        return tri ? wrap(s.x, 3) == 0 : wrap(s.x - s.y, 3) == 0;
    };

    std::array<double, 8> cumulative{};
    double acc = 0.0;
    for (unsigned m = 0; m < 8; ++m) {
        acc += pvec[static_cast<std::size_t>(std::popcount(m))];
        cumulative[m] = acc;
    }
    std::mt19937_64 rng(stage_seed(seed, 0));
    for (std::size_t i = 0; i < torus.site_count(); ++i) {
        const Site s = torus.site_at(i);
        if (!is_anchor(s))
            continue;
        const double u = uniform01(rng) * acc;
        const auto pick = static_cast<unsigned>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                                cumulative.begin());
        const unsigned mask = std::min(pick, 7u);
        for (unsigned k = 0; k < 3; ++k) {
            const Site t{wrap(s.x + shape[k].x, dims.width), wrap(s.y + shape[k].y, dims.height), 0};
            values[torus.index_of(t)] = (mask >> k) & 1u;
        }
    }
    std::vector<double> probs{pvec.one_marginal()};
    if (tri)
        probs.push_back(q);
    probs.push_back(0.5);
    for (int k = 1; k < static_cast<int>(probs.size()); ++k)
        fill_stage(config, k, probs[static_cast<std::size_t>(k)], seed);

    auto analytic = three_hex_unforced(kind, pvec, q);
    auto stats = collect_stats(config, probs, analytic);
    // Circle sites are never forced; their density comes from the tiles.
    stats[0].analytic_density = pvec.one_marginal();
    return {std::move(config), std::move(stats)};
}

namespace {

// A torus large enough that conditioning windows never wrap.
TorusDims window_torus(LatticeKind kind) {
    return kind == LatticeKind::Honeycomb || kind == LatticeKind::Kagome ? TorusDims{12, 12}
                                                                         : TorusDims{18, 18};
}

struct Window {
    std::shared_ptr<const Torus> torus;
    std::size_t target;
    std::vector<std::size_t> sites; // stage order
};

Window build_window(LatticeKind kind, int stage) {
    const auto spec = build_lattice(kind);
    if (stage < 0 || stage >= spec.partite_count)
        throw std::out_of_range("stage out of range for " + std::string(to_string(kind)));
    auto torus = std::make_shared<const Torus>(kind, window_torus(kind));
    const auto label = spec.fill_order[static_cast<std::size_t>(stage)];
    const TorusDims d = torus->dims();
    std::size_t target = torus->site_count();
    for (int y = d.height / 2; y < d.height && target == torus->site_count(); ++y)
        for (int x = d.width / 2; x < d.width && target == torus->site_count(); ++x)
            for (int b = 0; b < spec.sites_per_cell; ++b) {
                const auto i = torus->index_of({x, y, b});
                if (torus->sublattice(i) == label) {
                    target = i;
                    break;
                }
            }
    std::vector<std::size_t> found;
    std::vector<char> seen(torus->site_count(), 0);
    std::vector<std::size_t> frontier{target};
    seen[target] = 1;
    while (!frontier.empty()) {
        const auto s = frontier.back();
        frontier.pop_back();
        const int st = stage_of(spec, torus->sublattice(s));
        for (auto j : torus->neighbors(s)) {
            if (seen[j] || stage_of(spec, torus->sublattice(j)) >= st)
                continue;
            seen[j] = 1;
            found.push_back(j);
            frontier.push_back(j);
        }
    }
    std::sort(found.begin(), found.end(), [&](auto a, auto b) {
        const int sa = stage_of(spec, torus->sublattice(a));
        const int sb = stage_of(spec, torus->sublattice(b));
        return sa != sb ? sa < sb : a < b;
    });
    return {std::move(torus), target, std::move(found)};
}

} // namespace

std::vector<Site> conditioning_window(LatticeKind kind, int stage) {
    const auto w = build_window(kind, stage);
    const Site t = w.torus->site_at(w.target);
    const TorusDims d = w.torus->dims();
    std::vector<Site> out;
    for (auto i : w.sites) {
        const Site s = w.torus->site_at(i);
        out.push_back({wrap(s.x - t.x + d.width / 2, d.width) - d.width / 2,
                       wrap(s.y - t.y + d.height / 2, d.height) - d.height / 2, s.basis});
    }
    return out;
}

double window_probability_exhaustive(LatticeKind kind, std::span<const double> params, int stage) {
    const auto spec = build_lattice(kind);
    if (static_cast<int>(params.size()) != spec.partite_count - 1)
        throw std::invalid_argument("window_probability_exhaustive: wrong parameter count");
    for (double p : params)
        (void)BernoulliParam{p};
    const auto w = build_window(kind, stage);
    if (w.sites.size() > max_window_sites)
        throw std::length_error("conditioning window has " + std::to_string(w.sites.size()) + " sites (limit " +
                                std::to_string(max_window_sites) + ")");
    const auto& torus = *w.torus;
    const std::size_t n = w.sites.size();
    std::vector<int> local(torus.site_count(), -1);
    for (std::size_t k = 0; k < n; ++k)
        local[w.sites[k]] = static_cast<int>(k);
    // For each window site, the window sites it must see as 0 to be unforced.
    std::vector<std::vector<int>> earlier(n);
    std::vector<double> prob(n);
    for (std::size_t k = 0; k < n; ++k) {
        const int st = stage_of(spec, torus.sublattice(w.sites[k]));
        prob[k] = params[static_cast<std::size_t>(st)];
        for (auto j : torus.neighbors(w.sites[k]))
            if (stage_of(spec, torus.sublattice(j)) < st) {
                if (local[j] < 0)
                    throw std::logic_error("conditioning window is not closed");
                earlier[k].push_back(local[j]);
            }
    }
    std::vector<int> target_nbrs;
    for (auto j : torus.neighbors(w.target))
        if (local[j] >= 0)
            target_nbrs.push_back(local[j]);

    std::vector<char> value(n, 0);
    std::function<double(std::size_t)> walk = [&](std::size_t k) -> double {
        if (k == n) {
            for (int j : target_nbrs)
                if (value[static_cast<std::size_t>(j)])
                    return 0.0;
            return 1.0;
        }
        bool forced = false;
        for (int j : earlier[k])
            forced = forced || value[static_cast<std::size_t>(j)];
        if (forced) {
            value[k] = 0;
            return walk(k + 1);
        }
        value[k] = 1;
        const double one = prob[k] > 0.0 ? prob[k] * walk(k + 1) : 0.0;
        value[k] = 0;
        const double zero = prob[k] < 1.0 ? (1.0 - prob[k]) * walk(k + 1) : 0.0;
        return one + zero;
    };
    return walk(0);
}

Estimate block_tiling_unforced(const BlockDistribution& dist, int tiles, std::uint64_t seed) {
    if (tiles < 2)
        throw std::invalid_argument("block tiling needs at least 2 x 2 tiles");
    const int n = dist.n();
    const int side = tiles * n;
    const Mask masks = static_cast<Mask>(dist.family().mask_count());
    std::vector<double> cumulative(masks);
    double acc = 0.0;
    for (Mask m = 0; m < masks; ++m) {
        acc += dist.prob_of(m);
        cumulative[m] = acc;
    }
    std::mt19937_64 rng(stage_seed(seed, 0));
    std::vector<char> grid(static_cast<std::size_t>(side * side), 0);
    for (int bi = 0; bi < tiles; ++bi)
        for (int bj = 0; bj < tiles; ++bj) {
            const double u = uniform01(rng) * acc;
            const auto idx = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
            const Mask m = static_cast<Mask>(std::min<std::ptrdiff_t>(idx, masks - 1));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    grid[static_cast<std::size_t>((bi * n + i) * side + bj * n + j)] = (m >> (i * n + j)) & 1u;
        }
    BatchMeans rows(static_cast<std::size_t>(tiles));
    for (int a = 0; a < side; ++a)
        for (int b = 0; b < side; ++b) {
            const int a1 = (a + 1) % side;
            const int b1 = (b + 1) % side;
            const bool blocked = grid[static_cast<std::size_t>(a * side + b)] ||
                                 grid[static_cast<std::size_t>(a1 * side + b)] ||
                                 grid[static_cast<std::size_t>(a * side + b1)] ||
                                 grid[static_cast<std::size_t>(a1 * side + b1)];
            rows.add(static_cast<std::size_t>(a / n), blocked ? 0.0 : 1.0);
        }
    return {rows.mean(), rows.standard_error()};
}

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (d == 0)
        throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
    const long long l = std::lcm(a.den, b.den);
    return {a.num * (l / a.den) + b.num * (l / b.den), l};
}

Rational operator/(const Rational& a, const Rational& b) {
    return {a.num * b.den, a.den * b.num};
}

Rational blocking_constant_lower() {
    // Central 1 at the origin; odd neighbours at (+-1,0), (0,+-1). Their other
    // even neighbours: the four axial sites at distance 2 and the four
    // diagonal sites, each diagonal shared by two odd neighbours.
    struct Pt {
        int x, y;
    };
    const std::array<Pt, 8> evens{{{2, 0}, {-2, 0}, {0, 2}, {0, -2}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    const std::array<Pt, 4> odds{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    Rational total;
    for (unsigned a = 0; a < 256; ++a) {
        Rational credit;
        for (const auto& o : odds) {
            int k = 0;
            for (unsigned e = 0; e < 8; ++e)
                if (((a >> e) & 1u) && std::abs(evens[e].x - o.x) + std::abs(evens[e].y - o.y) == 1)
                    ++k;
            credit = credit + Rational(1, 1 + k);
        }
        total = total + credit;
    }
    return total / Rational(256, 1);
}

Rational density_upper_bound() {
    return Rational(1, 1) / (Rational(2, 1) + blocking_constant_lower());
}

BlockingUpper blocking_constant_upper(double h_ref) {
    auto f = [h_ref](double c) {
        return 0.5 * (bernoulli_entropy(1.0 / (2.0 + c)) + 2.0 / (2.0 + c) * std::numbers::ln2) - h_ref;
    };
    double lo = 0.0;
    double hi = 20.0;
    if (!(f(lo) > 0.0 && f(hi) < 0.0))
        throw std::domain_error("no blocking constant in [0, 20] for h_ref = " + std::to_string(h_ref));
    while (hi - lo > 1e-12)
        (f(0.5 * (lo + hi)) > 0.0 ? lo : hi) = 0.5 * (lo + hi);
    const double c = 0.5 * (lo + hi);
    return {c, 1.0 / (2.0 + c)};
}

std::span<const ReferenceConstant> reference_constants() {
    static const std::array<ReferenceConstant, 3> table{{
        {LatticeKind::Square, 0.4075, 0.2266},
        {LatticeKind::Honeycomb, 0.4360, 0.2424},
        {LatticeKind::Triangular, 0.3332, 0.1624},
    }};
    return table;
}

std::optional<ReferenceConstant> reference_constant(LatticeKind kind) {
    for (const auto& r : reference_constants())
        if (r.kind == kind)
            return r;
    return std::nullopt;
}

} // namespace hardcore
