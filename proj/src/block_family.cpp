#include "hardcore/block_family.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "parallel.hpp"

namespace hardcore {

namespace {

struct Geometry {
    int n = 0;
    Mask corners = 0;
    std::vector<Mask> odd_touch;                // per odd site: adjacent even positions
    std::vector<std::array<int, 4>> even_odd;   // per even position: its 4 odd sites
    std::array<std::vector<int>, 8> perm;       // dihedral images of positions
};

Geometry make_geometry(int n) {
    Geometry g;
    g.n = n;
    const int m = n + 1;
    auto bit = [n](int i, int j) { return i * n + j; };
    g.corners = (Mask{1} << bit(0, 0)) | (Mask{1} << bit(0, n - 1)) | (Mask{1} << bit(n - 1, 0)) |
                (Mask{1} << bit(n - 1, n - 1));
    g.odd_touch.assign(static_cast<std::size_t>(m * m), 0);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int x = a - 1; x <= a; ++x)
                for (int y = b - 1; y <= b; ++y)
                    if (x >= 0 && x < n && y >= 0 && y < n)
                        g.odd_touch[static_cast<std::size_t>(a * m + b)] |= Mask{1} << bit(x, y);
    g.even_odd.resize(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g.even_odd[static_cast<std::size_t>(bit(i, j))] = {i * m + j, (i + 1) * m + j,
                                                               i * m + j + 1, (i + 1) * m + j + 1};
    for (int e = 0; e < 8; ++e) {
        auto& p = g.perm[static_cast<std::size_t>(e)];
        p.resize(static_cast<std::size_t>(n * n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int x = i;
                int y = j;
                if (e & 4)
                    std::swap(x, y);
                if (e & 1)
                    x = n - 1 - x;
                if (e & 2)
                    y = n - 1 - y;
                p[static_cast<std::size_t>(bit(i, j))] = bit(x, y);
            }
    }
    return g;
}

const Geometry& geometry(int n) {
    static const std::array<Geometry, max_block_side + 1> table = [] {
        std::array<Geometry, max_block_side + 1> t;
        for (int k = 1; k <= max_block_side; ++k)
            t[static_cast<std::size_t>(k)] = make_geometry(k);
        return t;
    }();
    check_block_side(n);
    return table[static_cast<std::size_t>(n)];
}

Mask weak_mask_of(const Geometry& g, Mask mask) {
    const int positions = g.n * g.n;
    Mask weak = 0;
    for (int s = 0; s < positions; ++s) {
        const Mask sbit = Mask{1} << s;
        if (g.corners & sbit)
            continue;
        const Mask rest = mask & ~sbit;
        bool covered = true;
        for (int o : g.even_odd[static_cast<std::size_t>(s)])
            if ((g.odd_touch[static_cast<std::size_t>(o)] & rest) == 0) {
                covered = false;
                break;
            }
        if (covered)
            weak |= sbit;
    }
    return weak;
}

Mask canonical_of(const Geometry& g, Mask mask) {
    Mask best = mask;
    for (int e = 1; e < 8; ++e)
        best = std::min(best, apply_symmetry(g.n, mask, e));
    return best;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::uint32_t> parent_;
};

} // namespace

int Block::ones() const {
    return std::popcount(mask);
}

void check_block_side(int n, int max_n) {
    if (n < 1 || n > max_n)
        throw std::out_of_range("block side " + std::to_string(n) + " outside [1, " +
                                std::to_string(max_n) + "]");
}

Mask apply_symmetry(int n, Mask mask, int g) {
    const auto& perm = geometry(n).perm.at(static_cast<std::size_t>(g));
    Mask out = 0;
    while (mask) {
        const int s = std::countr_zero(mask);
        mask &= mask - 1;
        out |= Mask{1} << perm[static_cast<std::size_t>(s)];
    }
    return out;
}

Block d4_canonical(Block b) {
    return {b.n, canonical_of(geometry(b.n), b.mask)};
}

std::uint64_t forced_odd_sites(int n, Mask mask) {
    const auto& g = geometry(n);
    std::uint64_t forced = 0;
    for (std::size_t o = 0; o < g.odd_touch.size(); ++o)
        if (g.odd_touch[o] & mask)
            forced |= std::uint64_t{1} << o;
    return forced;
}

Mask weak_site_mask(Block b) {
    return weak_mask_of(geometry(b.n), b.mask);
}

std::vector<Position> weak_sites(Block b) {
    std::vector<Position> out;
    Mask w = weak_site_mask(b);
    while (w) {
        const int s = std::countr_zero(w);
        w &= w - 1;
        out.push_back({s / b.n, s % b.n});
    }
    return out;
}

std::string_view to_string(Reduction r) {
    switch (r) {
    case Reduction::None: return "none";
    case Reduction::Symmetry: return "symmetry";
    case Reduction::SymmetryWeak: return "symmetry-weak";
    }
    return "?";
}

Reduction parse_reduction(std::string_view name) {
    for (auto r : {Reduction::None, Reduction::Symmetry, Reduction::SymmetryWeak})
        if (to_string(r) == name)
            return r;
    throw std::invalid_argument("unknown reduction '" + std::string(name) + "'");
}

BlockFamily::BlockFamily(int n, Reduction reduction, std::vector<std::uint32_t> index)
    : n_(n), reduction_(reduction), index_(std::move(index)) {
    std::uint32_t count = 0;
    for (auto c : index_)
        count = std::max(count, c + 1);
    classes_.resize(count);
    for (Mask m = 0; m < index_.size(); ++m) {
        auto& cls = classes_[index_[m]];
        if (cls.members.empty()) {
            cls.representative = m;
            cls.weak_core = m;
        } else if (std::popcount(m) < std::popcount(cls.weak_core)) {
            cls.weak_core = m;
        }
        cls.members.push_back(m);
    }
}

std::vector<double> BlockFamily::multiplicities() const {
    std::vector<double> out;
    out.reserve(classes_.size());
    for (const auto& c : classes_)
        out.push_back(static_cast<double>(c.multiplicity()));
    return out;
}

BlockFamily reduce_family(int n, Reduction reduction) {
    check_block_side(n, max_reducible_side);
    const auto& g = geometry(n);
    const std::size_t count = std::size_t{1} << (n * n);

    std::vector<Mask> canon(count);
    std::vector<Mask> weak(count, 0);
    detail::parallel_for(count, [&](std::size_t m) {
        const auto mask = static_cast<Mask>(m);
        canon[m] = reduction == Reduction::None ? mask : canonical_of(g, mask);
        if (reduction == Reduction::SymmetryWeak)
            weak[m] = weak_mask_of(g, mask);
    });

    DisjointSets sets(count);
    for (Mask m = 0; m < count; ++m) {
        sets.unite(m, canon[m]);
        Mask w = weak[m];
        while (w) {
            const int s = std::countr_zero(w);
            w &= w - 1;
            sets.unite(m, m ^ (Mask{1} << s));
        }
    }

    // Roots are class minima, so numbering roots in mask order numbers
    // classes by representative.
    std::vector<std::uint32_t> index(count);
    std::vector<std::uint32_t> id_of_root(count, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (Mask m = 0; m < count; ++m) {
        const auto root = sets.find(m);
        if (id_of_root[root] == std::numeric_limits<std::uint32_t>::max())
            id_of_root[root] = next++;
        index[m] = id_of_root[root];
    }
    return BlockFamily(n, reduction, std::move(index));
}

BlockFamily BlockFamily::from_representatives(int n, Reduction reduction,
                                              std::span<const Mask> representatives,
                                              std::span<const std::size_t> expected_multiplicities) {
    check_block_side(n, max_reducible_side);
    const auto& g = geometry(n);
    const std::size_t count = std::size_t{1} << (n * n);
    constexpr auto unassigned = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(count, unassigned);

    if (!expected_multiplicities.empty() && expected_multiplicities.size() != representatives.size())
        throw std::runtime_error("multiplicity list does not match representatives");

    std::vector<Mask> stack;
    for (std::size_t c = 0; c < representatives.size(); ++c) {
        const Mask rep = representatives[c];
        if (rep >= count)
            throw std::runtime_error("representative " + std::to_string(rep) + " out of range");
        if (c > 0 && rep <= representatives[c - 1])
            throw std::runtime_error("representatives not strictly increasing");
        if (index[rep] != unassigned)
            throw std::runtime_error("representative " + std::to_string(rep) + " already covered");
        std::size_t size = 0;
        stack.assign(1, rep);
        index[rep] = static_cast<std::uint32_t>(c);
        while (!stack.empty()) {
            const Mask m = stack.back();
            stack.pop_back();
            ++size;
            if (m < rep)
                throw std::runtime_error("representative " + std::to_string(rep) + " is not minimal");
            auto visit = [&](Mask next) {
                if (index[next] == unassigned) {
                    index[next] = static_cast<std::uint32_t>(c);
                    stack.push_back(next);
                } else if (index[next] != c) {
                    throw std::runtime_error("classes overlap at mask " + std::to_string(next));
                }
            };
            if (reduction != Reduction::None)
                for (int e = 1; e < 8; ++e)
                    visit(apply_symmetry(n, m, e));
            if (reduction == Reduction::SymmetryWeak) {
                Mask w = weak_mask_of(g, m);
                while (w) {
                    const int s = std::countr_zero(w);
                    w &= w - 1;
                    visit(m ^ (Mask{1} << s));
                }
            }
        }
        if (!expected_multiplicities.empty() && expected_multiplicities[c] != size)
            throw std::runtime_error("class " + std::to_string(c) + " has " + std::to_string(size) +
                                     " members, expected " +
                                     std::to_string(expected_multiplicities[c]));
    }
    if (std::find(index.begin(), index.end(), unassigned) != index.end())
        throw std::runtime_error("representatives do not cover every mask");
    return BlockFamily(n, reduction, std::move(index));
}

void check_simplex(const BlockFamily& family, std::span<const double> probs, double tol) {
    if (probs.size() != family.class_count())
        throw std::invalid_argument("expected " + std::to_string(family.class_count()) +
                                    " class probabilities, got " + std::to_string(probs.size()));
    double total = 0.0;
    const auto classes = family.classes();
    for (std::size_t c = 0; c < probs.size(); ++c) {
        if (!(probs[c] >= 0.0))
            throw std::invalid_argument("negative class probability at class " + std::to_string(c));
        total += static_cast<double>(classes[c].multiplicity()) * probs[c];
    }
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("class probabilities are not normalized (total " +
                                    std::to_string(total) + ")");
}

std::vector<Mask> marginal_zero_sets(int n) {
    check_block_side(n);
    auto bit = [n](int i, int j) { return Mask{1} << (i * n + j); };
    std::vector<Mask> sets;
    for (int a = 0; a + 1 < n; ++a)
        for (int b = 0; b + 1 < n; ++b)
            sets.push_back(bit(a, b) | bit(a + 1, b) | bit(a, b + 1) | bit(a + 1, b + 1));
    for (int j = 0; j + 1 < n; ++j)
        sets.push_back(bit(0, j) | bit(0, j + 1));
    for (int j = 0; j + 1 < n; ++j)
        sets.push_back(bit(n - 1, j) | bit(n - 1, j + 1));
    for (int i = 0; i + 1 < n; ++i)
        sets.push_back(bit(i, 0) | bit(i + 1, 0));
    for (int i = 0; i + 1 < n; ++i)
        sets.push_back(bit(i, n - 1) | bit(i + 1, n - 1));
    sets.push_back(bit(0, 0));
    sets.push_back(bit(0, n - 1));
    sets.push_back(bit(n - 1, 0));
    sets.push_back(bit(n - 1, n - 1));
    return sets;
}

BoundaryMarginals boundary_marginals(const BlockFamily& family, std::span<const double> probs) {
    check_simplex(family, probs);
    const int n = family.n();
    const auto sets = marginal_zero_sets(n);
    std::vector<double> values(sets.size(), 0.0);
    for (Mask m = 0; m < family.mask_count(); ++m) {
        const double p = probs[family.class_of(m)];
        if (p == 0.0)
            continue;
        for (std::size_t k = 0; k < sets.size(); ++k)
            if ((m & sets[k]) == 0)
                values[k] += p;
    }
    BoundaryMarginals out;
    out.n = n;
    const auto interior = static_cast<std::size_t>((n - 1) * (n - 1));
    const auto side = static_cast<std::size_t>(n - 1);
    auto it = values.begin();
    out.interior.assign(it, it + static_cast<std::ptrdiff_t>(interior));
    it += static_cast<std::ptrdiff_t>(interior);
    for (auto& s : out.sides) {
        s.assign(it, it + static_cast<std::ptrdiff_t>(side));
        it += static_cast<std::ptrdiff_t>(side);
    }
    std::copy(it, values.end(), out.corners.begin());
    return out;
}

std::vector<InclusionPair> inclusion_pairs(const BlockFamily& family) {
    const int n = family.n();
    const auto& g = geometry(n);
    const std::size_t classes = family.class_count();
    const Mask full = static_cast<Mask>(family.mask_count() - 1);
    // 0 = no pair, 1 = strict, 2 = equal (a weak-only witness exists).
    std::vector<std::uint8_t> state(classes * classes, 0);
    for (Mask a = 0; a <= full; ++a) {
        const auto ca = family.class_of(a);
        const Mask weak = weak_mask_of(g, a);
        const Mask rest = full & ~a;
        for (Mask s = rest; s != 0; s = (s - 1) & rest) {
            const auto cb = family.class_of(a | s);
            if (ca == cb)
                continue;
            const std::uint8_t tag = (s & ~weak) == 0 ? 2 : 1;
            auto& slot = state[ca * classes + cb];
            slot = std::max(slot, tag);
        }
    }
    std::vector<InclusionPair> out;
    for (std::uint32_t a = 0; a < classes; ++a)
        for (std::uint32_t b = 0; b < classes; ++b)
            if (const auto t = state[a * classes + b])
                out.push_back({a, b, t == 1});
    return out;
}

void save_family(const BlockFamily& family, const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("cannot write " + tmp);
        out << "hardcore-block-family 1\n"
            << "n " << family.n() << '\n'
            << "reduction " << to_string(family.reduction()) << '\n'
            << "classes " << family.class_count() << '\n';
        for (const auto& c : family.classes())
            out << c.representative << ' ' << c.multiplicity() << '\n';
        if (!out)
            throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

BlockFamily load_family(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw CacheError("cannot open " + path.string());
    auto expect = [&](std::string_view key) {
        std::string word;
        if (!(in >> word) || word != key)
            throw CacheError("malformed cache " + path.string() + ": expected '" + std::string(key) + "'");
    };
    int version = 0;
    int n = 0;
    std::string reduction_name;
    std::size_t count = 0;
    expect("hardcore-block-family");
    if (!(in >> version) || version != 1)
        throw CacheError("unsupported cache version in " + path.string());
    expect("n");
    in >> n;
    expect("reduction");
    in >> reduction_name;
    expect("classes");
    in >> count;
    if (!in || n < 1 || n > max_reducible_side || count == 0 || count > (std::size_t{1} << (n * n)))
        throw CacheError("malformed cache header in " + path.string());
    std::vector<Mask> reps(count);
    std::vector<std::size_t> mult(count);
    for (std::size_t c = 0; c < count; ++c)
        if (!(in >> reps[c] >> mult[c]))
            throw CacheError("truncated cache " + path.string());
    std::string trailing;
    if (in >> trailing)
        throw CacheError("trailing data in cache " + path.string());
    try {
        return BlockFamily::from_representatives(n, parse_reduction(reduction_name), reps, mult);
    } catch (const std::exception& e) {
        throw CacheError("inconsistent cache " + path.string() + ": " + e.what());
    }
}

std::filesystem::path family_cache_path(const std::filesystem::path& dir, int n, Reduction reduction) {
    return dir / ("block-family-n" + std::to_string(n) + "-" + std::string(to_string(reduction)) + ".txt");
}

} // namespace hardcore
