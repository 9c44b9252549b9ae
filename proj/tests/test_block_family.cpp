#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "hardcore/block_family.hpp"

using namespace hardcore;

namespace {

// Closure of a mask under all dihedral images and single weak-site toggles,
// computed by breadth-first search without the family machinery.
std::set<Mask> brute_closure(int n, Mask start, bool weak) {
    std::set<Mask> seen{start};
    std::vector<Mask> frontier{start};
    while (!frontier.empty()) {
        const Mask m = frontier.back();
        frontier.pop_back();
        std::vector<Mask> next;
        for (int g = 0; g < 8; ++g) next.push_back(apply_symmetry(n, m, g));
        if (weak) {
            const Mask w = weak_site_mask(Block{n, m});
            for (int bit = 0; bit < n * n; ++bit)
                if ((w >> bit) & 1u) next.push_back(m ^ (Mask{1} << bit));
        }
        for (Mask x : next)
            if (seen.insert(x).second) frontier.push_back(x);
    }
    return seen;
}

Mask corner_bits(int n) {
    return (Mask{1} << 0) | (Mask{1} << (n - 1)) | (Mask{1} << (n * (n - 1))) | (Mask{1} << (n * n - 1));
}

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "hardcore-unit";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("enumeration") {
    CHECK(std::ranges::distance(enumerate_blocks(1)) == 2);
    CHECK(std::ranges::distance(enumerate_blocks(2)) == 16);
    CHECK(std::ranges::distance(enumerate_blocks(3)) == 512);
    Mask expected = 0;
    for (Block b : enumerate_blocks(3)) CHECK(b.mask == expected++);
    CHECK_THROWS_AS(enumerate_blocks(0), std::out_of_range);
    CHECK_THROWS_AS(enumerate_blocks(6), std::out_of_range);
}

TEST_CASE("dihedral canonical form") {
    CHECK(d4_canonical(Block{3, 0}).mask == 0);
    for (Mask corner : {Mask{1}, Mask{2}, Mask{4}, Mask{8}}) CHECK(d4_canonical(Block{2, corner}).mask == 1);
    for (int n = 1; n <= 3; ++n)
        for (Block b : enumerate_blocks(n)) {
            const Block c = d4_canonical(b);
            CHECK(d4_canonical(c) == c);
            CHECK(c.mask <= b.mask);
            CHECK(c.ones() == b.ones());
        }
    // Group closure: composing two elements gives an element.
    for (Block b : enumerate_blocks(3))
        for (int g = 0; g < 8; ++g)
            for (int h = 0; h < 8; ++h) {
                const Mask gh = apply_symmetry(3, apply_symmetry(3, b.mask, g), h);
                bool found = false;
                for (int k = 0; k < 8; ++k) found |= apply_symmetry(3, b.mask, k) == gh;
                CHECK(found);
            }
}

TEST_CASE("2x2 orbit census") {
    const auto fam = reduce_family(2);
    REQUIRE(fam.class_count() == 6);
    CHECK(fam.free_variables() == 5);
    CHECK(fam.multiplicities() == std::vector<double>{1, 4, 4, 2, 4, 1});
    std::vector<Mask> reps;
    for (const auto& c : fam.classes()) reps.push_back(c.representative);
    // empty, single, adjacent pair, diagonal pair, triple, full
    CHECK(reps == std::vector<Mask>{0, 1, 3, 6, 7, 15});
}

TEST_CASE("weak sites") {
    const Mask midpoints = (1u << 1) | (1u << 3) | (1u << 5) | (1u << 7);
    const Mask w = weak_site_mask(Block{3, midpoints});
    CHECK(((w >> 4) & 1u) == 1u);
    const auto ws = weak_sites(Block{3, midpoints});
    CHECK(std::find(ws.begin(), ws.end(), Position{1, 1}) != ws.end());
    CHECK(weak_site_mask(Block{3, 0}) == 0);
    for (int n = 1; n <= 4; ++n)
        for (Block b : enumerate_blocks(n)) REQUIRE((weak_site_mask(b) & corner_bits(n)) == 0);
}

TEST_CASE("weak toggles do not change the forced odd sites") {
    for (int n = 1; n <= 3; ++n)
        for (Block b : enumerate_blocks(n)) {
            const Mask w = weak_site_mask(b);
            for (int bit = 0; bit < n * n; ++bit) {
                if (!((w >> bit) & 1u)) continue;
                const Mask s = Mask{1} << bit;
                REQUIRE(forced_odd_sites(n, b.mask | s) == forced_odd_sites(n, b.mask & ~s));
                // and the site stays weak after the toggle
                CHECK(((weak_site_mask(Block{n, b.mask ^ s}) >> bit) & 1u) == 1u);
            }
        }
}

TEST_CASE("reduction counts and partition") {
    CHECK(reduce_family(1).class_count() == 2);
    CHECK(reduce_family(3, Reduction::Symmetry).free_variables() == 101);
    CHECK(reduce_family(3, Reduction::SymmetryWeak).free_variables() == 46);
    CHECK(reduce_family(3, Reduction::None).class_count() == 512);
    const auto f4 = reduce_family(4);
    CHECK(f4.free_variables() == 991);
    for (int n = 1; n <= 4; ++n)
        for (auto red : {Reduction::Symmetry, Reduction::SymmetryWeak}) {
            const auto fam = n == 4 && red == Reduction::SymmetryWeak ? f4 : reduce_family(n, red);
            const auto mult = fam.multiplicities();
            CHECK(std::accumulate(mult.begin(), mult.end(), 0.0) == double(1u << (n * n)));
            CHECK(fam.classes()[0].representative == 0);
            std::vector<int> seen(std::size_t{1} << (n * n), 0);
            for (std::size_t c = 0; c < fam.class_count(); ++c) {
                const auto& cls = fam.classes()[c];
                CHECK(cls.representative == cls.members.front());
                CHECK(std::is_sorted(cls.members.begin(), cls.members.end()));
                for (Mask m : cls.members) {
                    ++seen[m];
                    CHECK(fam.class_of(m) == c);
                    CHECK(std::popcount(cls.weak_core) <= std::popcount(m));
                }
            }
            CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
        }
    CHECK(to_string(parse_reduction("symmetry-weak")) == "symmetry-weak");
}

TEST_CASE("classes agree with brute-force closure") {
    for (int n = 1; n <= 3; ++n)
        for (auto red : {Reduction::Symmetry, Reduction::SymmetryWeak}) {
            const auto fam = reduce_family(n, red);
            for (Block b : enumerate_blocks(n)) {
                const auto closure = brute_closure(n, b.mask, red == Reduction::SymmetryWeak);
                const auto& members = fam.classes()[fam.class_of(b.mask)].members;
                REQUIRE(std::vector<Mask>(closure.begin(), closure.end()) == members);
            }
        }
}

TEST_CASE("boundary marginals of 2x2 blocks") {
    auto fam = reduce_family(2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> p(6);
        for (auto& x : p) x = u(rng);
        const auto mult = fam.multiplicities();
        const double z = std::inner_product(p.begin(), p.end(), mult.begin(), 0.0);
        for (auto& x : p) x /= z;
        const double p0 = p[0], p1 = p[1], p21 = p[2], p22 = p[3], p3 = p[4];
        const auto m = boundary_marginals(fam, p);
        REQUIRE(m.interior.size() == 1);
        CHECK(m.interior[0] == doctest::Approx(p0));
        for (const auto& side : m.sides) {
            REQUIRE(side.size() == 1);
            CHECK(side[0] == doctest::Approx(p0 + 2 * p1 + p21));
        }
        for (double c : m.corners) CHECK(c == doctest::Approx(p0 + 3 * p1 + 2 * p21 + p22 + p3));
    }
    std::vector<double> point(6, 0.0);
    point[0] = 1.0;
    const auto m = boundary_marginals(fam, point);
    CHECK(m.interior[0] == 1.0);
    for (double c : m.corners) CHECK(c == 1.0);
    std::vector<double> bad(6, 0.1);
    CHECK_THROWS_AS(boundary_marginals(fam, bad), std::invalid_argument);
    CHECK(marginal_zero_sets(3).size() == 4 + 4 * 2 + 4);
}

TEST_CASE("inclusion pairs") {
    const auto fam = reduce_family(3);
    const auto pairs = inclusion_pairs(fam);
    for (std::size_t c = 1; c < fam.class_count(); ++c) {
        const bool has = std::any_of(pairs.begin(), pairs.end(), [c](const InclusionPair& p) {
            return p.sub == 0 && p.super == c && p.strict;
        });
        CHECK(has);
    }
    for (const auto& p : pairs) CHECK(p.sub != p.super);

    const auto d4 = reduce_family(3, Reduction::Symmetry);
    const Mask midpoints = (1u << 1) | (1u << 3) | (1u << 5) | (1u << 7);
    const auto sub = d4.class_of(midpoints);
    const auto super = d4.class_of(midpoints | (1u << 4));
    const auto d4_pairs = inclusion_pairs(d4);
    const auto found = std::find_if(d4_pairs.begin(), d4_pairs.end(), [&](const InclusionPair& p) {
        return p.sub == sub && p.super == super;
    });
    REQUIRE(found != d4_pairs.end());
    CHECK_FALSE(found->strict);
}

TEST_CASE("family cache round trip and corruption") {
    const auto fam = reduce_family(3);
    const auto path = temp_file("family3.txt");
    save_family(fam, path);
    const auto loaded = load_family(path);
    CHECK(loaded.n() == 3);
    CHECK(loaded.reduction() == Reduction::SymmetryWeak);
    REQUIRE(loaded.class_count() == fam.class_count());
    for (Mask m = 0; m < 512; ++m) CHECK(loaded.class_of(m) == fam.class_of(m));

    {
        std::ofstream out(path);
        out << "hardcore-block-family 1\nn 3\nreduction symmetry-weak\nclasses 2\n0 1\n1 4\n";
    }
    CHECK_THROWS_AS(load_family(path), CacheError);
    {
        std::ofstream out(path);
        out << "garbage\n";
    }
    CHECK_THROWS_AS(load_family(path), CacheError);
    CHECK_THROWS_AS(load_family(temp_file("missing.txt")), CacheError);
    CHECK(family_cache_path("/x", 4, Reduction::SymmetryWeak).parent_path() == "/x");
}
