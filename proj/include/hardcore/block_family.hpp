#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace hardcore {

// n x n patches of even-sublattice sites on Z^2. Position (i, j) is bit
// i * n + j of the mask; odd sites are the plaquette centres of the even grid,
// (n+1)^2 of them touch a block (interior ones plus those shared with
// neighbouring blocks).

inline constexpr int max_block_side = 5;
inline constexpr int max_reducible_side = 4;

using Mask = std::uint32_t;

struct Block {
    int n = 1;
    Mask mask = 0;

    bool at(int i, int j) const { return (mask >> (i * n + j)) & 1u; }
    int ones() const;
    auto operator<=>(const Block&) const = default;
};

struct Position {
    int row;
    int col;
    auto operator<=>(const Position&) const = default;
};

/// Throws std::out_of_range unless 1 <= n <= max_n.
void check_block_side(int n, int max_n = max_block_side);

/// Every n x n block, each mask exactly once, in increasing mask order.
inline auto enumerate_blocks(int n) {
    check_block_side(n);
    const Mask count = Mask{1} << (n * n);
    return std::views::iota(Mask{0}, count) |
           std::views::transform([n](Mask m) { return Block{n, m}; });
}

/// Image of `mask` under dihedral element `g` in [0, 8). Element bits:
/// 4 = transpose, 1 = flip rows, 2 = flip columns (applied in that order).
Mask apply_symmetry(int n, Mask mask, int g);

/// Smallest mask among the (up to 8) dihedral images.
Block d4_canonical(Block b);

/// Odd sites adjacent to a 1 of `mask`, as bits of the (n+1) x (n+1) odd
/// grid: odd site (a, b) is bit a * (n+1) + b and touches even positions
/// (a-1..a, b-1..b) that fall inside the block.
std::uint64_t forced_odd_sites(int n, Mask mask);

/// Non-corner positions s such that every odd site adjacent to s is also
/// adjacent to some 1 of b with s removed. The value at s is irrelevant.
Mask weak_site_mask(Block b);
std::vector<Position> weak_sites(Block b);

enum class Reduction { None, Symmetry, SymmetryWeak };

std::string_view to_string(Reduction r);
Reduction parse_reduction(std::string_view name);

struct BlockClass {
    Mask representative = 0;     // smallest member
    std::vector<Mask> members;   // increasing order
    Mask weak_core = 0;          // member with the fewest 1's (smallest on ties)

    std::size_t multiplicity() const { return members.size(); }
};

/// Quotient of all n x n masks under dihedral symmetry and (optionally)
/// weak-site toggles. Classes are ordered by representative, so class 0 is
/// always the empty block. Immutable once built.
class BlockFamily {
public:
    int n() const { return n_; }
    Reduction reduction() const { return reduction_; }
    std::span<const BlockClass> classes() const { return classes_; }
    std::size_t class_count() const { return classes_.size(); }
    /// Classes minus the one eliminated by normalization.
    std::size_t free_variables() const { return classes_.size() - 1; }
    std::size_t mask_count() const { return index_.size(); }
    std::uint32_t class_of(Mask mask) const { return index_.at(mask); }
    std::vector<double> multiplicities() const;

    /// Rebuilds a family from class representatives by closing each one
    /// under the group action. Throws std::runtime_error if the result is not
    /// a partition or disagrees with `expected_multiplicities` (when given).
    static BlockFamily from_representatives(int n, Reduction reduction,
                                            std::span<const Mask> representatives,
                                            std::span<const std::size_t> expected_multiplicities = {});

private:
    friend BlockFamily reduce_family(int n, Reduction reduction);
    BlockFamily(int n, Reduction reduction, std::vector<std::uint32_t> index);

    int n_ = 0;
    Reduction reduction_ = Reduction::SymmetryWeak;
    std::vector<BlockClass> classes_;
    std::vector<std::uint32_t> index_;
};

/// Builds the family for 1 <= n <= 4.
BlockFamily reduce_family(int n, Reduction reduction = Reduction::SymmetryWeak);

/// Throws std::invalid_argument unless probs has one entry per class, all
/// entries are >= 0 and sum(multiplicity * prob) = 1 within `tol`.
void check_simplex(const BlockFamily& family, std::span<const double> probs, double tol = 1e-10);

/// Zero-set events of a block whose probabilities determine the unforced odd
/// density, in layout order: (n-1)^2 interior plaquettes (row-major), then the
/// n-1 dominoes along each side (top, bottom, left, right), then the corners
/// (top-left, top-right, bottom-left, bottom-right).
std::vector<Mask> marginal_zero_sets(int n);

struct BoundaryMarginals {
    int n = 1;
    std::vector<double> interior;           // P(plaquette all 0)
    std::array<std::vector<double>, 4> sides; // top, bottom, left, right: P(domino 00)
    std::array<double, 4> corners{};        // TL, TR, BL, BR: P(corner 0)
};

enum Side { top = 0, bottom = 1, left = 2, right = 3 };
enum Corner { top_left = 0, top_right = 1, bottom_left = 2, bottom_right = 3 };

/// Marginals of a distribution given per-arrangement class probabilities.
BoundaryMarginals boundary_marginals(const BlockFamily& family, std::span<const double> probs);

struct InclusionPair {
    std::uint32_t sub;   // class whose 1-set is contained
    std::uint32_t super; // class whose 1-set contains it
    bool strict;         // false when the difference can be all weak sites
};

/// All ordered pairs of distinct classes with members a, b where the 1-set of
/// a is a proper subset of the 1-set of b.
std::vector<InclusionPair> inclusion_pairs(const BlockFamily& family);

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Versioned text layout:
///   hardcore-block-family 1
///   n <n>
///   reduction <none|symmetry|symmetry-weak>
///   classes <count>
///   <representative mask> <multiplicity>   (one line per class)
void save_family(const BlockFamily& family, const std::filesystem::path& path);
/// Throws CacheError on any malformed or inconsistent content.
BlockFamily load_family(const std::filesystem::path& path);

std::filesystem::path family_cache_path(const std::filesystem::path& dir, int n, Reduction reduction);

} // namespace hardcore
