#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace hardcore {

enum class LatticeKind { Square, Honeycomb, Triangular, Kagome, SquareMoore };

inline constexpr std::array<LatticeKind, 5> all_lattice_kinds{
    LatticeKind::Square, LatticeKind::Honeycomb, LatticeKind::Triangular,
    LatticeKind::Kagome, LatticeKind::SquareMoore};

std::string_view to_string(LatticeKind kind);

/// Accepts "square", "honeycomb", "triangular", "kagome", "square-moore".
LatticeKind parse_lattice_kind(std::string_view name);

/// Sublattice labels in fill order. Square and honeycomb use the first two
/// (even = Circle, odd = Dot).
enum class Sublattice : int { Circle = 0, Dot = 1, Triangle = 2, Diamond = 3 };

std::string_view to_string(Sublattice s);

struct LatticeSpec {
    LatticeKind kind;
    int coordination;
    int partite_count;
    std::vector<Sublattice> fill_order;
    // For each stage: how many already-filled neighbours must be 0 for a site
    // of that stage to be unforced.
    std::vector<int> neighborhood_exponents;
    int sites_per_cell;
    // Torus side lengths must be multiples of `period` and at least `min_side`.
    int period;
    int min_side;
};

LatticeSpec build_lattice(LatticeKind kind);

/// Lattice site. Coordinate schemes:
///  - Square, SquareMoore: plain (x, y), basis always 0.
///  - Triangular: axial (x, y) with neighbours (+-1,0), (0,+-1), (1,-1), (-1,1).
///  - Honeycomb: two-site cell (x, y) on a triangular Bravais lattice;
///    basis 0 (A) touches B at (x,y), (x-1,y), (x,y-1).
///  - Kagome: three-site cell; basis b sits at the midpoint of edge b of the
///    cell triangle, so each site has two neighbours on each other sublattice.
struct Site {
    int x = 0;
    int y = 0;
    int basis = 0;
    auto operator<=>(const Site&) const = default;
};

struct TorusDims {
    int width = 0;
    int height = 0;
    auto operator<=>(const TorusDims&) const = default;
};

/// Pure function of the coordinates (not reduced modulo any torus).
Sublattice sublattice_of(LatticeKind kind, Site site);

/// Throws std::invalid_argument if the dimensions are not compatible with
/// the sublattice period.
void validate_dims(const LatticeSpec& spec, TorusDims dims);

/// Nearest neighbours of `site` on the torus, wrapped into range.
/// Throws std::out_of_range if `site` is not a site of the torus.
std::vector<Site> neighbor_sites(const LatticeSpec& spec, TorusDims dims, Site site);

/// Torus geometry with a precomputed adjacency table.
class Torus {
public:
    Torus(LatticeKind kind, TorusDims dims);

    const LatticeSpec& spec() const { return spec_; }
    LatticeKind kind() const { return spec_.kind; }
    TorusDims dims() const { return dims_; }
    std::size_t site_count() const { return labels_.size(); }

    bool contains(Site site) const;
    std::size_t index_of(Site site) const;
    Site site_at(std::size_t index) const;

    Sublattice sublattice(std::size_t index) const { return labels_[index]; }
    std::size_t sublattice_size(Sublattice s) const;

    std::span<const std::uint32_t> neighbors(std::size_t index) const {
        const auto k = static_cast<std::size_t>(spec_.coordination);
        return {adjacency_.data() + index * k, k};
    }

private:
    LatticeSpec spec_;
    TorusDims dims_;
    std::vector<Sublattice> labels_;
    std::vector<std::uint32_t> adjacency_;
};

/// Finite periodic 0/1 configuration.
class TorusConfiguration {
public:
    TorusConfiguration(LatticeKind kind, TorusDims dims);
    explicit TorusConfiguration(std::shared_ptr<const Torus> torus);

    LatticeKind kind() const { return torus_->kind(); }
    TorusDims dims() const { return torus_->dims(); }
    const Torus& torus() const { return *torus_; }

    bool at(Site site) const { return values_[torus_->index_of(site)] != 0; }
    void set(Site site, bool one) { values_[torus_->index_of(site)] = one ? 1 : 0; }

    std::span<const std::uint8_t> values() const { return values_; }
    std::span<std::uint8_t> values() { return values_; }

private:
    std::shared_ptr<const Torus> torus_;
    std::vector<std::uint8_t> values_;
};

/// True iff no two adjacent sites both carry 1.
bool verify_hard_core(const TorusConfiguration& config);

/// Fraction of sites of sublattice `label` carrying 1. Throws
/// std::invalid_argument if the lattice has no such sublattice.
double sublattice_density(const TorusConfiguration& config, Sublattice label);

} // namespace hardcore
