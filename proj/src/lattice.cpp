#include "hardcore/lattice.hpp"

#include <stdexcept>
#include <string>

namespace hardcore {

namespace {

struct Offset {
    int dx;
    int dy;
    int basis;
};

constexpr std::array<Offset, 4> square_offsets{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}}};
constexpr std::array<Offset, 8> moore_offsets{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0},
                                               {1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0}}};
constexpr std::array<Offset, 6> triangular_offsets{
    {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {1, -1, 0}, {-1, 1, 0}}};
constexpr std::array<std::array<Offset, 3>, 2> honeycomb_offsets{{
    {{{0, 0, 1}, {-1, 0, 1}, {0, -1, 1}}},
    {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}},
}};
constexpr std::array<std::array<Offset, 4>, 3> kagome_offsets{{
    {{{0, 0, 1}, {-1, 0, 1}, {0, 0, 2}, {0, -1, 2}}},
    {{{0, 0, 0}, {1, 0, 0}, {0, 0, 2}, {1, -1, 2}}},
    {{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, 1, 1}}},
}};

int floor_mod(int a, int m) {
    const int r = a % m;
    return r < 0 ? r + m : r;
}

std::span<const Offset> offsets_for(LatticeKind kind, int basis) {
    switch (kind) {
    case LatticeKind::Square: return square_offsets;
    case LatticeKind::SquareMoore: return moore_offsets;
    case LatticeKind::Triangular: return triangular_offsets;
    case LatticeKind::Honeycomb: return honeycomb_offsets.at(static_cast<std::size_t>(basis));
    case LatticeKind::Kagome: return kagome_offsets.at(static_cast<std::size_t>(basis));
    }
    throw std::logic_error("unknown lattice kind");
}

void check_site(const LatticeSpec& spec, TorusDims dims, Site site) {
    if (site.x < 0 || site.x >= dims.width || site.y < 0 || site.y >= dims.height ||
        site.basis < 0 || site.basis >= spec.sites_per_cell)
        throw std::out_of_range("site (" + std::to_string(site.x) + "," + std::to_string(site.y) +
                                "," + std::to_string(site.basis) + ") outside torus");
}

} // namespace

std::string_view to_string(LatticeKind kind) {
    switch (kind) {
    case LatticeKind::Square: return "square";
    case LatticeKind::Honeycomb: return "honeycomb";
    case LatticeKind::Triangular: return "triangular";
    case LatticeKind::Kagome: return "kagome";
    case LatticeKind::SquareMoore: return "square-moore";
    }
    return "?";
}

LatticeKind parse_lattice_kind(std::string_view name) {
    for (auto kind : all_lattice_kinds)
        if (to_string(kind) == name)
            return kind;
    throw std::invalid_argument("unknown lattice '" + std::string(name) + "'");
}

std::string_view to_string(Sublattice s) {
    switch (s) {
    case Sublattice::Circle: return "circle";
    case Sublattice::Dot: return "dot";
    case Sublattice::Triangle: return "triangle";
    case Sublattice::Diamond: return "diamond";
    }
    return "?";
}

LatticeSpec build_lattice(LatticeKind kind) {
    using S = Sublattice;
    switch (kind) {
    case LatticeKind::Square:
        return {kind, 4, 2, {S::Circle, S::Dot}, {0, 4}, 1, 2, 4};
    case LatticeKind::Honeycomb:
        return {kind, 3, 2, {S::Circle, S::Dot}, {0, 3}, 2, 1, 2};
    case LatticeKind::Triangular:
        return {kind, 6, 3, {S::Circle, S::Dot, S::Triangle}, {0, 3, 6}, 1, 3, 3};
    case LatticeKind::Kagome:
        return {kind, 4, 3, {S::Circle, S::Dot, S::Triangle}, {0, 2, 4}, 3, 1, 2};
    case LatticeKind::SquareMoore:
        return {kind, 8, 4, {S::Circle, S::Dot, S::Triangle, S::Diamond}, {0, 2, 6, 8}, 1, 2, 4};
    }
    throw std::logic_error("unknown lattice kind");
}

Sublattice sublattice_of(LatticeKind kind, Site site) {
    switch (kind) {
    case LatticeKind::Square:
        return static_cast<Sublattice>(floor_mod(site.x + site.y, 2));
    case LatticeKind::SquareMoore:
        return static_cast<Sublattice>(floor_mod(site.x, 2) + 2 * floor_mod(site.y, 2));
    case LatticeKind::Triangular:
        return static_cast<Sublattice>(floor_mod(site.x - site.y, 3));
    case LatticeKind::Honeycomb:
    case LatticeKind::Kagome:
        return static_cast<Sublattice>(site.basis);
    }
    throw std::logic_error("unknown lattice kind");
}

void validate_dims(const LatticeSpec& spec, TorusDims dims) {
    for (int side : {dims.width, dims.height}) {
        if (side < spec.min_side || side % spec.period != 0)
            throw std::invalid_argument(
                std::string(to_string(spec.kind)) + " torus sides must be multiples of " +
                std::to_string(spec.period) + " and at least " + std::to_string(spec.min_side) +
                " (got " + std::to_string(dims.width) + "x" + std::to_string(dims.height) + ")");
    }
}

std::vector<Site> neighbor_sites(const LatticeSpec& spec, TorusDims dims, Site site) {
    check_site(spec, dims, site);
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(spec.coordination));
    for (const auto& o : offsets_for(spec.kind, site.basis))
        out.push_back({floor_mod(site.x + o.dx, dims.width), floor_mod(site.y + o.dy, dims.height),
                       o.basis});
    return out;
}

Torus::Torus(LatticeKind kind, TorusDims dims) : spec_(build_lattice(kind)), dims_(dims) {
    validate_dims(spec_, dims_);
    const auto n = static_cast<std::size_t>(dims.width) * static_cast<std::size_t>(dims.height) *
                   static_cast<std::size_t>(spec_.sites_per_cell);
    labels_.resize(n);
    adjacency_.resize(n * static_cast<std::size_t>(spec_.coordination));
    for (std::size_t i = 0; i < n; ++i) {
        const Site s = site_at(i);
        labels_[i] = sublattice_of(kind, s);
        const auto nbrs = neighbor_sites(spec_, dims_, s);
        for (std::size_t k = 0; k < nbrs.size(); ++k)
            adjacency_[i * nbrs.size() + k] = static_cast<std::uint32_t>(index_of(nbrs[k]));
    }
}

bool Torus::contains(Site site) const {
    return site.x >= 0 && site.x < dims_.width && site.y >= 0 && site.y < dims_.height &&
           site.basis >= 0 && site.basis < spec_.sites_per_cell;
}

std::size_t Torus::index_of(Site site) const {
    check_site(spec_, dims_, site);
    return (static_cast<std::size_t>(site.y) * static_cast<std::size_t>(dims_.width) +
            static_cast<std::size_t>(site.x)) *
               static_cast<std::size_t>(spec_.sites_per_cell) +
           static_cast<std::size_t>(site.basis);
}

Site Torus::site_at(std::size_t index) const {
    const auto spc = static_cast<std::size_t>(spec_.sites_per_cell);
    const auto cell = index / spc;
    const auto w = static_cast<std::size_t>(dims_.width);
    return {static_cast<int>(cell % w), static_cast<int>(cell / w), static_cast<int>(index % spc)};
}

std::size_t Torus::sublattice_size(Sublattice s) const {
    std::size_t count = 0;
    for (auto l : labels_)
        count += (l == s);
    return count;
}

TorusConfiguration::TorusConfiguration(LatticeKind kind, TorusDims dims)
    : TorusConfiguration(std::make_shared<const Torus>(kind, dims)) {}

TorusConfiguration::TorusConfiguration(std::shared_ptr<const Torus> torus)
    : torus_(std::move(torus)), values_(torus_->site_count(), 0) {}

bool verify_hard_core(const TorusConfiguration& config) {
    const auto& torus = config.torus();
    const auto values = config.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i])
            continue;
        for (auto j : torus.neighbors(i))
            if (values[j])
                return false;
    }
    return true;
}

double sublattice_density(const TorusConfiguration& config, Sublattice label) {
    const auto& torus = config.torus();
    if (static_cast<int>(label) >= torus.spec().partite_count)
        throw std::invalid_argument(std::string(to_string(config.kind())) + " has no " +
                                    std::string(to_string(label)) + " sublattice");
    std::size_t ones = 0;
    std::size_t total = 0;
    const auto values = config.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (torus.sublattice(i) != label)
            continue;
        ++total;
        ones += values[i];
    }
    return total == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(total);
}

} // namespace hardcore
