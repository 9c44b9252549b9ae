#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include "hardcore/block_bound.hpp"
#include "hardcore/bound_report.hpp"
#include "hardcore/lattice.hpp"
#include "hardcore/optimizer.hpp"

namespace hardcore {

enum class Scheme { Closed, Equalized, ThreeHex, Block };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

/// Lattices the scheme is defined on.
std::vector<LatticeKind> scheme_lattices(Scheme s);

/// Closed-form sequential bound of a lattice at the given stage parameters
/// (1 for bipartite kinds, 2 for triangular/kagome, 3 for square-moore).
BoundReport closed_bound(LatticeKind kind, std::span<const double> params);

BoundReport optimize_closed(LatticeKind kind, const OptimizerSettings& settings = {});
/// Square or honeycomb only.
BoundReport optimize_equalized(LatticeKind kind, const OptimizerSettings& settings = {});
/// Honeycomb or triangular only.
BoundReport optimize_three_hex(LatticeKind kind, const OptimizerSettings& settings = {});

struct BlockOptions {
    std::optional<BlockDistribution> warm_start; // tried before the generated starts
    /// When positive, classes whose warm-start arrangement probability falls
    /// below this are fixed at 0 and left out of the optimization.
    double prune_below = 0.0;
};

struct BlockOptimum {
    BoundReport report;
    BlockDistribution distribution;
};

BlockOptimum optimize_block(std::shared_ptr<const BlockFamily> family,
                            const OptimizerSettings& settings = {}, const BlockOptions& options = {});

} // namespace hardcore
