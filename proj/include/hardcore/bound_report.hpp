#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hardcore {

struct OptimizerInfo {
    int iterations = 0;
    int total_iterations = 0;
    int starts_used = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

/// A lower bound (nats per full-lattice site) together with the parameters
/// that produced it and the predicted 1-density of every sublattice, in fill
/// order.
struct BoundReport {
    std::string scheme;  // "closed", "equalized", "three-hex", "block"
    std::string lattice; // lattice name, e.g. "square"
    int block_size = 0;  // n for block schemes, 0 otherwise
    double value = 0.0;
    std::vector<std::string> param_names;
    std::vector<double> params;
    std::vector<double> densities;
    std::optional<OptimizerInfo> optimizer;
};

/// Throws std::logic_error if the report breaks its invariants (negative
/// value, density outside [0,1], name/parameter count mismatch).
void check_report(const BoundReport& report);

} // namespace hardcore
