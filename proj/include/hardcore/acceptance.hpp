#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hardcore/optimizer.hpp"

namespace hardcore {

struct SubCheck {
    std::string label;  // what is compared and where the target comes from
    bool passed = false;
    std::string detail; // computed vs expected
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<SubCheck> checks;
    double seconds = 0.0;

    bool passed() const;
};

struct AcceptanceOptions {
    std::uint64_t seed = 20240601;
    double h_ref = 0.4075;
    OptimizerSettings optimizer;
};

inline constexpr int acceptance_criteria = 11;

/// Runs one numbered acceptance criterion (1..11).
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

} // namespace hardcore
