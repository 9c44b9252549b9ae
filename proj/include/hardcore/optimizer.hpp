#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hardcore {

struct Box {
    double lo = 0.0;
    double hi = 1.0;
};

/// Points x with sum_i weights[i] * x[i] = 1 and x >= 0.
struct Simplex {
    std::vector<double> weights;
};

using DomainComponent = std::variant<Box, Simplex>;

/// Product of boxes and weighted simplices. Coordinates of the components are
/// concatenated in order.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<DomainComponent> components);

    Domain& add(DomainComponent c);

    std::span<const DomainComponent> components() const { return components_; }
    /// Number of coordinates of a point.
    std::size_t dimension() const { return dimension_; }
    /// Number of unconstrained coordinates (a simplex of size k needs k-1).
    std::size_t free_dimension() const { return free_dimension_; }

    /// Largest constraint violation of x (0 when feasible).
    double violation(std::span<const double> x) const;

    /// Maps unconstrained coordinates to a feasible point. Simplices use a
    /// softmax with the first logit pinned at 0; boxes use a logistic map
    /// clipped to [lo + 1e-12, hi - 1e-12].
    std::vector<double> to_point(std::span<const double> z) const;
    /// Inverse of to_point for interior points (boundary values are nudged
    /// inside first).
    std::vector<double> to_free(std::span<const double> x) const;

    /// Gradient with respect to the unconstrained coordinates given the
    /// gradient with respect to the point.
    std::vector<double> pull_back(std::span<const double> z, std::span<const double> grad_x) const;

    /// Euclidean projection of grad_x onto the tangent space of the domain at
    /// x (simplex directions keep sum w_i d_i = 0; box coordinates at a bound
    /// drop outward components).
    std::vector<double> project_gradient(std::span<const double> x,
                                         std::span<const double> grad_x) const;

private:
    std::vector<DomainComponent> components_;
    std::size_t dimension_ = 0;
    std::size_t free_dimension_ = 0;
};

using Objective = std::function<double(std::span<const double>)>;
/// Writes the gradient of the objective at x into g (same length as x).
using GradientFn = std::function<void(std::span<const double> x, std::span<double> g)>;

struct Problem {
    Objective value;
    GradientFn gradient; // optional; central differences when empty
};

struct OptimizerSettings {
    double ftol = 1e-10;  // relative function change
    double gtol = 1e-7;   // gradient inf-norm in unconstrained coordinates
    int max_iter = 10000;
    std::uint64_t seed = 0;
    int starts = 16;
    unsigned threads = 0; // 0 = hardware concurrency
    /// Feasible points tried before the generated low-discrepancy starts.
    std::vector<std::vector<double>> initial_points;
};

struct OptimizationResult {
    std::vector<double> argmax;
    double value = 0.0;
    int iterations = 0;        // iterations of the winning start
    int total_iterations = 0;  // over all starts
    int starts_used = 0;
    int best_start = 0;
    bool converged = false;
    double gradient_norm = 0.0; // inf-norm, unconstrained coordinates
};

/// Thrown when the objective is not finite at a feasible interior point.
class NonFiniteObjective : public std::runtime_error {
public:
    NonFiniteObjective(std::vector<double> point, double value);
    const std::vector<double>& point() const { return point_; }

private:
    std::vector<double> point_;
};

/// Maximizes the objective over the domain with BFGS on the unconstrained
/// reparameterization, from `settings.starts` starts (explicit initial points
/// first, then scrambled Halton points). Falls back to Nelder-Mead when the
/// line search stalls far from stationarity. Deterministic for a given seed;
/// ties go to the lowest start index.
OptimizationResult maximize(const Problem& problem, const Domain& domain,
                            const OptimizerSettings& settings = {});

/// Central-difference gradient of f at x with step h.
std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double h = 1e-6);

/// Relative error of an analytic gradient against central differences:
/// |g - fd|_inf / |fd|_inf, or |g|_inf when the difference gradient vanishes.
double finite_difference_gradient_check(const Objective& f, const GradientFn& gradient,
                                        std::span<const double> x, double h = 1e-6);

} // namespace hardcore
