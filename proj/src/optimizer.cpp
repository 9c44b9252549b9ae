#include "hardcore/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "parallel.hpp"

namespace hardcore {

namespace {

constexpr double box_margin = 1e-12;
constexpr double max_step = 20.0; // inf-norm cap on a line-search step in free coordinates

double logistic(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<unsigned> first_primes(std::size_t count) {
    std::vector<unsigned> primes;
    for (unsigned k = 2; primes.size() < count; ++k) {
        bool prime = true;
        for (unsigned p : primes) {
            if (p * p > k)
                break;
            if (k % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            primes.push_back(k);
    }
    return primes;
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double result = 0.0;
    double f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % base);
        index /= base;
        f /= base;
    }
    return result;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Minimizes F(z) = -objective(to_point(z)).
class Minimizer {
public:
    Minimizer(const Problem& problem, const Domain& domain) : problem_(problem), domain_(domain) {}

    double value(std::span<const double> z) const {
        const auto x = domain_.to_point(z);
        const double f = problem_.value(x);
        if (!std::isfinite(f))
            throw NonFiniteObjective(x, f);
        return -f;
    }

    std::vector<double> gradient(std::span<const double> z) const {
        if (problem_.gradient) {
            const auto x = domain_.to_point(z);
            std::vector<double> gx(x.size());
            problem_.gradient(x, gx);
            auto gz = domain_.pull_back(z, gx);
            for (auto& v : gz)
                v = -v;
            return gz;
        }
        std::vector<double> g(z.size());
        std::vector<double> probe(z.begin(), z.end());
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
            probe[i] = z[i] + h;
            const double up = value(probe);
            probe[i] = z[i] - h;
            const double down = value(probe);
            probe[i] = z[i];
            g[i] = (up - down) / (2.0 * h);
        }
        return g;
    }

    struct Outcome {
        std::vector<double> z;
        double f = 0.0;
        int iterations = 0;
        double gnorm = 0.0;
    };

    Outcome bfgs(std::vector<double> z, const OptimizerSettings& s) const {
        const std::size_t d = z.size();
        Outcome out;
        if (d == 0) {
            out.f = value(z);
            out.z = std::move(z);
            return out;
        }
        double f = value(z);
        auto g = gradient(z);
        std::vector<double> H(d * d, 0.0);
        auto reset = [&](double scale) {
            std::fill(H.begin(), H.end(), 0.0);
            for (std::size_t i = 0; i < d; ++i)
                H[i * d + i] = scale;
        };
        reset(1.0);
        bool scaled = false;
        int small_steps = 0;
        int it = 0;
        std::vector<double> dir(d), z_new(d), s_vec(d), y_vec(d), Hy(d);
        for (; it < s.max_iter; ++it) {
            if (inf_norm(g) <= s.gtol)
                break;
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j)
                    acc += H[i * d + j] * g[j];
                dir[i] = -acc;
            }
            double slope = dot(g, dir);
            if (!(slope < 0.0)) {
                reset(1.0);
                for (std::size_t i = 0; i < d; ++i)
                    dir[i] = -g[i];
                slope = dot(g, dir);
            }
            double t = std::min(1.0, max_step / std::max(inf_norm(dir), 1e-300));
            double f_new = 0.0;
            bool accepted = false;
            for (int k = 0; k < 80; ++k) {
                for (std::size_t i = 0; i < d; ++i)
                    z_new[i] = z[i] + t * dir[i];
                f_new = value(z_new);
                if (f_new <= f + 1e-4 * t * slope) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted)
                break;
            auto g_new = gradient(z_new);
            for (std::size_t i = 0; i < d; ++i) {
                s_vec[i] = z_new[i] - z[i];
                y_vec[i] = g_new[i] - g[i];
            }
            const double sy = dot(s_vec, y_vec);
            if (sy > 1e-12 * std::sqrt(dot(s_vec, s_vec) * dot(y_vec, y_vec))) {
                if (!scaled) {
                    reset(sy / dot(y_vec, y_vec));
                    scaled = true;
                }
                for (std::size_t i = 0; i < d; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < d; ++j)
                        acc += H[i * d + j] * y_vec[j];
                    Hy[i] = acc;
                }
                const double yHy = dot(y_vec, Hy);
                const double a = (sy + yHy) / (sy * sy);
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        H[i * d + j] += a * s_vec[i] * s_vec[j] - (Hy[i] * s_vec[j] + s_vec[i] * Hy[j]) / sy;
            }
            const double change = std::abs(f - f_new);
            z.swap(z_new);
            g.swap(g_new);
            f = f_new;
            if (change <= s.ftol * std::max(1.0, std::abs(f))) {
                if (++small_steps >= 3 && inf_norm(g) <= std::sqrt(s.gtol))
                    break;
            } else {
                small_steps = 0;
            }
        }
        out.z = std::move(z);
        out.f = f;
        out.iterations = it;
        out.gnorm = inf_norm(g);
        return out;
    }

    Outcome nelder_mead(const std::vector<double>& start, const OptimizerSettings& s) const {
        const std::size_t d = start.size();
        std::vector<std::vector<double>> pts(d + 1, start);
        std::vector<double> vals(d + 1);
        for (std::size_t i = 0; i < d; ++i)
            pts[i + 1][i] += 0.5;
        for (std::size_t i = 0; i <= d; ++i)
            vals[i] = value(pts[i]);
        const int budget = std::max(2000, 400 * static_cast<int>(d));
        int evals = static_cast<int>(d) + 1;
        std::vector<std::size_t> order(d + 1);
        std::vector<double> centroid(d), trial(d), trial2(d);
        int it = 0;
        while (evals < budget) {
            ++it;
            std::iota(order.begin(), order.end(), 0u);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
            const auto best = order.front();
            const auto worst = order.back();
            const auto second = order[d - 1];
            if (std::abs(vals[worst] - vals[best]) <= s.ftol * 1e-3 * std::max(1.0, std::abs(vals[best])))
                break;
            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t i = 0; i < d; ++i)
                    centroid[i] += pts[order[k]][i] / static_cast<double>(d);
            auto along = [&](double c, std::vector<double>& outp) {
                for (std::size_t i = 0; i < d; ++i)
                    outp[i] = centroid[i] + c * (pts[worst][i] - centroid[i]);
                ++evals;
                return value(outp);
            };
            const double fr = along(-1.0, trial);
            if (fr < vals[best]) {
                const double fe = along(-2.0, trial2);
                if (fe < fr) {
                    pts[worst] = trial2;
                    vals[worst] = fe;
                } else {
                    pts[worst] = trial;
                    vals[worst] = fr;
                }
            } else if (fr < vals[second]) {
                pts[worst] = trial;
                vals[worst] = fr;
            } else {
                const double fc = along(fr < vals[worst] ? -0.5 : 0.5, trial2);
                if (fc < std::min(fr, vals[worst])) {
                    pts[worst] = trial2;
                    vals[worst] = fc;
                } else {
                    for (std::size_t k = 0; k <= d; ++k) {
                        if (k == best)
                            continue;
                        for (std::size_t i = 0; i < d; ++i)
                            pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
                        vals[k] = value(pts[k]);
                        ++evals;
                    }
                }
            }
        }
        const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        Outcome out;
        out.z = pts[best];
        out.f = vals[best];
        out.iterations = it;
        out.gnorm = inf_norm(gradient(out.z));
        return out;
    }

    Outcome run(std::vector<double> z, const OptimizerSettings& s) const {
        auto out = bfgs(std::move(z), s);
        if (out.gnorm > 1e3 * s.gtol && out.iterations < s.max_iter) {
            // Line search stalled away from a stationary point: try a
            // derivative-free polish, then let BFGS finish from there.
            auto nm = nelder_mead(out.z, s);
            if (nm.f < out.f) {
                auto again = bfgs(nm.z, s);
                again.iterations += out.iterations + nm.iterations;
                if (again.f <= nm.f)
                    return again;
                nm.iterations += out.iterations;
                return nm;
            }
        }
        return out;
    }

private:
    const Problem& problem_;
    const Domain& domain_;
};

std::vector<std::vector<double>> start_points(const Domain& domain, const OptimizerSettings& s) {
    std::vector<std::vector<double>> starts;
    for (const auto& x : s.initial_points) {
        if (x.size() != domain.dimension())
            throw std::invalid_argument("initial point has wrong dimension");
        starts.push_back(domain.to_free(x));
    }
    const std::size_t dim = domain.dimension();
    const auto primes = first_primes(std::max<std::size_t>(dim, 1));
    std::mt19937_64 rng(s.seed);
    std::vector<double> shift(dim);
    for (auto& v : shift)
        v = uniform01(rng);
    for (std::uint64_t k = 1; static_cast<int>(starts.size()) < std::max(s.starts, 1); ++k) {
        std::vector<double> u(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            double v = radical_inverse(k, primes[i]) + shift[i];
            v -= std::floor(v);
            u[i] = std::clamp(v, 1e-3, 1.0 - 1e-3);
        }
        std::vector<double> x(dim);
        std::size_t offset = 0;
        for (const auto& c : domain.components()) {
            if (const auto* box = std::get_if<Box>(&c)) {
                x[offset] = box->lo + (box->hi - box->lo) * u[offset];
                ++offset;
            } else {
                const auto& w = std::get<Simplex>(c).weights;
                double total = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    x[offset + i] = -std::log(u[offset + i]) / w[i];
                    total += w[i] * x[offset + i];
                }
                for (std::size_t i = 0; i < w.size(); ++i)
                    x[offset + i] /= total;
                offset += w.size();
            }
        }
        starts.push_back(domain.to_free(x));
    }
    return starts;
}

} // namespace

Domain::Domain(std::vector<DomainComponent> components) {
    for (auto& c : components)
        add(std::move(c));
}

Domain& Domain::add(DomainComponent c) {
    if (const auto* box = std::get_if<Box>(&c)) {
        if (!(box->lo < box->hi))
            throw std::invalid_argument("box requires lo < hi");
        dimension_ += 1;
        free_dimension_ += 1;
    } else {
        const auto& w = std::get<Simplex>(c).weights;
        if (w.empty())
            throw std::invalid_argument("simplex needs at least one coordinate");
        for (double v : w)
            if (!(v > 0.0))
                throw std::invalid_argument("simplex weights must be positive");
        dimension_ += w.size();
        free_dimension_ += w.size() - 1;
    }
    components_.push_back(std::move(c));
    return *this;
}

double Domain::violation(std::span<const double> x) const {
    if (x.size() != dimension_)
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    std::size_t offset = 0;
    for (const auto& c : components_) {
        if (const auto* box = std::get_if<Box>(&c)) {
            worst = std::max({worst, box->lo - x[offset], x[offset] - box->hi});
            ++offset;
        } else {
            const auto& w = std::get<Simplex>(c).weights;
            double total = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                worst = std::max(worst, -x[offset + i]);
                total += w[i] * x[offset + i];
            }
            worst = std::max(worst, std::abs(total - 1.0));
            offset += w.size();
        }
    }
    return worst;
}

std::vector<double> Domain::to_point(std::span<const double> z) const {
    if (z.size() != free_dimension_)
        throw std::invalid_argument("free coordinate vector has wrong dimension");
    std::vector<double> x(dimension_);
    std::size_t zi = 0;
    std::size_t xi = 0;
    for (const auto& c : components_) {
        if (const auto* box = std::get_if<Box>(&c)) {
            const double v = box->lo + (box->hi - box->lo) * logistic(z[zi++]);
            x[xi++] = std::clamp(v, box->lo + box_margin, box->hi - box_margin);
        } else {
            const auto& w = std::get<Simplex>(c).weights;
            double top = 0.0;
            for (std::size_t i = 1; i < w.size(); ++i)
                top = std::max(top, z[zi + i - 1]);
            double total = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double logit = i == 0 ? 0.0 : z[zi + i - 1];
                x[xi + i] = std::exp(logit - top);
                total += w[i] * x[xi + i];
            }
            for (std::size_t i = 0; i < w.size(); ++i)
                x[xi + i] /= total;
            zi += w.size() - 1;
            xi += w.size();
        }
    }
    return x;
}

std::vector<double> Domain::to_free(std::span<const double> x) const {
    if (x.size() != dimension_)
        throw std::invalid_argument("point has wrong dimension");
    std::vector<double> z(free_dimension_);
    std::size_t zi = 0;
    std::size_t xi = 0;
    for (const auto& c : components_) {
        if (const auto* box = std::get_if<Box>(&c)) {
            const double u = std::clamp((x[xi++] - box->lo) / (box->hi - box->lo), 1e-15, 1.0 - 1e-15);
            z[zi++] = std::log(u / (1.0 - u));
        } else {
            const auto& w = std::get<Simplex>(c).weights;
            const double base = std::log(std::max(x[xi], 1e-300));
            for (std::size_t i = 1; i < w.size(); ++i)
                z[zi + i - 1] = std::log(std::max(x[xi + i], 1e-300)) - base;
            zi += w.size() - 1;
            xi += w.size();
        }
    }
    return z;
}

std::vector<double> Domain::pull_back(std::span<const double> z, std::span<const double> grad_x) const {
    const auto x = to_point(z);
    std::vector<double> gz(free_dimension_);
    std::size_t zi = 0;
    std::size_t xi = 0;
    for (const auto& c : components_) {
        if (const auto* box = std::get_if<Box>(&c)) {
            const double sg = logistic(z[zi]);
            gz[zi++] = grad_x[xi++] * (box->hi - box->lo) * sg * (1.0 - sg);
        } else {
            const auto& w = std::get<Simplex>(c).weights;
            double mean = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i)
                mean += grad_x[xi + i] * x[xi + i];
            for (std::size_t j = 1; j < w.size(); ++j)
                gz[zi + j - 1] = x[xi + j] * (grad_x[xi + j] - w[j] * mean);
            zi += w.size() - 1;
            xi += w.size();
        }
    }
    return gz;
}

std::vector<double> Domain::project_gradient(std::span<const double> x,
                                             std::span<const double> grad_x) const {
    std::vector<double> out(grad_x.begin(), grad_x.end());
    std::size_t xi = 0;
    for (const auto& c : components_) {
        if (const auto* box = std::get_if<Box>(&c)) {
            const double tiny = 1e-9 * (box->hi - box->lo);
            if ((x[xi] <= box->lo + tiny && out[xi] < 0.0) || (x[xi] >= box->hi - tiny && out[xi] > 0.0))
                out[xi] = 0.0;
            ++xi;
        } else {
            const auto& w = std::get<Simplex>(c).weights;
            double gw = 0.0;
            double ww = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                gw += out[xi + i] * w[i];
                ww += w[i] * w[i];
            }
            for (std::size_t i = 0; i < w.size(); ++i)
                out[xi + i] -= gw / ww * w[i];
            xi += w.size();
        }
    }
    return out;
}

NonFiniteObjective::NonFiniteObjective(std::vector<double> point, double value)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "objective is " << value << " at feasible point (";
          for (std::size_t i = 0; i < point.size(); ++i)
              msg << (i ? ", " : "") << point[i];
          msg << ")";
          return msg.str();
      }()),
      point_(std::move(point)) {}

OptimizationResult maximize(const Problem& problem, const Domain& domain, const OptimizerSettings& settings) {
    if (!problem.value)
        throw std::invalid_argument("objective missing");
    if (domain.dimension() == 0)
        throw std::invalid_argument("empty domain");
    const Minimizer minimizer(problem, domain);
    const auto starts = start_points(domain, settings);
    std::vector<Minimizer::Outcome> outcomes(starts.size());
    detail::parallel_for(
        starts.size(), [&](std::size_t i) { outcomes[i] = minimizer.run(starts[i], settings); },
        settings.threads);

    std::size_t best = 0;
    int total = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        total += outcomes[i].iterations;
        if (outcomes[i].f < outcomes[best].f)
            best = i;
    }
    OptimizationResult r;
    r.argmax = domain.to_point(outcomes[best].z);
    r.value = -outcomes[best].f;
    r.iterations = outcomes[best].iterations;
    r.total_iterations = total;
    r.starts_used = static_cast<int>(outcomes.size());
    r.best_start = static_cast<int>(best);
    r.gradient_norm = outcomes[best].gnorm;
    r.converged = r.gradient_norm <= settings.gtol;
    return r;
}

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double h) {
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double up = f(probe);
        probe[i] = x[i] - h;
        const double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double finite_difference_gradient_check(const Objective& f, const GradientFn& gradient,
                                        std::span<const double> x, double h) {
    const auto fd = numerical_gradient(f, x, h);
    std::vector<double> g(x.size());
    gradient(x, g);
    double diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        diff = std::max(diff, std::abs(g[i] - fd[i]));
    const double scale = inf_norm(fd);
    return scale == 0.0 ? inf_norm(g) : diff / scale;
}

} // namespace hardcore
