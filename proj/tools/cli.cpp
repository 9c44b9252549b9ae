#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hardcore/acceptance.hpp"
#include "hardcore/block_bound.hpp"
#include "hardcore/oracles.hpp"
#include "hardcore/report.hpp"
#include "hardcore/schemes.hpp"

namespace hardcore::cli {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptimizerFlags {
    std::uint64_t seed = 0;
    int starts = 16;
    double tol = 1e-7;
    int max_iter = 10000;

    OptimizerSettings settings() const {
        OptimizerSettings s;
        s.seed = seed;
        s.starts = starts;
        s.gtol = tol;
        s.max_iter = max_iter;
        return s;
    }
};

void add_optimizer_flags(CLI::App* cmd, OptimizerFlags& f) {
    cmd->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    cmd->add_option("--starts", f.starts, "Optimizer multistarts")->check(CLI::Range(1, 1024))->capture_default_str();
    cmd->add_option("--tol", f.tol, "Gradient tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Iterations per start")->check(CLI::Range(1, 10000000))->capture_default_str();
}

std::vector<LatticeKind> lattices_for(Scheme scheme, const std::string& lattice) {
    const auto allowed = scheme_lattices(scheme);
    if (lattice == "all")
        return allowed;
    LatticeKind kind;
    try {
        kind = parse_lattice_kind(lattice);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (std::find(allowed.begin(), allowed.end(), kind) == allowed.end())
        throw ConfigError(fmt::format("scheme {} is not defined on {}", to_string(scheme), lattice));
    return {kind};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f)
        throw ConfigError("cannot write " + path);
    f << text;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + item + "'");
        }
    return out;
}

void check_block_size(int n, bool long_run) {
    if (n < 1 || n > max_reducible_side)
        throw ConfigError(fmt::format("block size must lie in 1..{}", max_reducible_side));
    if (n == 4 && !long_run)
        throw ConfigError("n = 4 (991 variables) is a long run; pass --long to allow it");
}

} // namespace

std::optional<std::filesystem::path> resolve_cache_dir(const std::string& flag) {
    if (!flag.empty())
        return std::filesystem::path(flag);
    if (const char* env = std::getenv("HC_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

std::shared_ptr<const BlockFamily> cached_family(int n, Reduction reduction,
                                                 const std::optional<std::filesystem::path>& dir, std::ostream& err) {
    if (dir) {
        const auto path = family_cache_path(*dir, n, reduction);
        if (std::filesystem::exists(path)) {
            try {
                auto f = load_family(path);
                if (f.n() == n && f.reduction() == reduction)
                    return std::make_shared<const BlockFamily>(std::move(f));
                fmt::print(err, "warning: cache {} describes a different family; rebuilding\n", path.string());
            } catch (const CacheError& e) {
                fmt::print(err, "warning: {}; rebuilding\n", e.what());
            }
        }
    }
    auto family = std::make_shared<const BlockFamily>(reduce_family(n, reduction));
    if (dir)
        save_family(*family, family_cache_path(*dir, n, reduction));
    return family;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lower bounds for the entropy of the hard-core model", "hardcore"};
    app.set_config("--config", "", "INI configuration file (flags override it)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    std::string cache_flag;
    auto add_cache_flag = [&](CLI::App* cmd) {
        cmd->add_option("--cache-dir", cache_flag, "Block-family cache directory (default $HC_CACHE_DIR)");
    };

    // bound
    auto* bound = app.add_subcommand("bound", "Optimize a lower bound and report it");
    std::string scheme_name = "closed";
    std::string lattice = "all";
    int n = 3;
    bool long_run = false;
    std::string out_path;
    double prune = 0.0;
    OptimizerFlags opt;
    bound->add_option("--scheme", scheme_name, "closed | equalized | three-hex | block")->capture_default_str();
    bound->add_option("--lattice", lattice, "Lattice name or 'all'")->capture_default_str();
    bound->add_option("--n", n, "Block size for the block scheme")->capture_default_str();
    bound->add_flag("--long", long_run, "Allow the 4x4 block optimization");
    bound->add_option("--prune", prune, "Drop block classes below this warm-start probability")
        ->check(CLI::NonNegativeNumber);
    bound->add_option("--out", out_path, "Write the JSON report bundle here");
    add_optimizer_flags(bound, opt);
    add_cache_flag(bound);

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Build block families and print their sizes");
    int reduce_n = 3;
    bool reduce_long = false;
    reduce->add_option("--n", reduce_n, "Block size (1..4)")->capture_default_str();
    reduce->add_flag("--long", reduce_long, "Accepted for symmetry with bound; reduction of n = 4 is fast");
    add_cache_flag(reduce);

    // verify
    auto* verify = app.add_subcommand("verify", "Run every acceptance check");
    double href = 0.4075;
    std::vector<int> only;
    OptimizerFlags verify_opt;
    std::uint64_t verify_seed = AcceptanceOptions{}.seed;
    verify->add_option("--href", href, "Reference entropy for the blocking-constant bound")->capture_default_str();
    verify->add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, acceptance_criteria));
    verify->add_option("--seed", verify_seed, "Seed for sampled checks")->capture_default_str();
    verify->add_option("--starts", verify_opt.starts, "Optimizer multistarts")->capture_default_str();

    // profile
    auto* profile = app.add_subcommand("profile", "Block occupancy profiles as CSV");
    int profile_n = 3;
    std::vector<int> generators{1, 2, 3};
    bool profile_long = false;
    std::string profile_out;
    OptimizerFlags profile_opt;
    profile->add_option("--n", profile_n, "Window size")->capture_default_str();
    profile->add_option("--generators", generators, "Generator block sizes")->delimiter(',')->capture_default_str();
    profile->add_flag("--long", profile_long, "Allow 4x4 generators");
    profile->add_option("--out", profile_out, "CSV output path (default stdout)");
    add_optimizer_flags(profile, profile_opt);
    add_cache_flag(profile);

    // sample
    auto* sample = app.add_subcommand("sample", "Run the sequential fill-in sampler");
    std::string sample_lattice = "square";
    std::string sample_scheme = "closed";
    std::string params_text;
    std::vector<int> size{512, 512};
    std::uint64_t sample_seed = 0;
    double final_p = 0.5;
    std::string sample_out;
    sample->add_option("--lattice", sample_lattice, "Lattice name")->capture_default_str();
    sample->add_option("--scheme", sample_scheme, "closed | three-hex")->capture_default_str();
    sample->add_option("--params", params_text,
                       "Comma-separated stage parameters (three-hex: p0,p1,p2,p3[,q]); default: the optimum");
    sample->add_option("--size", size, "Torus width,height")->delimiter(',')->expected(2);
    sample->add_option("--seed", sample_seed, "Random seed")->capture_default_str();
    sample->add_option("--final-p", final_p, "Last-stage probability")->check(CLI::Range(0.0, 1.0));
    sample->add_option("--out", sample_out, "JSON output path (default stdout)");

    // strip
    auto* strip = app.add_subcommand("strip", "Strip transfer-matrix entropies as CSV");
    int max_width = 12;
    std::string boundary = "both";
    std::string strip_out;
    double strip_href = 0.4075;
    strip->add_option("--max-width", max_width, "Largest width")->check(CLI::Range(1, max_strip_width))->capture_default_str();
    strip->add_option("--boundary", boundary, "free | periodic | both")->capture_default_str();
    strip->add_option("--href", strip_href, "Reference entropy printed for comparison")->capture_default_str();
    strip->add_option("--out", strip_out, "CSV output path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::Success&) {
        return ok;
    } catch (const CLI::ParseError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return config_error;
    }

    const auto cache_dir = resolve_cache_dir(cache_flag);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    try {
        if (*bound) {
            Scheme scheme;
            try {
                scheme = parse_scheme(scheme_name);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            ReportBundle bundle;
            const auto settings = opt.settings();
            if (scheme == Scheme::Block) {
                if (lattice != "all" && lattice != "square")
                    throw ConfigError("the block scheme is defined on the square lattice only");
                check_block_size(n, long_run);
                if (prune > 0.0 && n < 2)
                    throw ConfigError("--prune needs a warm start (n >= 2)");
                const auto family = cached_family(n, Reduction::SymmetryWeak, cache_dir, err);
                std::optional<BlockDistribution> warm;
                if (n > 1) {
                    const auto smaller = optimize_block(cached_family(n - 1, Reduction::SymmetryWeak, cache_dir, err),
                                                        settings);
                    warm = extend_distribution(smaller.distribution, family);
                }
                const BlockOptions options{warm, prune};
                bundle.reports.push_back(optimize_block(family, settings, options).report);
            } else {
                for (auto kind : lattices_for(scheme, lattice)) {
                    switch (scheme) {
                    case Scheme::Closed: bundle.reports.push_back(optimize_closed(kind, settings)); break;
                    case Scheme::Equalized: bundle.reports.push_back(optimize_equalized(kind, settings)); break;
                    case Scheme::ThreeHex: bundle.reports.push_back(optimize_three_hex(kind, settings)); break;
                    case Scheme::Block: break;
                    }
                }
            }
            for (const auto& r : bundle.reports)
                check_report(r);
            bundle.provenance = {library_version(), opt.seed, elapsed(), "bound"};
            write_table(out, bundle.reports);
            if (!out_path.empty())
                write_file(out_path, to_json(bundle).dump(2) + "\n");
            return ok;
        }

        if (*reduce) {
            if (reduce_n < 1 || reduce_n > max_reducible_side)
                throw ConfigError(fmt::format("block size must lie in 1..{}", max_reducible_side));
            const auto d4 = cached_family(reduce_n, Reduction::Symmetry, cache_dir, err);
            const auto weak = cached_family(reduce_n, Reduction::SymmetryWeak, cache_dir, err);
            fmt::print(out, "n                      {}\n", reduce_n);
            fmt::print(out, "masks                  {}\n", weak->mask_count());
            fmt::print(out, "symmetry classes       {} ({} free)\n", d4->class_count(), d4->free_variables());
            fmt::print(out, "symmetry+weak classes  {} ({} free)\n", weak->class_count(), weak->free_variables());
            if (cache_dir)
                fmt::print(out, "cache                  {}\n",
                           family_cache_path(*cache_dir, reduce_n, Reduction::SymmetryWeak).string());
            return ok;
        }

        if (*verify) {
            AcceptanceOptions options;
            options.h_ref = href;
            options.seed = verify_seed;
            options.optimizer.starts = verify_opt.starts;
            std::vector<int> ids = only;
            if (ids.empty())
                for (int id = 1; id <= acceptance_criteria; ++id)
                    ids.push_back(id);
            int failed = 0;
            for (int id : ids) {
                const auto r = run_criterion(id, options);
                fmt::print(out, "{} {:>2} {}\n", r.passed() ? "PASS" : "FAIL", r.id, r.title);
                for (const auto& c : r.checks)
                    fmt::print(out, "        [{}] {}: {}\n", c.passed ? "ok" : "x", c.label, c.detail);
                failed += r.passed() ? 0 : 1;
            }
            fmt::print(out, "{} of {} criteria passed\n", ids.size() - static_cast<std::size_t>(failed), ids.size());
            return failed == 0 ? ok : check_failed;
        }

        if (*profile) {
            check_block_size(profile_n, profile_long);
            std::vector<DensityProfile> profiles;
            for (int m : generators) {
                check_block_size(m, profile_long);
                if (m > profile_n)
                    throw ConfigError("generator blocks must not exceed the window size");
                const auto opt_m =
                    optimize_block(cached_family(m, Reduction::SymmetryWeak, cache_dir, err), profile_opt.settings());
                profiles.push_back(density_profile(profile_n, opt_m.distribution));
            }
            std::ostringstream csv;
            write_profiles_csv(csv, profiles);
            if (profile_out.empty())
                out << csv.str();
            else
                write_file(profile_out, csv.str());
            for (const auto& p : profiles)
                fmt::print(err, "# {} mean/site {:.4f} variance {:.4f}\n", p.generator, p.mean() / (profile_n * profile_n),
                           p.variance());
            for (std::size_t a = 0; a < profiles.size(); ++a)
                for (std::size_t b = a + 1; b < profiles.size(); ++b) {
                    std::string where;
                    for (int k : profile_crossings(profiles[b], profiles[a]))
                        where += fmt::format(" ({},{})", k, k + 1);
                    fmt::print(err, "# crossings {} vs {}:{}\n", profiles[b].generator, profiles[a].generator,
                               where.empty() ? " none" : where);
                }
            return ok;
        }

        if (*sample) {
            LatticeKind kind;
            try {
                kind = parse_lattice_kind(sample_lattice);
            } catch (const std::exception& e) {
                throw ConfigError(e.what());
            }
            std::vector<double> params = params_text.empty() ? std::vector<double>{} : parse_list(params_text);
            const TorusDims dims{size[0], size[1]};
            FillInSample result = [&] {
                if (sample_scheme == "three-hex") {
                    if (params.empty())
                        params = optimize_three_hex(kind).params;
                    if (params.size() != (kind == LatticeKind::Triangular ? 5u : 4u))
                        throw ConfigError("three-hex sampling takes p0,p1,p2,p3 (and q on triangular)");
                    const ThreeHexParam pv(params[0], params[1], params[2], params[3]);
                    return three_hex_sample(kind, pv, params.size() == 5 ? params[4] : 0.5, dims, sample_seed);
                }
                if (sample_scheme != "closed")
                    throw ConfigError("sample supports the closed and three-hex schemes");
                if (params.empty())
                    params = optimize_closed(kind).params;
                return fill_in_sample(kind, params, dims, sample_seed, final_p);
            }();
            nlohmann::json stages = nlohmann::json::array();
            for (const auto& s : result.stages)
                stages.push_back(to_json(s));
            const nlohmann::json doc{{"schema_version", report_schema_version},
                                     {"lattice", sample_lattice},
                                     {"scheme", sample_scheme},
                                     {"params", params},
                                     {"width", dims.width},
                                     {"height", dims.height},
                                     {"seed", sample_seed},
                                     {"hard_core", verify_hard_core(result.config)},
                                     {"stages", stages}};
            if (sample_out.empty())
                out << doc.dump(2) << "\n";
            else
                write_file(sample_out, doc.dump(2) + "\n");
            return ok;
        }

        if (*strip) {
            std::vector<StripBoundary> kinds;
            if (boundary == "both")
                kinds = {StripBoundary::Free, StripBoundary::Periodic};
            else
                try {
                    kinds = {parse_strip_boundary(boundary)};
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
            std::vector<StripRow> rows;
            for (auto b : kinds)
                for (int w = 1; w <= max_width; ++w)
                    rows.push_back({w, b, strip_entropy({w, b})});
            std::ostringstream csv;
            write_strips_csv(csv, rows);
            if (strip_out.empty())
                out << csv.str();
            else
                write_file(strip_out, csv.str());
            for (const auto& r : rows)
                if (r.width == max_width)
                    fmt::print(err, "# width {} {}: {:.6f} (reference {:.4f}, difference {:+.6f})\n", r.width,
                               to_string(r.boundary), r.entropy, strip_href, r.entropy - strip_href);
            return ok;
        }
    } catch (const ConfigError& e) {
        fmt::print(err, "error: {}\n", e.what());
        return config_error;
    } catch (const std::invalid_argument& e) {
        fmt::print(err, "error: {}\n", e.what());
        return config_error;
    } catch (const std::domain_error& e) {
        fmt::print(err, "error: {}\n", e.what());
        return config_error;
    } catch (const std::out_of_range& e) {
        fmt::print(err, "error: {}\n", e.what());
        return config_error;
    }
    return config_error;
}

} // namespace hardcore::cli
