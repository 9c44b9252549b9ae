#include "hardcore/report.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hardcore {

void check_report(const BoundReport& r) {
    if (!(r.value >= 0.0) || !std::isfinite(r.value))
        throw std::logic_error("bound report has invalid value " + std::to_string(r.value));
    for (double d : r.densities)
        if (!(d >= 0.0 && d <= 1.0))
            throw std::logic_error("bound report density outside [0,1]: " + std::to_string(d));
    if (r.param_names.size() != r.params.size())
        throw std::logic_error("bound report parameter names and values differ in length");
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["schema_version"] = report_schema_version;
    j["scheme"] = r.scheme;
    j["lattice"] = r.lattice;
    j["n"] = r.block_size;
    j["value_nats"] = r.value;
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t i = 0; i < r.params.size(); ++i)
        params[r.param_names[i]] = r.params[i];
    j["params"] = params;
    j["densities"] = r.densities;
    if (r.optimizer) {
        const auto& o = *r.optimizer;
        j["optimizer"] = {{"iterations", o.iterations},
                          {"total_iterations", o.total_iterations},
                          {"starts_used", o.starts_used},
                          {"converged", o.converged},
                          {"gradient_norm", o.gradient_norm}};
    } else {
        j["optimizer"] = nullptr;
    }
    return j;
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != report_schema_version)
        throw std::runtime_error("unsupported report schema version");
    BoundReport r;
    r.scheme = j.at("scheme").get<std::string>();
    r.lattice = j.at("lattice").get<std::string>();
    r.block_size = j.at("n").get<int>();
    r.value = j.at("value_nats").get<double>();
    for (const auto& [name, v] : j.at("params").items()) {
        r.param_names.push_back(name);
        r.params.push_back(v.get<double>());
    }
    r.densities = j.at("densities").get<std::vector<double>>();
    if (!j.at("optimizer").is_null()) {
        const auto& o = j.at("optimizer");
        r.optimizer = OptimizerInfo{o.at("iterations").get<int>(), o.at("total_iterations").get<int>(),
                                    o.at("starts_used").get<int>(), o.at("converged").get<bool>(),
                                    o.at("gradient_norm").get<double>()};
    }
    check_report(r);
    return r;
}

nlohmann::json to_json(const ReportBundle& bundle) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : bundle.reports)
        reports.push_back(to_json(r));
    return {{"schema_version", report_schema_version},
            {"reports", reports},
            {"provenance",
             {{"version", bundle.provenance.version},
              {"seed", bundle.provenance.seed},
              {"seconds", bundle.provenance.seconds},
              {"command", bundle.provenance.command}}}};
}

nlohmann::json to_json(const StageStats& s) {
    return {{"stage", s.stage},
            {"sublattice", std::string(to_string(s.sublattice))},
            {"probability", s.probability},
            {"analytic", s.analytic_density},
            {"empirical", s.empirical_density},
            {"stderr", s.stderr_density},
            {"analytic_unforced", s.analytic_unforced},
            {"empirical_unforced", s.empirical_unforced},
            {"stderr_unforced", s.stderr_unforced},
            {"n_sites", s.n_sites}};
}

nlohmann::json to_json(const DensityProfile& p) {
    return {{"n", p.n},
            {"generator", p.generator},
            {"occupancy", p.occupancy},
            {"mean", p.mean()},
            {"variance", p.variance()}};
}

void write_table(std::ostream& out, const std::vector<BoundReport>& reports) {
    fmt::print(out, "{:<10} {:<13} {:>2} {:>10}  {}\n", "scheme", "lattice", "n", "bound", "densities");
    for (const auto& r : reports) {
        std::string dens;
        for (std::size_t i = 0; i < r.densities.size(); ++i)
            dens += fmt::format("{}{:.4f}", i ? ", " : "", r.densities[i]);
        fmt::print(out, "{:<10} {:<13} {:>2} {:>10.6f}  ({})\n", r.scheme, r.lattice,
                   r.block_size ? std::to_string(r.block_size) : "-", r.value, dens);
    }
}

void write_profiles_csv(std::ostream& out, const std::vector<DensityProfile>& profiles) {
    out << "k,probability,generator\n";
    for (const auto& p : profiles)
        for (std::size_t k = 0; k < p.occupancy.size(); ++k)
            fmt::print(out, "{},{:.12g},{}\n", k, p.occupancy[k], p.generator);
}

void write_strips_csv(std::ostream& out, const std::vector<StripRow>& rows) {
    out << "width,boundary,entropy\n";
    for (const auto& r : rows)
        fmt::print(out, "{},{},{:.12f}\n", r.width, to_string(r.boundary), r.entropy);
}

std::string library_version() {
    return "1.0.0";
}

} // namespace hardcore
