#include <doctest.h>

#include <sstream>

#include "hardcore/report.hpp"
#include "hardcore/schemes.hpp"

using namespace hardcore;

TEST_CASE("bound report JSON round trip") {
    const auto r = optimize_closed(LatticeKind::Triangular);
    const auto j = to_json(r);
    CHECK(j["schema_version"] == report_schema_version);
    CHECK(j["scheme"] == "closed");
    CHECK(j["lattice"] == "triangular");
    CHECK(j["params"].is_object());
    CHECK(j["densities"].size() == 3);
    const auto back = bound_report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.scheme == r.scheme);
    CHECK(back.lattice == r.lattice);
    CHECK(back.value == r.value);
    CHECK(back.param_names == r.param_names);
    CHECK(back.params == r.params);
    CHECK(back.densities == r.densities);
    REQUIRE(back.optimizer.has_value());
    CHECK(back.optimizer->converged == r.optimizer->converged);

    BoundReport plain = closed_bound(LatticeKind::Square, std::vector<double>{0.2});
    const auto pj = to_json(plain);
    CHECK(pj["optimizer"].is_null());
    CHECK_FALSE(bound_report_from_json(pj).optimizer.has_value());
    auto broken = pj;
    broken["schema_version"] = 99;
    CHECK_THROWS(bound_report_from_json(broken));
}

TEST_CASE("report invariants") {
    BoundReport r;
    r.scheme = "closed";
    r.lattice = "square";
    r.value = -0.1;
    CHECK_THROWS_AS(check_report(r), std::logic_error);
    r.value = 0.3;
    r.densities = {1.2};
    CHECK_THROWS_AS(check_report(r), std::logic_error);
    r.densities = {0.2};
    r.param_names = {"p"};
    CHECK_THROWS_AS(check_report(r), std::logic_error);
    r.params = {0.2};
    CHECK_NOTHROW(check_report(r));
}

TEST_CASE("bundle, table and CSV writers") {
    ReportBundle b{{optimize_closed(LatticeKind::Square)}, {library_version(), 7, 0.5, "bound"}};
    const auto j = to_json(b);
    CHECK(j["reports"].size() == 1);
    CHECK(j["provenance"]["seed"] == 7);
    CHECK(j["provenance"]["version"] == library_version());

    std::ostringstream table;
    write_table(table, b.reports);
    CHECK(table.str().find("square") != std::string::npos);
    CHECK(table.str().find("0.3924") != std::string::npos);

    std::ostringstream csv;
    write_profiles_csv(csv, {DensityProfile{1, {0.25, 0.75}, "1x1"}});
    CHECK(csv.str().rfind("k,probability,generator\n", 0) == 0);
    CHECK(csv.str().find("1,0.75") != std::string::npos);

    std::ostringstream strips;
    write_strips_csv(strips, {{1, StripBoundary::Free, 0.48}});
    CHECK(strips.str().rfind("width,boundary,entropy\n1,free,", 0) == 0);
}
