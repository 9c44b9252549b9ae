#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace hardcore;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hardcore-cli-test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
}

// Drop the wall-clock field before comparing bundles.
nlohmann::json stable(nlohmann::json j) {
    j["provenance"].erase("seconds");
    return j;
}

} // namespace

TEST_CASE("exit codes") {
    CHECK(run({}).code == cli::config_error);
    CHECK(run({"--help"}).code == cli::ok);
    CHECK(run({"bogus"}).code == cli::config_error);
    CHECK(run({"bound", "--scheme", "nonsense"}).code == cli::config_error);
    CHECK(run({"bound", "--scheme", "block", "--n", "4"}).code == cli::config_error);
    CHECK(run({"bound", "--scheme", "block", "--lattice", "kagome"}).code == cli::config_error);
    CHECK(run({"strip", "--max-width", "40"}).code == cli::config_error);
    CHECK(run({"sample", "--lattice", "square", "--params", "0.1,0.2"}).code == cli::config_error);

    const auto r = run({"bound", "--scheme", "closed"});
    CHECK(r.code == cli::ok);
    for (const char* name : {"square", "honeycomb", "triangular", "kagome", "square-moore"})
        CHECK(r.out.find(name) != std::string::npos);
    CHECK(run({"verify", "--only", "5"}).code == cli::ok);
}

TEST_CASE("verify fails with exit 1 when a check fails") {
    // A different reference entropy moves the blocking-constant root off its target.
    const auto r = run({"verify", "--only", "6", "--href", "0.42"});
    CHECK(r.code == cli::check_failed);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("bound output is deterministic and independent of the cache") {
    const auto dir = fresh_dir("determinism");
    const auto cache = dir / "cache";
    const auto a = dir / "a.json", b = dir / "b.json", c = dir / "c.json";
    const std::vector<std::string> base{"bound", "--scheme", "block", "--n", "3", "--seed", "5"};
    auto with = [&](std::vector<std::string> extra) {
        auto v = base;
        v.insert(v.end(), extra.begin(), extra.end());
        return v;
    };
    REQUIRE(run(with({"--out", a.string()})).code == cli::ok);
    REQUIRE(run(with({"--out", b.string(), "--cache-dir", cache.string()})).code == cli::ok);
    CHECK(fs::exists(cache));
    CHECK_FALSE(fs::is_empty(cache));
    REQUIRE(run(with({"--out", c.string(), "--cache-dir", cache.string()})).code == cli::ok);
    const auto ja = stable(read_json(a)), jb = stable(read_json(b)), jc = stable(read_json(c));
    CHECK(ja["reports"] == jb["reports"]);
    CHECK(jb["reports"] == jc["reports"]);
    CHECK(ja["reports"][0]["value_nats"].get<double>() > 0.4);
}

TEST_CASE("corrupt cache files are rebuilt with a warning") {
    const auto dir = fresh_dir("corrupt");
    std::ostringstream sink;
    const auto fam = cli::cached_family(3, Reduction::SymmetryWeak, dir, sink);
    const auto file = family_cache_path(dir, 3, Reduction::SymmetryWeak);
    REQUIRE(fs::exists(file));
    {
        std::ofstream out(file);
        out << "hardcore-block-family 1\nn 3\nbroken\n";
    }
    std::ostringstream err;
    const auto rebuilt = cli::cached_family(3, Reduction::SymmetryWeak, dir, err);
    CHECK_FALSE(err.str().empty());
    CHECK(rebuilt->class_count() == fam->class_count());
    std::ostringstream quiet;
    (void)cli::cached_family(3, Reduction::SymmetryWeak, dir, quiet);
    CHECK(quiet.str().empty());
}

TEST_CASE("config files") {
    const auto dir = fresh_dir("config");
    const auto good = dir / "good.ini";
    const auto bad = dir / "bad.ini";
    {
        std::ofstream out(good);
        out << "[bound]\nscheme=closed\nlattice=square\n";
    }
    {
        std::ofstream out(bad);
        out << "[bound]\nscheme=closed\nfrobnicate=3\n";
    }
    const auto r = run({"--config", good.string(), "bound"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("square") != std::string::npos);
    CHECK(r.out.find("kagome") == std::string::npos);
    const auto over = run({"--config", good.string(), "bound", "--lattice", "kagome"});
    CHECK(over.code == cli::ok);
    CHECK(over.out.find("kagome") != std::string::npos);
    CHECK(run({"--config", bad.string(), "bound"}).code == cli::config_error);
}

TEST_CASE("sample, strip and profile commands") {
    const auto s = run({"sample", "--lattice", "square", "--params", "0.17", "--size", "64,64", "--seed", "3"});
    REQUIRE(s.code == cli::ok);
    const auto j = nlohmann::json::parse(s.out);
    CHECK(j["stages"].size() == 2);
    const auto s2 = run({"sample", "--lattice", "square", "--params", "0.17", "--size", "64,64", "--seed", "3"});
    CHECK(s2.out == s.out);

    const auto st = run({"strip", "--max-width", "3"});
    REQUIRE(st.code == cli::ok);
    CHECK(st.out.rfind("width,boundary,entropy", 0) == 0);

    const auto pr = run({"profile", "--n", "2", "--generators", "1,2"});
    REQUIRE(pr.code == cli::ok);
    CHECK(pr.out.rfind("k,probability,generator", 0) == 0);
}
