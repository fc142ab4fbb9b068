#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "mzl/cli.hpp"
#include "mzl/error.hpp"

using namespace mzl;

namespace {

CliOptions fast_opts() {
    CliOptions o;
    o.tol = 1e-6;
    return o;
}

// unique scratch directory, removed on destruction
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("mzl_cli_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("analyze: elliptic and hyperbola examples") {
    auto rep = run_analyze("x1^2 + x2^2", fast_opts());
    CHECK(rep.command == "analyze");
    CHECK(rep.extra["elliptic"].get<bool>());
    CHECK(rep.extra["sigma0"].get<std::string>() == "1");
    CHECK(rep.extra["rho0"].get<int>() == 1);

    auto hyp = run_analyze("x1 x2", fast_opts());
    CHECK_FALSE(hyp.extra["elliptic"].get<bool>());
    CHECK(hyp.extra["sigma0"].get<std::string>() == "1");
    CHECK(hyp.extra["rho0"].get<int>() == 2);

    CHECK_THROWS_AS(run_analyze("x1^2 +", fast_opts()), ParseError);
}

TEST_CASE("reports: identical config gives identical bytes") {
    auto a = run_analyze("x1^3 + x1 x2 + x2^3", fast_opts());
    auto b = run_analyze("x1^3 + x1 x2 + x2^3", fast_opts());
    CHECK(a.to_json() == b.to_json());
    CHECK(a.config_hash.size() == 16);
    CHECK(a.config_hash == b.config_hash);

    // a different tolerance must change the hash
    CliOptions o2 = fast_opts();
    o2.tol = 1e-8;
    auto c = run_analyze("x1^3 + x1 x2 + x2^3", o2);
    CHECK(c.config_hash != a.config_hash);
}

TEST_CASE("reports: thread count changes neither bytes nor hash") {
    CliOptions o1 = fast_opts(), o8 = fast_opts();
    o8.threads = 8;
    auto a = run_count("unit", "x1 + x2", 200.0, {}, o1);
    auto b = run_count("unit", "x1 + x2", 200.0, {}, o8);
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("constant: modes agree on the quarter circle") {
    const double pi4 = 0.7853981633974483;
    auto e = run_constant("x1^2 + x2^2", "elliptic", 0, fast_opts());
    CHECK(e.results.at(0).value == doctest::Approx(pi4).epsilon(1e-6));
    auto m = run_constant("x1^2 + x2^2", "mc", 400000, fast_opts());
    CHECK(m.results.at(0).value == doctest::Approx(pi4).epsilon(0.01));
    CHECK_THROWS_AS(run_constant("x1^2 + x2^2", "nope", 0, fast_opts()),
                    ParseError);
}

TEST_CASE("count: single threshold report shape") {
    auto rep = run_count("B2", "x1^2 + x2^2", 150.0, {}, fast_opts());
    REQUIRE(rep.results.size() == 3);  // N, prediction, ratio
    CHECK(rep.results[0].name == "N");
    CHECK(rep.results[2].value ==
          doctest::Approx(rep.results[0].value / rep.results[1].value));
    CHECK(rep.extra.contains("provenance"));

    // csv rendering carries the documented grid columns
    auto csv = rep.to_csv();
    CHECK(csv.rfind("t,N,prediction,ratio,seconds", 0) == 0);
}

TEST_CASE("count: grid verdict drives the exit status") {
    auto good = run_count("unit", "x1 + x2", std::nullopt, {10, 100, 1000},
                          fast_opts());
    REQUIRE(good.verdicts.size() == 1);
    CHECK(good.verdicts[0].pass);
    std::ostringstream sink;
    CHECK(emit(good, fast_opts(), sink) == 0);

    // far short of the asymptotic regime: ratio check must fail
    auto bad = run_count("unit", "x1 x2", std::nullopt, {3, 6}, fast_opts());
    REQUIRE(bad.verdicts.size() == 1);
    CHECK_FALSE(bad.verdicts[0].pass);
    std::ostringstream sink2;
    CHECK(emit(bad, fast_opts(), sink2) == 1);
    CHECK(bad.to_text().find("FAIL") != std::string::npos);
}

TEST_CASE("count: refusal is reported, not fatal") {
    auto rep = run_count("unit", "x1^3 + x1^2 x2", 50.0, {}, fast_opts());
    CHECK(rep.extra["refused"].get<bool>());
    CHECK(rep.extra["iota_bound"].get<std::string>() == "3");
    CHECK_FALSE(rep.extra["iota_attained"].get<bool>());
    CHECK(rep.results.size() == 1);  // the exact count only
}

TEST_CASE("euler: named weight wrapper") {
    CliOptions o = fast_opts();
    o.tol = 1e-8;
    auto rep = run_euler("D2", 1, o);
    CHECK(rep.results.at(0).value ==
          doctest::Approx(0.6079271018540267).epsilon(1e-8));
    CHECK(rep.extra["c"].get<std::string>() == "(1)");
    CHECK_THROWS_AS(run_euler("nosuch", 2, o), ParseError);
}

TEST_CASE("zeta: needs a mode and honors both") {
    CliOptions o = fast_opts();
    CHECK_THROWS_AS(
        run_zeta("", "x1 + x2", std::nullopt, std::nullopt, o), ParseError);
    auto ev = run_zeta("", "x1 + x2", 3.0, std::nullopt, o);
    CHECK(ev.results.at(0).name == "Y");
    auto pf = run_zeta("", "x1 + x2", std::nullopt, 2.0, o);
    CHECK(pf.results.at(0).value == doctest::Approx(1));  // order
    CHECK(pf.results.at(1).value == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("verify: unknown suite rejected") {
    CHECK_THROWS_AS(run_verify("nosuch", fast_opts()), ParseError);
}

TEST_CASE("cache: json replay returns the stored bytes verbatim") {
    TempDir tmp;
    CliOptions o = fast_opts();
    o.cache_dir = tmp.path.string();

    auto first = run_analyze("x1^2 + x1 x2^3", o);
    std::ostringstream out1;
    CHECK(emit(first, o, out1) == 0);

    auto second = run_analyze("x1^2 + x1 x2^3", o);
    CHECK_FALSE(second.cached_bytes.empty());
    std::ostringstream out2;
    CHECK(emit(second, o, out2) == 0);
    CHECK(out1.str() == out2.str());

    // non-json formats recompute and never consult the cache
    CliOptions ot = o;
    ot.format = "text";
    auto third = run_analyze("x1^2 + x1 x2^3", ot);
    CHECK(third.cached_bytes.empty());
}
