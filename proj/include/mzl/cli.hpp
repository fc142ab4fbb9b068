#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace mzl {

// Shared knobs resolved from flags and environment by the entry point.
struct CliOptions {
    double tol = 1e-7;
    std::uint64_t seed = 12345;
    int threads = 1;
    std::uint64_t max_points = 400000000ull;
    std::string cache_dir;
    std::string format = "json";  // json | csv | text
};

struct ResultRow {
    std::string name;
    double value = 0;
    double error_estimate = 0;
    std::string method;
    std::string claim;  // the mathematical statement the number instantiates
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

// One run's output. The JSON rendering is canonical: key order fixed,
// timings omitted, so identical configurations reproduce identical bytes.
// Timings appear in the text and csv renderings only.
struct Report {
    std::string command;
    nlohmann::ordered_json config;
    std::string config_hash;
    std::vector<ResultRow> results;
    std::vector<Verdict> verdicts;
    nlohmann::ordered_json extra;  // command-specific payload
    std::vector<std::pair<std::string, double>> timings_s;
    std::string cached_bytes;  // verbatim replay of a cached json rendering

    bool any_fail() const;
    std::string to_json() const;
    std::string to_text() const;
    std::string to_csv() const;  // count reports only
};

std::uint64_t fnv1a64(const std::string& s);

Report run_analyze(const std::string& poly, const CliOptions& opt);
// mode: elliptic | direct | ladder | mc
Report run_constant(const std::string& poly, const std::string& mode,
                    std::uint64_t samples, const CliOptions& opt);
Report run_count(const std::string& fname, const std::string& poly,
                 std::optional<double> t, const std::vector<double>& grid,
                 const CliOptions& opt);
Report run_euler(const std::string& fname, int n, const CliOptions& opt);
Report run_zeta(const std::string& fname, const std::string& poly,
                std::optional<double> s, std::optional<double> pole_at,
                const CliOptions& opt);
// suite: mellin | mahler | euler | counts | all
Report run_verify(const std::string& suite, const CliOptions& opt);

// Renders per `opt.format`, consulting/filling the result cache when a cache
// directory is configured and the format is json. Returns the process exit
// code: 0 clean, 1 when any verdict failed.
int emit(const Report& rep, const CliOptions& opt, std::ostream& out);

}  // namespace mzl
