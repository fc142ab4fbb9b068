// mzl: Newton polyhedra, volume constants, Euler products, and lattice
// counts for weighted zeta functions Z(f;P;s). Subcommands mirror the
// library entry points; see README.md for examples.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mzl/cli.hpp"
#include "mzl/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"invariants and counting asymptotics of weighted zeta "
                 "functions Z(f;P;s)"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    mzl::CliOptions opt;
    app.add_option("--tol", opt.tol, "relative accuracy target")
        ->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads")
        ->check(CLI::Range(1, 256))
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "Monte Carlo seed")
        ->capture_default_str();
    app.add_option("--max-points", opt.max_points,
                   "enumeration budget per count")
        ->capture_default_str();
    app.add_option("--cache-dir", opt.cache_dir,
                   "directory for prime tables and result replay")
        ->envname("MZL_CACHE_DIR");
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "text", "csv"}))
        ->capture_default_str();

    std::string poly, fname = "unit", zf, mode = "elliptic", suite = "all";
    std::uint64_t samples = 1000000;
    int n = 1;
    double t_val = 0, s_val = 0, pole_at = 0;
    std::vector<double> grid;

    auto* analyze = app.add_subcommand(
        "analyze", "Newton polyhedron at infinity, sigma0, rho0");
    analyze->add_option("P,--P", poly, "polynomial, e.g. \"x1^2 + 3x1x2\"")
        ->required();

    auto* constant = app.add_subcommand(
        "constant", "leading volume constant A0 of Y(P;s)");
    constant->add_option("P,--P", poly)->required();
    constant->add_option("--mode", mode, "elliptic | direct | ladder | mc")
        ->check(CLI::IsMember({"elliptic", "direct", "ladder", "mc"}))
        ->capture_default_str();
    constant->add_option("--samples", samples, "Monte Carlo sample count")
        ->capture_default_str();

    auto* count = app.add_subcommand(
        "count", "exact N(f;P;t) and its predicted asymptotic");
    count->add_option("--f", fname, "weight: unit, mangoldt, logprime, "
                      "B<k>, D<k>")
        ->capture_default_str();
    count->add_option("--P", poly)->required();
    auto* t_opt = count->add_option("--t", t_val, "single threshold");
    count->add_option("--grid", grid, "comma-separated thresholds")
        ->delimiter(',')
        ->excludes(t_opt);

    int kfree = 0;
    auto* euler = app.add_subcommand(
        "euler", "regularized Euler product at the first-meet point");
    auto* ef = euler->add_option("--f", fname, "weight name");
    euler->add_option("--Dk", kfree, "k-free-product weight D<k>")
        ->excludes(ef);
    euler->add_option("--Bk", kfree, "componentwise k-free weight B<k>")
        ->excludes(ef);
    euler->add_option("--n", n, "arity")->check(CLI::Range(1, 8))
        ->capture_default_str();

    auto* zeta = app.add_subcommand(
        "zeta", "evaluate Z(f;P;s) or Y(P;s), or fit a pole");
    zeta->add_option("--P", poly)->required();
    zeta->add_option("--f", zf, "weight; omit for the integral Y");
    auto* s_opt = zeta->add_option("--s", s_val, "evaluation point");
    zeta->add_option("--pole-at", pole_at, "fit order and leading "
                     "coefficient at this abscissa")
        ->excludes(s_opt);

    auto* verify = app.add_subcommand(
        "verify", "self-check suites: mellin, mahler, euler, counts, all");
    verify->add_option("suite", suite)->capture_default_str();
    auto* verify_mellin =
        app.add_subcommand("verify-mellin", "shorthand for: verify mellin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        mzl::Report rep;
        if (*analyze) {
            rep = mzl::run_analyze(poly, opt);
        } else if (*constant) {
            rep = mzl::run_constant(poly, mode, samples, opt);
        } else if (*count) {
            std::optional<double> t;
            if (t_opt->count()) t = t_val;
            rep = mzl::run_count(fname, poly, t, grid, opt);
        } else if (*euler) {
            if (euler->count("--Dk")) fname = "D" + std::to_string(kfree);
            if (euler->count("--Bk")) fname = "B" + std::to_string(kfree);
            rep = mzl::run_euler(fname, n, opt);
        } else if (*zeta) {
            std::optional<double> s, a;
            if (s_opt->count()) s = s_val;
            if (zeta->count("--pole-at")) a = pole_at;
            rep = mzl::run_zeta(zf, poly, s, a, opt);
        } else if (*verify_mellin) {
            rep = mzl::run_verify("mellin", opt);
        } else {
            rep = mzl::run_verify(suite, opt);
        }
        return mzl::emit(rep, opt, std::cout);
    } catch (const mzl::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const mzl::ConvergenceError& e) {
        std::cerr << "did not converge: " << e.what() << "\n";
        return 1;
    } catch (const mzl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
