#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mzl/rational.hpp"

namespace mzl {

// Primes up to bound, optionally persisted to <cache_dir>/primes.bin.
// A cached file with a bound at least as large is reused.
std::vector<std::uint32_t> primes_upto(std::uint64_t bound,
                                       const std::string& cache_dir = "");

// Streaming segmented sieve; never materializes the prime list.
void for_each_prime(std::uint64_t bound,
                    const std::function<void(std::uint64_t)>& fn);

enum class FnKind {
    Unit,
    ComponentwiseKfree,   // every m_i is k-free
    ProductKfree,         // m_1...m_n is k-free
    MangoldtProduct,      // prod_i Lambda(m_i)
    LogprimeProduct,      // prod_i [m_i prime] log m_i
    UniformMultiplicative // prime-independent local table
};

// Weight functions on N^n. Multiplicative kinds are determined by the local
// table nu -> f(p^nu); entries absent from the table (other than nu = 0,
// which is implicitly 1) have value 0.
struct ArithmeticFunction {
    FnKind kind = FnKind::Unit;
    int n = 1;
    int k = 0;  // k-free kinds only
    std::map<std::vector<long>, double> table;  // uniform kinds, nu != 0
    std::string name = "unit";

    bool multiplicative() const;
    bool integer_valued() const;
    bool has_local_table() const;  // finite table (incl. materialized k-free)
    // f(p^nu) for any prime p; requires has_local_table or Unit
    double local(const std::vector<long>& nu) const;
    // reference evaluator via trial-division factorization
    double eval(const std::vector<std::uint64_t>& m) const;
};

ArithmeticFunction builtin(FnKind kind, int k, int n);
// "unit", "mangoldt", "logprime", "B<k>", "D<k>" (also "B:<k>", "D:<k>")
ArithmeticFunction builtin_named(const std::string& name, int n);
// {"n":N, "entries":[{"nu":[...], "value":v}, ...]}
ArithmeticFunction table_function_from_json(const std::string& text);

// Bulk evaluator bound to a coordinate limit. Separable kinds use sieved
// per-axis weight arrays; joint kinds factor through a smallest-prime-factor
// table. Agrees with ArithmeticFunction::eval everywhere.
class WeightOracle {
  public:
    WeightOracle(const ArithmeticFunction& f, std::uint64_t bound);
    double operator()(const std::uint64_t* m) const;
    bool always_one() const { return f_.kind == FnKind::Unit; }
    bool integer_valued() const { return f_.integer_valued(); }

  private:
    ArithmeticFunction f_;
    std::uint64_t bound_;
    std::vector<double> axis_;          // shared across axes when separable
    std::vector<std::uint32_t> spf_;    // joint kinds
};

// The diagonal data of E(f) = conv(S* + R+^n), S* = {nu != 0 : f(p^nu) != 0}:
// the smallest face meeting the diagonal (required compact), the normalized
// supporting direction c with <beta,c> = 1 on that face, the lattice points
// I on the face with their multiplicities u(beta) = f(p^beta).
struct FiniteTypeDescriptor {
    int n = 0;
    RatVec c;                          // strictly positive
    Rat iota;                          // |c|_1, first-meet exponent of f
    std::vector<std::vector<long>> I;  // face points of S*, sorted
    std::vector<int> u;                // aligned with I, all >= 1
    int U = 0;                         // sum of u
};

FiniteTypeDescriptor finite_type_descriptor(const ArithmeticFunction& f);

struct EulerProduct {
    double value = 0;
    double tail_bound = 0;   // truncation envelope, rigorous
    std::uint64_t pmax = 0;  // primes used
};

// prod_p (1 - 1/p)^U * sum_nu f(p^nu) p^{-<nu,c>}, the finite limit value of
// the regularized Dirichlet series of f at c. The expansion must cancel the
// p^{-1} coefficient exactly (U is forced to the face multiplicity sum);
// otherwise the product diverges and ConvergenceError is thrown.
EulerProduct euler_product(const ArithmeticFunction& f, const RatVec& c,
                           double tolerance,
                           std::uint64_t pmax_cap = 400000000ull);

// Leading Euler-product value H at the distinguished point c: closed forms
// for unit/zeta-like kinds, euler_product for table-backed kinds.
EulerProduct h_at_zero(const ArithmeticFunction& f, const RatVec& c,
                       double tolerance = 1e-10);

}  // namespace mzl
