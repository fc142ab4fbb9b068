#pragma once
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mzl/rational.hpp"

namespace mzl {

// Generalized polynomial: positive real coefficients, nonnegative rational
// exponents. Keys are exponent vectors of length n, values are coefficients.
// Polynomials loaded from text or JSON must involve every variable; derived
// objects (homogeneous parts, face restrictions) may not.
struct GenPoly {
    int n = 0;
    std::map<RatVec, double> terms;

    bool empty() const { return terms.empty(); }
    std::size_t term_count() const { return terms.size(); }
};

// Grammar: terms joined by '+'; a term is an optional coefficient times
// factors xI or xI^R, R a nonnegative rational ("3", "1/2", "1.5").
// Juxtaposition multiplies; whitespace is ignored. expect_n = 0 infers the
// variable count from the largest index.
GenPoly parse_poly(const std::string& text, int expect_n = 0);

std::string render_poly(const GenPoly& p);

nlohmann::json poly_to_json(const GenPoly& p);
GenPoly poly_from_json(const nlohmann::json& j);

// Total degree: max |gamma| over the support. Error on empty support.
Rat poly_degree(const GenPoly& p);

bool is_homogeneous(const GenPoly& p);

// Terms of top total degree.
GenPoly homogeneous_part(const GenPoly& p);

// P_d positive on the closed positive orthant minus the origin. With positive
// coefficients this holds iff every pure power x_i^d is in the support of P_d.
bool is_elliptic(const GenPoly& p);

// Support of p as a list of exponent vectors (map order, so deterministic).
std::vector<RatVec> support(const GenPoly& p);

// Evaluate at x > 0 (componentwise); x_i = 0 is allowed only when every
// exponent of variable i is an integer. Accumulates in long double.
double evaluate(const GenPoly& p, const std::vector<double>& x);

// Flat form for hot loops (lattice enumeration, Monte Carlo). When every
// exponent is a small integer, eval uses repeated multiplication and
// eval_int stays in __int128 for exact sublevel tests.
struct CompiledPoly {
    struct Term {
        double c;
        std::vector<double> e;
        std::vector<int> ei;
    };
    int n = 0;
    bool integer_exponents = false;
    bool integer_coefficients = false;
    std::vector<Term> terms;

    double eval(const double* x) const;
    // Exact value for integer points; requires integer_exponents and
    // integer_coefficients; caller guards against overflow via max_exact_arg.
    __int128 eval_int(const long* m) const;
};

CompiledPoly compile_poly(const GenPoly& p);

}  // namespace mzl
