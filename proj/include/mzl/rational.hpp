#pragma once
#include <gmpxx.h>

#include <string>
#include <vector>

namespace mzl {

// Exact rational scalar. All convex-geometric computations run on these;
// doubles appear only in quadrature / Monte Carlo layers.
using Rat = mpq_class;
using RatVec = std::vector<Rat>;

// Accepts "p", "-p", "p/q" and decimal literals like "1.5" (converted exactly).
Rat rat_from_string(const std::string& s);

// Canonical form: "p" when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

inline double to_double(const Rat& r) { return r.get_d(); }

bool is_integer(const Rat& r);

// Floor of a rational, exact.
long floor_long(const Rat& r);

Rat dot(const RatVec& a, const RatVec& b);

// Sum of entries; equals the l1 norm for the nonnegative vectors used here.
Rat sum(const RatVec& a);

std::string vec_to_string(const RatVec& v);

}  // namespace mzl
