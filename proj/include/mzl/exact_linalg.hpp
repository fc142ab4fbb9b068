#pragma once
#include <optional>

#include "mzl/rational.hpp"

namespace mzl {

using RatMat = std::vector<RatVec>;

int rank_of(RatMat A);

// A square, exact solve; nullopt when A is singular.
std::optional<RatVec> solve_square(RatMat A, RatVec b);

// maximize c.x subject to A x = b, x >= 0. Two-phase dense simplex with
// Bland's rule; exact arithmetic, so no tolerance knobs and no cycling.
struct LPResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Rat objective = 0;
    RatVec x;  // primal solution when Optimal
};

LPResult simplex_solve(const RatMat& A, const RatVec& b, const RatVec& c);

}  // namespace mzl
