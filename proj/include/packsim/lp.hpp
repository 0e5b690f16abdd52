#pragma once

#include <vector>

#include "packsim/rational.hpp"

namespace packsim {

enum class LpSense { le, eq };

enum class LpStatus { optimal, infeasible, unbounded };

/// maximize c.x subject to A x (<= | ==) b, x >= 0
struct LpProblem {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    std::vector<LpSense> senses;
    std::vector<Rational> c;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value = 0;
    std::vector<Rational> x;
};

/// Dense two-phase simplex in exact rational arithmetic. Bland's rule, so it
/// terminates; meant for the desk-scale problems this toolkit produces
/// (tens of rows, a few hundred columns).
LpSolution solve_lp_max(const LpProblem& problem);

}  // namespace packsim
