#pragma once

#include <map>
#include <optional>
#include <string>

#include "kronbound/sigma.hpp"

namespace kronbound {

/// Rank-expansion lower bounds for the three encoding matrices; an absent
/// operand means that argument never binds the expansion bound.
struct ExpansionBound {
    std::optional<SigmaFn> sigma_a, sigma_b, sigma_c;
};

struct ProblemShape {
    double rank;  // R of the bilinear algorithm
    double m_a, m_b, m_c;
};

enum class EmaxMode { diagonal, simplex };

/// Largest value of min_X sigma_X^+(r_X). Diagonal mode evaluates at
/// r_A = r_B = r_C = mem; simplex mode maximizes over
/// r_A + r_B + r_C = 3*mem by bisection on the common target.
double emax(const ExpansionBound& eb, double mem, EmaxMode mode);

enum class CommMode { sequential, parallel };

struct CommBoundReport {
    CommMode mode;
    double value = 0.0;
    std::map<std::string, double> intermediates;
    bool clamped = false;  // parallel only: some r_X clamped at 0
};

/// max{2*R*M / emax(M), m_a + m_b + m_c}.
CommBoundReport sequential_bound(const ExpansionBound& eb, const ProblemShape& shape, double mem,
                                 EmaxMode mode);

/// Minimal feasible r_A + r_B + r_C for storage-balanced execution on P
/// processors: sum over present operands of max(0, sigma_X(R/P) - m_X/P).
CommBoundReport parallel_bound(const ExpansionBound& eb, const ProblemShape& shape, double procs);

}  // namespace kronbound
