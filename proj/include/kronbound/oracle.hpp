#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "kronbound/matrix.hpp"
#include "kronbound/sigma.hpp"

namespace kronbound {

/// Exact rank expansion values sigma~(1..k_max) of an n-column matrix.
struct RankExpansionTable {
    int n = 0;
    std::vector<int> values;  // values[k-1] = min rank over all k-column subsets

    int k_max() const { return static_cast<int>(values.size()); }
    int at(int k) const { return values.at(k - 1); }
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(int k_reached, long long budget);
    /// Largest k whose value was established before the budget ran out.
    int k_reached() const { return k_reached_; }

private:
    int k_reached_;
};

struct OracleOptions {
    /// Search-node budget: every evaluated subset extension counts.
    long long budget = 10'000'000;
    int workers = 1;
    /// Optional 1-based column subsets used as upper-bound hints. Hints only
    /// tighten pruning; results are exact with or without them.
    std::vector<std::vector<int>> seed_subsets;
};

/// Exact minimum rank over all k-column subsets, for every k <= k_max.
/// Lexicographic branch-and-bound carrying an incremental elimination state;
/// throws BudgetExceeded rather than ever returning an approximation.
RankExpansionTable rank_expansion_exhaustive(const RationalMatrix& m, int k_max,
                                             const OracleOptions& opts = {});

/// Point query: sigma~(k) alone.
int rank_expansion_at(const RationalMatrix& m, int k, const OracleOptions& opts = {});

/// Largest k such that every k-column subset has rank k.
int kruskal_rank(const RationalMatrix& m, const OracleOptions& opts = {});

struct Certificate {
    struct Violation {
        int k;
        int sigma_tilde;
        double bound_value;
    };
    bool valid = false;
    std::optional<Violation> first_violation;
};

/// Checks f(k) <= sigma~(k) for all k in [cols(m)], with the usual relative
/// slack on the float side. Budget errors propagate.
Certificate certify_lower_bound(const SigmaFn& f, const RationalMatrix& m,
                                const OracleOptions& opts = {});

}  // namespace kronbound
