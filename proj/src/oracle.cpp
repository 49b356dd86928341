#include "kronbound/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <random>
#include <string>
#include <thread>

namespace kronbound {

BudgetExceeded::BudgetExceeded(int k_reached, long long budget)
    : std::runtime_error("oracle budget of " + std::to_string(budget) +
                         " search nodes exceeded; exact values established up to k = " +
                         std::to_string(k_reached)),
      k_reached_(k_reached) {}

namespace {

constexpr uint64_t kPrime1 = 2305843009213693951ULL;  // 2^61 - 1
constexpr uint64_t kPrime2 = 9223372036854775783ULL;  // 2^63 - 25

struct ModField {
    uint64_t p;
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p || s < a ? s - p : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (p - b); }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % p);
    }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const { return pow(a, p - 2); }
};

uint64_t mpz_mod_u64(const mpz_class& z, uint64_t p) {
    mpz_class pz;
    pz = static_cast<unsigned long>(p);  // 64-bit unsigned long on this platform
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t());
    return static_cast<uint64_t>(mpz_get_ui(r.get_mpz_t()));  // fits: r < p < 2^63
}

struct ModColumns {
    ModField F;
    int dim = 0;
    std::vector<std::vector<uint64_t>> col;

    static std::optional<ModColumns> convert(const RationalMatrix& m, uint64_t p) {
        ModColumns out;
        out.F = ModField{p};
        out.dim = m.rows();
        out.col.assign(m.cols(), std::vector<uint64_t>(m.rows()));
        for (int j = 0; j < m.cols(); ++j)
            for (int i = 0; i < m.rows(); ++i) {
                const Rational& q = m.at(i, j);
                uint64_t den = mpz_mod_u64(q.denominator(), p);
                if (den == 0) return std::nullopt;
                uint64_t num = mpz_mod_u64(q.numerator(), p);
                out.col[j][i] = out.F.mul(num, out.F.inv(den));
            }
        return out;
    }
};

// Incremental elimination over Z_p with undo. Stored rows are reduced against
// all earlier rows; that is enough for exact span membership.
class ModElim {
public:
    ModElim(const ModColumns* cols) : cols_(cols) {}

    int rank() const { return static_cast<int>(rows_.size()); }

    bool try_add(int c) {
        const ModField& F = cols_->F;
        std::vector<uint64_t> v = cols_->col[c];
        for (size_t r = 0; r < rows_.size(); ++r) {
            uint64_t x = v[piv_[r]];
            if (x == 0) continue;
            const auto& row = rows_[r];
            for (int i = piv_[r]; i < cols_->dim; ++i)
                if (row[i]) v[i] = F.sub(v[i], F.mul(x, row[i]));
        }
        int p = -1;
        for (int i = 0; i < cols_->dim; ++i)
            if (v[i]) { p = i; break; }
        if (p < 0) return false;
        uint64_t s = F.inv(v[p]);
        for (int i = p; i < cols_->dim; ++i) v[i] = F.mul(v[i], s);
        rows_.push_back(std::move(v));
        piv_.push_back(p);
        return true;
    }

    void undo() {
        rows_.pop_back();
        piv_.pop_back();
    }

private:
    const ModColumns* cols_;
    std::vector<std::vector<uint64_t>> rows_;
    std::vector<int> piv_;
};

struct RatColumns {
    int dim = 0;
    std::vector<std::vector<Rational>> col;

    static RatColumns convert(const RationalMatrix& m) {
        RatColumns out;
        out.dim = m.rows();
        out.col.reserve(m.cols());
        for (int j = 0; j < m.cols(); ++j) out.col.push_back(m.column(j));
        return out;
    }
};

class RatElim {
public:
    RatElim(const RatColumns* cols) : cols_(cols) {}

    int rank() const { return static_cast<int>(rows_.size()); }

    bool try_add(int c) {
        std::vector<Rational> v = cols_->col[c];
        for (size_t r = 0; r < rows_.size(); ++r) {
            const Rational& x = v[piv_[r]];
            if (x.is_zero()) continue;
            Rational f = x;  // rows normalized to pivot 1
            const auto& row = rows_[r];
            for (int i = piv_[r]; i < cols_->dim; ++i)
                if (!row[i].is_zero()) v[i] -= f * row[i];
        }
        int p = -1;
        for (int i = 0; i < cols_->dim; ++i)
            if (!v[i].is_zero()) { p = i; break; }
        if (p < 0) return false;
        Rational s = v[p];
        for (int i = p; i < cols_->dim; ++i) v[i] /= s;
        rows_.push_back(std::move(v));
        piv_.push_back(p);
        return true;
    }

    void undo() {
        rows_.pop_back();
        piv_.pop_back();
    }

private:
    const RatColumns* cols_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<int> piv_;
};

struct Budget {
    std::atomic<long long> left;
    long long total;
    int k_done = 0;

    explicit Budget(long long b) : left(b), total(b) {}
    void charge() {
        if (left.fetch_sub(1, std::memory_order_relaxed) <= 0)
            throw BudgetExceeded(k_done, total);
    }
};

struct QueryShared {
    std::atomic<int> best;
    std::mutex mu;
    std::vector<int> witness;  // 0-based columns achieving best

    void offer(int r, const std::vector<int>& subset) {
        int cur = best.load(std::memory_order_relaxed);
        while (r < cur && !best.compare_exchange_weak(cur, r)) {
        }
        if (r <= best.load()) {
            std::lock_guard<std::mutex> lk(mu);
            if (r <= best.load()) witness = subset;
        }
    }
};

// Minimum rank over k-subsets, branch and bound in lexicographic order.
template <class Elim, class Cols>
class MinRankQuery {
public:
    MinRankQuery(const Cols& cols, int n, int k, Budget& budget, QueryShared& shared,
                 int lower_bound)
        : cols_(cols), n_(n), k_(k), budget_(budget), shared_(shared), lower_(lower_bound) {}

    void run_slice(int stride, int offset) {
        Elim elim(&cols_);
        std::vector<int> cur;
        cur.reserve(k_);
        for (int c = offset; c <= n_ - k_; c += stride) {
            if (shared_.best.load(std::memory_order_relaxed) <= lower_) return;
            step(elim, cur, c);
        }
    }

    void evaluate_subset(const std::vector<int>& subset) {
        if (static_cast<int>(subset.size()) != k_) return;
        Elim elim(&cols_);
        for (int c : subset) {
            budget_.charge();
            elim.try_add(c);
        }
        shared_.offer(elim.rank(), subset);
    }

private:
    void step(Elim& elim, std::vector<int>& cur, int c) {
        budget_.charge();
        bool added = elim.try_add(c);
        int r = elim.rank();
        cur.push_back(c);
        int s = static_cast<int>(cur.size());
        if (s == k_) {
            shared_.offer(r, cur);
        } else if (r < shared_.best.load(std::memory_order_relaxed)) {
            // Children need k_ - s more columns from indices > c.
            for (int nc = c + 1; nc <= n_ - (k_ - s); ++nc) {
                if (shared_.best.load(std::memory_order_relaxed) <= lower_) break;
                step(elim, cur, nc);
            }
        }
        cur.pop_back();
        if (added) elim.undo();
    }

    const Cols& cols_;
    int n_, k_;
    Budget& budget_;
    QueryShared& shared_;
    int lower_;
};

// Deterministic greedy completions used as upper-bound seeds: per-column
// starts plus fixed-seed randomized tie-breaking restarts.
template <class Elim, class Cols>
std::vector<std::vector<int>> greedy_seeds(const Cols& cols, int n, int k_max, Budget& budget) {
    std::vector<std::vector<int>> out;
    std::mt19937 rng(12345);
    const int randomized_restarts = 48;
    for (int run = 0; run < n + randomized_restarts; ++run) {
        bool randomized = run >= n;
        Elim elim(&cols);
        std::vector<int> cur;
        std::vector<char> used(n, 0);
        int start = randomized ? static_cast<int>(rng() % n) : run;
        budget.charge();
        elim.try_add(start);
        used[start] = 1;
        cur.push_back(start);
        while (static_cast<int>(cur.size()) < k_max) {
            int best_delta = 2, pick = -1;
            int ties = 0;
            for (int c = 0; c < n; ++c) {
                if (used[c]) continue;
                budget.charge();
                bool added = elim.try_add(c);
                int delta = added ? 1 : 0;
                if (added) elim.undo();
                if (delta < best_delta) {
                    best_delta = delta;
                    pick = c;
                    ties = 1;
                } else if (delta == best_delta && randomized) {
                    ++ties;
                    if (rng() % ties == 0) pick = c;
                }
            }
            if (pick < 0) break;
            budget.charge();
            elim.try_add(pick);
            used[pick] = 1;
            cur.push_back(pick);
        }
        out.push_back(cur);
    }
    return out;
}

template <class Elim, class Cols>
int min_rank_k(const Cols& cols, int n, int dim, int k, Budget& budget,
               const OracleOptions& opts, int lower_bound,
               const std::vector<std::vector<int>>& seeds, std::vector<int>* witness_out) {
    QueryShared shared;
    shared.best.store(std::min(dim, k) + 1);

    MinRankQuery<Elim, Cols> query(cols, n, k, budget, shared, lower_bound);
    // Prefixes of seed subsets give completions for every k.
    for (const auto& seed : seeds)
        if (static_cast<int>(seed.size()) >= k)
            query.evaluate_subset(std::vector<int>(seed.begin(), seed.begin() + k));
    for (const auto& seed : opts.seed_subsets) {
        std::vector<int> s;
        for (int ix : seed) {
            if (ix < 1 || ix > n) throw std::invalid_argument("oracle: seed index out of range");
            s.push_back(ix - 1);
        }
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (static_cast<int>(s.size()) >= k)
            query.evaluate_subset(std::vector<int>(s.begin(), s.begin() + k));
    }

    int workers = std::max(1, opts.workers);
    if (workers == 1) {
        query.run_slice(1, 0);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errs(workers);
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    query.run_slice(workers, w);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        for (auto& t : threads) t.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    if (witness_out) {
        std::lock_guard<std::mutex> lk(shared.mu);
        *witness_out = shared.witness;
    }
    return shared.best.load();
}

int exact_rank_of_subset(const RationalMatrix& m, const std::vector<int>& subset0) {
    std::vector<int> ix;
    ix.reserve(subset0.size());
    for (int c : subset0) ix.push_back(c + 1);
    std::sort(ix.begin(), ix.end());
    return rank(select_columns(m, ColumnSelection::of(m.cols(), ix)));
}

// One full table pass over a fixed arithmetic backend. Returns values and
// witnesses; `verified` is false when a mod-p minimum disagrees with the
// exact rank of its witness, in which case the caller escalates.
template <class Elim, class Cols>
bool table_pass(const RationalMatrix& m, const Cols& cols, int k_max, Budget& budget,
                const OracleOptions& opts, bool exact_backend, std::vector<int>& values) {
    const int n = m.cols();
    const int dim = m.rows();
    auto seeds = greedy_seeds<Elim, Cols>(cols, n, k_max, budget);
    values.assign(k_max, 0);
    int prev = 0;
    for (int k = 1; k <= k_max; ++k) {
        std::vector<int> witness;
        int v = min_rank_k<Elim, Cols>(cols, n, dim, k, budget, opts, prev, seeds, &witness);
        if (!exact_backend && exact_rank_of_subset(m, witness) != v) return false;
        values[k - 1] = v;
        prev = v;
        budget.k_done = k;
    }
    return true;
}

void check_table_invariants(const RationalMatrix& m, const RankExpansionTable& t) {
    int prev = 0;
    for (int k = 1; k <= t.k_max(); ++k) {
        int v = t.at(k);
        if (v < prev || v > prev + 1)
            throw std::logic_error("rank expansion table violates unit-step invariants");
        prev = v;
    }
    if (t.k_max() == m.cols() && t.at(t.k_max()) != rank(m))
        throw std::logic_error("rank expansion at n does not equal the matrix rank");
}

}  // namespace

RankExpansionTable rank_expansion_exhaustive(const RationalMatrix& m, int k_max,
                                             const OracleOptions& opts) {
    if (k_max < 1 || k_max > m.cols())
        throw std::invalid_argument("rank_expansion_exhaustive: k_max out of [1, cols]");
    Budget budget(opts.budget);
    RankExpansionTable table;
    table.n = m.cols();

    for (uint64_t p : {kPrime1, kPrime2}) {
        auto cols = ModColumns::convert(m, p);
        if (!cols) continue;
        if (table_pass<ModElim, ModColumns>(m, *cols, k_max, budget, opts, false, table.values)) {
            check_table_invariants(m, table);
            return table;
        }
    }
    // Fully exact fallback; reachable only if both primes fail to certify.
    auto rat = RatColumns::convert(m);
    table_pass<RatElim, RatColumns>(m, rat, k_max, budget, opts, true, table.values);
    check_table_invariants(m, table);
    return table;
}

int rank_expansion_at(const RationalMatrix& m, int k, const OracleOptions& opts) {
    if (k < 1 || k > m.cols()) throw std::invalid_argument("rank_expansion_at: k out of range");
    Budget budget(opts.budget);
    for (uint64_t p : {kPrime1, kPrime2}) {
        auto cols = ModColumns::convert(m, p);
        if (!cols) continue;
        auto seeds = greedy_seeds<ModElim, ModColumns>(*cols, m.cols(), k, budget);
        std::vector<int> witness;
        int v = min_rank_k<ModElim, ModColumns>(*cols, m.cols(), m.rows(), k, budget, opts, 0,
                                                seeds, &witness);
        if (exact_rank_of_subset(m, witness) == v) return v;
    }
    auto rat = RatColumns::convert(m);
    auto seeds = greedy_seeds<RatElim, RatColumns>(rat, m.cols(), k, budget);
    std::vector<int> witness;
    return min_rank_k<RatElim, RatColumns>(rat, m.cols(), m.rows(), k, budget, opts, 0, seeds,
                                           &witness);
}

namespace {

// Smallest size of a linearly dependent column subset (spark), found by DFS
// over independent prefixes. Mod-p independence is proof; mod-p dependence is
// re-checked exactly and escalates the whole query if it was an artifact.
class PrimeArtifact : public std::exception {};

template <class Elim, class Cols>
void spark_dfs(const RationalMatrix& m, const Cols& cols, Elim& elim, std::vector<int>& cur,
               int next, int& best_spark, Budget& budget, bool exact_backend) {
    const int n = m.cols();
    for (int c = next; c < n; ++c) {
        if (static_cast<int>(cur.size()) + 1 >= best_spark) return;
        budget.charge();
        bool added = elim.try_add(c);
        cur.push_back(c);
        if (!added) {
            if (exact_backend || exact_rank_of_subset(m, cur) < static_cast<int>(cur.size()))
                best_spark = static_cast<int>(cur.size());
            else
                throw PrimeArtifact{};
        } else {
            spark_dfs(m, cols, elim, cur, c + 1, best_spark, budget, exact_backend);
            elim.undo();
        }
        cur.pop_back();
    }
}

template <class Elim, class Cols>
int spark_search(const RationalMatrix& m, const Cols& cols, int upper, Budget& budget,
                 bool exact_backend) {
    Elim elim(&cols);
    std::vector<int> cur;
    int best = upper;
    spark_dfs<Elim, Cols>(m, cols, elim, cur, 0, best, budget, exact_backend);
    return best;
}

}  // namespace

int kruskal_rank(const RationalMatrix& m, const OracleOptions& opts) {
    Budget budget(opts.budget);
    const int r = rank(m);
    const int spark_upper = r + 1;  // any (r+1)-subset is dependent
    for (uint64_t p : {kPrime1, kPrime2}) {
        auto cols = ModColumns::convert(m, p);
        if (!cols) continue;
        try {
            return spark_search<ModElim, ModColumns>(m, *cols, spark_upper, budget, false) - 1;
        } catch (const PrimeArtifact&) {
            continue;
        }
    }
    auto rat = RatColumns::convert(m);
    return spark_search<RatElim, RatColumns>(m, rat, spark_upper, budget, true) - 1;
}

Certificate certify_lower_bound(const SigmaFn& f, const RationalMatrix& m,
                                const OracleOptions& opts) {
    RankExpansionTable t = rank_expansion_exhaustive(m, m.cols(), opts);
    Certificate cert;
    cert.valid = true;
    for (int k = 1; k <= t.k_max(); ++k) {
        double fv = f.eval(static_cast<double>(k));
        if (!leq_slack(fv, static_cast<double>(t.at(k)))) {
            cert.valid = false;
            cert.first_violation = Certificate::Violation{k, t.at(k), fv};
            break;
        }
    }
    return cert;
}

}  // namespace kronbound
