#include "kronbound/comm_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace kronbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<const SigmaFn*> present(const ExpansionBound& eb) {
    std::vector<const SigmaFn*> out;
    if (eb.sigma_a) out.push_back(&*eb.sigma_a);
    if (eb.sigma_b) out.push_back(&*eb.sigma_b);
    if (eb.sigma_c) out.push_back(&*eb.sigma_c);
    return out;
}

}  // namespace

double emax(const ExpansionBound& eb, double mem, EmaxMode mode) {
    if (!(mem >= 1)) throw std::invalid_argument("emax: memory size must be >= 1");
    auto ops = present(eb);
    if (ops.empty()) throw std::invalid_argument("emax: no operands present");

    if (mode == EmaxMode::diagonal) {
        double e = kInf;
        for (const auto* f : ops) e = std::min(e, f->pseudoinverse(mem));
        return e;
    }

    // The optimum equalizes the pseudoinverses: the largest t with
    // sum_X sigma_X(t) <= 3*mem is feasible and no larger t is.
    auto feasible = [&](double t) {
        double s = 0.0;
        for (const auto* f : ops) s += f->eval(t);
        return s <= 3.0 * mem;
    };
    if (!feasible(0.0)) return 0.0;
    double hi = 1.0;
    while (feasible(hi)) {
        hi *= 2.0;
        if (hi > 1e18) return kInf;
    }
    double lo = hi / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

CommBoundReport sequential_bound(const ExpansionBound& eb, const ProblemShape& shape, double mem,
                                 EmaxMode mode) {
    CommBoundReport rep;
    rep.mode = CommMode::sequential;
    const double e = emax(eb, mem, mode);
    const double io_term = 2.0 * shape.rank * mem / e;
    const double data_term = shape.m_a + shape.m_b + shape.m_c;
    rep.value = std::max(io_term, data_term);
    rep.intermediates["emax"] = e;
    rep.intermediates["reuse_term"] = io_term;
    rep.intermediates["data_term"] = data_term;
    return rep;
}

CommBoundReport parallel_bound(const ExpansionBound& eb, const ProblemShape& shape,
                               double procs) {
    if (!(procs >= 1)) throw std::invalid_argument("parallel_bound: P must be >= 1");
    CommBoundReport rep;
    rep.mode = CommMode::parallel;
    const double target = shape.rank / procs;

    struct Slot {
        const char* name;
        const std::optional<SigmaFn>* fn;
        double m;
    };
    const Slot slots[] = {{"r_a", &eb.sigma_a, shape.m_a},
                          {"r_b", &eb.sigma_b, shape.m_b},
                          {"r_c", &eb.sigma_c, shape.m_c}};
    double sum = 0.0;
    for (const auto& s : slots) {
        if (!s.fn->has_value()) continue;
        double raw = (*s.fn)->eval(target) - s.m / procs;
        double r = std::max(0.0, raw);
        rep.intermediates[s.name] = r;
        rep.intermediates[std::string(s.name) + "_raw"] = raw;
        if (raw < 0) rep.clamped = true;
        sum += r;
    }
    rep.value = sum;

    // Constraint residual: E(r_X + m_X/P) - R/P, nonnegative when feasible.
    double e_at = kInf;
    for (const auto& s : slots) {
        if (!s.fn->has_value()) continue;
        e_at = std::min(e_at, (*s.fn)->pseudoinverse(rep.intermediates[s.name] + s.m / procs));
    }
    rep.intermediates["constraint_residual"] = e_at - target;
    return rep;
}

}  // namespace kronbound
