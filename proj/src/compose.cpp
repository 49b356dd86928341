#include "kronbound/compose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "kronbound/optimize.hpp"

namespace kronbound {

const char* to_string(ComposeMethod m) {
    switch (m) {
        case ComposeMethod::main_theorem: return "main-theorem";
        case ComposeMethod::nested_closed_form: return "nested-closed-form";
        case ComposeMethod::l_shaped: return "l-shaped";
        case ComposeMethod::l_shaped_reduced: return "l-shaped-reduced";
    }
    return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Memo {
    std::mutex mu;
    std::map<double, double> values;

    double get_or_compute(double k, const std::function<double(double)>& compute) {
        {
            std::lock_guard<std::mutex> lk(mu);
            auto it = values.find(k);
            if (it != values.end()) return it->second;
        }
        double v = compute(k);
        std::lock_guard<std::mutex> lk(mu);
        values.emplace(k, v);  // idempotent: same k always computes the same v
        return v;
    }
};

OperandMeta meta_of(const SigmaFn& f) {
    double n = f.domain_hint();
    return OperandMeta{f, n, f.pseudoinverse(1.0), std::isfinite(n) ? f.eval(n) : kInf};
}

void require_concave_zero(const SigmaFn& f, const char* who) {
    if (!f.shape().concave)
        throw std::invalid_argument(std::string(who) + ": operand is not concave: " +
                                    f.describe());
    if (std::abs(f.eval(0.0)) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": operand value at 0 is not 0: " +
                                    f.describe());
}

void require_finite_threshold(const OperandMeta& m, const char* who) {
    if (!std::isfinite(m.d) || !(m.d > 0))
        throw std::invalid_argument(std::string(who) +
                                    ": operand never reaches 1, no finite threshold: " +
                                    m.fn.describe());
}

}  // namespace

ComposedBound compose_main(const SigmaFn& sa, const SigmaFn& sb) {
    require_concave_zero(sa, "compose_main");
    require_concave_zero(sb, "compose_main");
    OperandMeta ma = meta_of(sa), mb = meta_of(sb);
    require_finite_threshold(ma, "compose_main");
    require_finite_threshold(mb, "compose_main");

    const bool boundary_only = sa.shape().log_log_concave && sb.shape().log_log_concave;
    auto memo = std::make_shared<Memo>();
    auto flag = std::make_shared<std::atomic<bool>>(false);

    auto compute = [sa, sb, ma, mb, boundary_only, flag](double k) {
        if (k <= ma.d * mb.d) return 1.0;
        const double lo = ma.d, hi = k / mb.d;
        auto h = [&](double ka) { return sa.eval(ka) * sb.eval(k / ka); };
        SweepArgmax best{lo, h(lo)};
        if (boundary_only) {
            double vh = h(hi);
            if (vh < best.value) best = SweepArgmax{hi, vh};
        } else {
            best = sweep_min(h, lo, hi, /*log_spaced=*/true);
        }
        if (best.x > ma.n * (1 + kCompareSlack) || k / best.x > mb.n * (1 + kCompareSlack))
            flag->store(true, std::memory_order_relaxed);
        return best.value;
    };
    auto eval = [memo, compute](double k) { return memo->get_or_compute(k, compute); };

    double hint = std::isfinite(ma.n) && std::isfinite(mb.n) ? ma.n * mb.n : kUnboundedDomain;
    // Concavity/log-log concavity of the min form hold when both operands are
    // log-log concave (then it coincides with the nested form); unknown else.
    ShapeFlags declared{boundary_only, boundary_only, false};
    ComposedBound out{SigmaFn::custom("compose-main(" + sa.describe() + "," + sb.describe() + ")",
                                      eval, hint, declared),
                      ComposeMethod::main_theorem,
                      {ma, mb},
                      flag};
    return out;
}

ComposedBound compose_nested(const std::vector<SigmaFn>& operands) {
    if (operands.size() < 2) throw std::invalid_argument("compose_nested: need >= 2 operands");
    std::vector<OperandMeta> metas;
    for (const auto& f : operands) {
        require_concave_zero(f, "compose_nested");
        if (!f.shape().log_log_concave)
            throw std::invalid_argument("compose_nested: operand is not log-log concave: " +
                                        f.describe());
        metas.push_back(meta_of(f));
        require_finite_threshold(metas.back(), "compose_nested");
    }
    double hint = 1.0;
    for (const auto& m : metas) hint = std::isfinite(hint * m.n) ? hint * m.n : kUnboundedDomain;

    bool all_monomial = true, all_log = true;
    for (const auto& f : operands) {
        all_monomial = all_monomial && f.as_monomial() != nullptr;
        all_log = all_log && f.as_logarithmic() != nullptr;
    }

    if (all_monomial) {
        // Normalize a (k/k0)^q to (k/K)^q with K = k0 * a^{-1/q}.
        double qmin = kInf, prodK = 1.0;
        bool scales_ok = true;
        for (const auto& f : operands) {
            const auto* m = f.as_monomial();
            double K = m->k0 * std::pow(m->a, -1.0 / m->q);
            scales_ok = scales_ok && K >= 1.0 - kCompareSlack;
            qmin = std::min(qmin, m->q);
            prodK *= K;
        }
        if (scales_ok)
            return ComposedBound{SigmaFn::monomial(1.0, qmin, prodK, hint),
                                 ComposeMethod::nested_closed_form, std::move(metas), nullptr};
    }
    if (all_log) {
        double a = kInf, prod_d = 1.0;
        for (const auto& f : operands) {
            const auto* l = f.as_logarithmic();
            a = std::min(a, l->a);
            prod_d *= std::expm1(1.0 / l->a) / l->b;
        }
        double b = std::expm1(1.0 / a) / prod_d;
        return ComposedBound{SigmaFn::logarithmic(a, b, hint),
                             ComposeMethod::nested_closed_form, std::move(metas), nullptr};
    }

    std::vector<SigmaFn> scaled;
    for (size_t j = 0; j < operands.size(); ++j) {
        double c = 1.0;
        for (size_t i = 0; i < metas.size(); ++i)
            if (i != j) c *= metas[i].d;
        scaled.push_back(c == 1.0 ? operands[j] : SigmaFn::scaled(operands[j], c));
    }
    return ComposedBound{SigmaFn::piecewise_min(std::move(scaled), hint),
                         ComposeMethod::nested_closed_form, std::move(metas), nullptr};
}

ComposedBound compose_lshaped(const SigmaFn& sa, const SigmaFn& sb) {
    require_concave_zero(sa, "compose_lshaped");
    require_concave_zero(sb, "compose_lshaped");
    OperandMeta ma = meta_of(sa), mb = meta_of(sb);
    require_finite_threshold(ma, "compose_lshaped");
    require_finite_threshold(mb, "compose_lshaped");
    if (!std::isfinite(ma.n) || !std::isfinite(mb.n))
        throw std::invalid_argument("compose_lshaped: operands need finite domain hints");

    const double max_r = std::max(ma.r, mb.r);
    const bool reduced =
        sa.shape().boundary_log_log_convex && sb.shape().boundary_log_log_convex;
    const bool boundary_only = sa.shape().log_log_concave && sb.shape().log_log_concave;

    auto memo = std::make_shared<Memo>();
    auto compute = [sa, sb, ma, mb, max_r, reduced, boundary_only](double k) {
        const double kk = std::clamp(k, 0.0, ma.n * mb.n);
        double rc;
        if (kk <= ma.d * mb.d) {
            rc = 1.0;
        } else {
            const double lo = std::max(ma.d, kk / mb.n);
            const double hi = std::min(ma.n, kk / mb.d);
            auto h = [&](double ka) { return sa.eval(ka) * sb.eval(kk / ka); };
            if (boundary_only)
                rc = std::min(h(lo), h(hi));
            else
                rc = sweep_min(h, lo, hi, /*log_spaced=*/true).value;
        }
        if (leq_slack(rc, max_r) || reduced) return rc;

        // L-shaped bound on the curve (n_a - k_a)(n_b - k_b) = n_a n_b - k.
        const double c = std::max(0.0, ma.n * mb.n - kk);
        const double xmax = ma.n - c / mb.n;
        auto hl = [&](double ka) {
            double kb = c == 0.0 ? mb.n : mb.n - c / (ma.n - ka);
            double va = sa.eval(ka), vb = sb.eval(kb);
            return mb.r * va + ma.r * vb - va * vb;
        };
        double lc = sweep_min(hl, 0.0, xmax, /*log_spaced=*/false).value;
        // Monotone envelope: below the switch point the bound already reached
        // max_r, and sigma~ is nondecreasing, so flooring there stays valid.
        return std::max(std::min(rc, lc), max_r);
    };
    auto eval = [memo, compute](double k) { return memo->get_or_compute(k, compute); };

    ComposedBound out{
        SigmaFn::custom("compose-lshaped(" + sa.describe() + "," + sb.describe() + ")", eval,
                        ma.n * mb.n, ShapeFlags{false, false, false}),
        reduced ? ComposeMethod::l_shaped_reduced : ComposeMethod::l_shaped,
        {ma, mb},
        nullptr};
    return out;
}

}  // namespace kronbound
