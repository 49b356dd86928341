#include "kronbound/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kronbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPinvAbsTol = 1e-12;
constexpr double kShapeSlack = 1e-12;
constexpr int kShapeSamples = 10000;

double probe_range(double domain_hint) { return std::isfinite(domain_hint) ? domain_hint : 64.0; }

}  // namespace

double segment_eval(const Segment& s, double x) {
    const auto& c = s.coeffs;
    switch (s.form) {
        case SegmentForm::affine:
            return c[0] + c[1] * x;
        case SegmentForm::power:
            return c[0] + c[1] * std::pow(x, c[2]);
        case SegmentForm::exponential:
            return c[0] + c[1] * std::exp(c[2] * x);
        case SegmentForm::logarithmic:
            return c[0] + c[1] * std::log(c[2] * x + c[3]);
    }
    return 0.0;
}

SigmaFn::SigmaFn(Kind k, double domain_hint) : kind_(std::move(k)), domain_hint_(domain_hint) {
    validate_samples();
}

SigmaFn SigmaFn::monomial(double a, double q, double k0, double domain_hint) {
    if (!(a > 0) || !(q > 0) || !(k0 > 0))
        throw std::invalid_argument("monomial: need a > 0, q > 0, k0 > 0");
    return SigmaFn(Monomial{a, q, k0}, domain_hint);
}

SigmaFn SigmaFn::logarithmic(double a, double b, double domain_hint) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("logarithmic: need a > 0, b > 0");
    return SigmaFn(Logarithmic{a, b}, domain_hint);
}

SigmaFn SigmaFn::clamped_linear(double r, double domain_hint) {
    if (!(r > 0)) throw std::invalid_argument("clamped_linear: need r > 0");
    return SigmaFn(ClampedLinear{r}, domain_hint);
}

SigmaFn SigmaFn::identity(double domain_hint) { return monomial(1.0, 1.0, 1.0, domain_hint); }

SigmaFn SigmaFn::piecewise(std::vector<Segment> segments, double domain_hint) {
    if (segments.empty()) throw std::invalid_argument("piecewise: no segments");
    double prev_end = 0.0;
    for (size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        size_t need = s.form == SegmentForm::affine        ? 2
                      : s.form == SegmentForm::logarithmic ? 4
                                                           : 3;
        if (s.coeffs.size() != need)
            throw std::invalid_argument("piecewise: wrong coefficient count for segment");
        if (i + 1 < segments.size()) {
            if (!(s.end > prev_end))
                throw std::invalid_argument("piecewise: breakpoints must increase");
            double left = segment_eval(s, s.end);
            double right = segment_eval(segments[i + 1], s.end);
            if (std::abs(left - right) > 1e-9 * std::max({1.0, std::abs(left), std::abs(right)}))
                throw std::invalid_argument("piecewise: discontinuous at breakpoint");
            prev_end = s.end;
        }
    }
    return SigmaFn(Piecewise{std::move(segments)}, domain_hint);
}

SigmaFn SigmaFn::piecewise_min(std::vector<SigmaFn> operands, double domain_hint) {
    if (operands.empty()) throw std::invalid_argument("piecewise_min: no operands");
    return SigmaFn(Min{std::move(operands)}, domain_hint);
}

SigmaFn SigmaFn::scaled(SigmaFn base, double input_scale) {
    if (!(input_scale > 0)) throw std::invalid_argument("scaled: need input_scale > 0");
    double hint = base.domain_hint();
    if (std::isfinite(hint)) hint *= input_scale;
    return SigmaFn(Scaled{std::make_shared<const SigmaFn>(std::move(base)), input_scale}, hint);
}

SigmaFn SigmaFn::custom(std::string label, std::function<double(double)> eval, double domain_hint,
                        ShapeFlags declared) {
    if (!eval) throw std::invalid_argument("custom: empty evaluator");
    return SigmaFn(Custom{std::move(label), std::move(eval), declared}, domain_hint);
}

double SigmaFn::eval(double x) const {
    if (x < 0) throw std::invalid_argument("SigmaFn::eval: negative argument");
    struct V {
        double x;
        double operator()(const Monomial& m) const {
            return x == 0 ? 0.0 : m.a * std::pow(x / m.k0, m.q);
        }
        double operator()(const Logarithmic& l) const { return l.a * std::log1p(l.b * x); }
        double operator()(const ClampedLinear& c) const { return std::min(x, c.r); }
        double operator()(const Piecewise& p) const {
            for (size_t i = 0; i + 1 < p.segments.size(); ++i)
                if (x <= p.segments[i].end) return segment_eval(p.segments[i], x);
            return segment_eval(p.segments.back(), x);
        }
        double operator()(const Min& m) const {
            double best = kInf;
            for (const auto& f : m.operands) best = std::min(best, f.eval(x));
            return best;
        }
        double operator()(const Scaled& s) const { return s.base->eval(x / s.input_scale); }
        double operator()(const Custom& c) const { return c.eval(x); }
    };
    return std::visit(V{x}, kind_);
}

double SigmaFn::pseudoinverse(double y) const {
    if (y < 0) throw std::invalid_argument("pseudoinverse: negative argument");
    if (const auto* m = as_monomial()) return m->k0 * std::pow(y / m->a, 1.0 / m->q);
    if (const auto* l = as_logarithmic()) return std::expm1(y / l->a) / l->b;
    if (const auto* c = as_clamped()) return y >= c->r ? kInf : y;
    if (const auto* s = std::get_if<Scaled>(&kind_))
        return s->input_scale * s->base->pseudoinverse(y);

    if (eval(0.0) > y) return 0.0;
    double hi = 1.0;
    while (eval(hi) <= y) {
        hi *= 2.0;
        if (hi > 1e18) return kInf;  // bounded above by y
    }
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int it = 0; it < 200 && hi - lo > kPinvAbsTol * std::max(1.0, lo); ++it) {
        double mid = 0.5 * (lo + hi);
        (eval(mid) <= y ? lo : hi) = mid;
    }
    return lo;
}

long long SigmaFn::floor_pseudoinverse_int(double y, long long cap) const {
    if (cap < 0) throw std::invalid_argument("floor_pseudoinverse_int: negative cap");
    if (!leq_slack(eval(0.0), y)) return 0;
    if (leq_slack(eval(static_cast<double>(cap)), y)) return cap;
    long long lo = 0, hi = cap;  // eval(lo) <= y < eval(hi)
    while (hi - lo > 1) {
        long long mid = lo + (hi - lo) / 2;
        (leq_slack(eval(static_cast<double>(mid)), y) ? lo : hi) = mid;
    }
    return lo;
}

namespace {

// Second-difference tests on a sampled grid, rejecting violations beyond a
// 1e-12 relative slack.
bool sampled_concave(const SigmaFn& f, double hi) {
    const int n = kShapeSamples;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = f.eval(hi * (i + 1) / n);
    for (int i = 1; i + 1 < n; ++i) {
        double d2 = v[i - 1] - 2 * v[i] + v[i + 1];
        double scale = std::max({1.0, std::abs(v[i - 1]), std::abs(v[i]), std::abs(v[i + 1])});
        if (d2 > kShapeSlack * scale) return false;
    }
    return true;
}

enum class LogLogSense { concave, convex };

bool sampled_loglog(const std::function<double(double)>& f, double lo, double hi,
                    LogLogSense sense) {
    const int n = kShapeSamples;
    const double s0 = std::log(lo), s1 = std::log(hi);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        double val = f(std::exp(s0 + (s1 - s0) * i / (n - 1)));
        if (!(val > 0) || !std::isfinite(val)) return false;
        v[i] = std::log(val);
    }
    for (int i = 1; i + 1 < n; ++i) {
        double d2 = v[i - 1] - 2 * v[i] + v[i + 1];
        double scale = std::max({1.0, std::abs(v[i - 1]), std::abs(v[i]), std::abs(v[i + 1])});
        if (sense == LogLogSense::concave && d2 > kShapeSlack * scale) return false;
        if (sense == LogLogSense::convex && d2 < -kShapeSlack * scale) return false;
    }
    return true;
}

bool sampled_llc(const SigmaFn& f, double hi) {
    return sampled_loglog([&](double x) { return f.eval(x); }, hi * 1e-8, hi,
                          LogLogSense::concave);
}

bool sampled_boundary_llconvex(const SigmaFn& f, double n_hint) {
    if (!std::isfinite(n_hint)) return false;
    const double r = f.eval(n_hint);
    auto d = [&](double x) { return r - f.eval(n_hint - x); };
    return sampled_loglog(d, n_hint * 1e-8, n_hint * (1 - 1e-8), LogLogSense::convex);
}

}  // namespace

ShapeFlags SigmaFn::shape() const {
    const double hint = domain_hint_;
    struct V {
        const SigmaFn& self;
        double hint;
        ShapeFlags operator()(const Monomial& m) const {
            bool sub = m.q <= 1.0 + 1e-15;
            return ShapeFlags{sub, true, sub};
        }
        ShapeFlags operator()(const Logarithmic&) const { return ShapeFlags{true, true, true}; }
        ShapeFlags operator()(const ClampedLinear& c) const {
            bool bnd = std::isfinite(hint) && leq_slack(hint, c.r);
            return ShapeFlags{true, true, bnd};
        }
        ShapeFlags operator()(const Piecewise&) const {
            double h = probe_range(hint);
            return ShapeFlags{sampled_concave(self, h), sampled_llc(self, h),
                              sampled_boundary_llconvex(self, hint)};
        }
        ShapeFlags operator()(const Min& m) const {
            bool conc = true;  // min of concave functions is concave
            for (const auto& f : m.operands) conc = conc && f.shape().concave;
            double h = probe_range(hint);
            return ShapeFlags{conc, sampled_llc(self, h),
                              sampled_boundary_llconvex(self, hint)};
        }
        ShapeFlags operator()(const Scaled& s) const {
            // x-scaling is a shift in log space; all three flags carry over.
            return s.base->shape();
        }
        ShapeFlags operator()(const Custom& c) const { return c.declared; }
    };
    return std::visit(V{*this, hint}, kind_);
}

SigmaFn SigmaFn::inverse_fn() const {
    if (const auto* m = as_monomial()) {
        // y = a (x/k0)^q   =>   x = k0 (y/a)^{1/q}
        return monomial(m->k0, 1.0 / m->q, m->a);
    }
    if (const auto* l = as_logarithmic()) {
        // y = a ln(bx + 1)  =>  x = (e^{y/a} - 1)/b
        return piecewise({Segment{kInf, SegmentForm::exponential, {-1.0 / l->b, 1.0 / l->b, 1.0 / l->a}}});
    }
    if (const auto* s = std::get_if<Scaled>(&kind_)) {
        SigmaFn base_inv = s->base->inverse_fn();
        if (const auto* m = base_inv.as_monomial())
            return monomial(m->a * s->input_scale, m->q, m->k0);
        throw std::domain_error("inverse_fn: unsupported scaled kind");
    }
    throw std::domain_error("inverse_fn: no closed-form inverse for " + describe());
}

std::string SigmaFn::describe() const {
    std::ostringstream os;
    struct V {
        std::ostringstream& os;
        void operator()(const Monomial& m) const {
            os << "monomial(a=" << m.a << ",q=" << m.q << ",k0=" << m.k0 << ")";
        }
        void operator()(const Logarithmic& l) const {
            os << "logarithmic(a=" << l.a << ",b=" << l.b << ")";
        }
        void operator()(const ClampedLinear& c) const { os << "clamped-linear(r=" << c.r << ")"; }
        void operator()(const Piecewise& p) const {
            os << "piecewise(" << p.segments.size() << " segments)";
        }
        void operator()(const Min& m) const {
            os << "min(";
            for (size_t i = 0; i < m.operands.size(); ++i)
                os << (i ? "," : "") << m.operands[i].describe();
            os << ")";
        }
        void operator()(const Scaled& s) const {
            os << "scaled(" << s.base->describe() << ",/" << s.input_scale << ")";
        }
        void operator()(const Custom& c) const { os << c.label; }
    };
    std::visit(V{os}, kind_);
    return os.str();
}

void SigmaFn::validate_samples() const {
    const double hi = probe_range(domain_hint_);
    const int n = 512;
    double v0 = eval(0.0);
    if (!std::isfinite(v0) || v0 < -1e-12)
        throw std::invalid_argument("SigmaFn: value at 0 must be >= 0 (" + describe() + ")");
    double prev = v0;
    for (int i = 1; i <= n; ++i) {
        double v = eval(hi * i / n);
        if (!std::isfinite(v)) throw std::invalid_argument("SigmaFn: non-finite value");
        if (v < prev - kCompareSlack * std::max(1.0, std::abs(prev)))
            throw std::invalid_argument("SigmaFn: not nondecreasing (" + describe() + ")");
        prev = v;
    }
}

}  // namespace kronbound
