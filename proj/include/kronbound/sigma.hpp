#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kronbound {

inline constexpr double kUnboundedDomain = std::numeric_limits<double>::infinity();

/// Relative slack applied to every threshold comparison on the float side.
inline constexpr double kCompareSlack = 1e-9;

inline bool leq_slack(double a, double b) {
    return a <= b + kCompareSlack * std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
}

enum class SegmentForm { affine, power, exponential, logarithmic };

/// One closed-form piece, valid up to x = end (the last piece extends to +inf).
///   affine:      c0 + c1*x
///   power:       c0 + c1*x^c2
///   exponential: c0 + c1*exp(c2*x)
///   logarithmic: c0 + c1*ln(c2*x + c3)
struct Segment {
    double end;
    SegmentForm form;
    std::vector<double> coeffs;
};

struct ShapeFlags {
    bool concave = false;
    bool log_log_concave = false;
    /// Whether r - f(n - x) is log-log convex on (0, n), with n the domain
    /// hint and r = f(n).
    bool boundary_log_log_convex = false;
};

/// Continuous nondecreasing function family used as rank-expansion lower
/// bounds (and, by the stair machinery, as their inverses). Immutable.
class SigmaFn {
public:
    static SigmaFn monomial(double a, double q, double k0,
                            double domain_hint = kUnboundedDomain);
    static SigmaFn logarithmic(double a, double b, double domain_hint = kUnboundedDomain);
    static SigmaFn clamped_linear(double r, double domain_hint = kUnboundedDomain);
    static SigmaFn identity(double domain_hint = kUnboundedDomain);
    static SigmaFn piecewise(std::vector<Segment> segments,
                             double domain_hint = kUnboundedDomain);
    static SigmaFn piecewise_min(std::vector<SigmaFn> operands,
                                 double domain_hint = kUnboundedDomain);
    /// x -> base(x / input_scale), input_scale > 0.
    static SigmaFn scaled(SigmaFn base, double input_scale);
    /// Numeric-minimization-backed function. `declared` flags are reported by
    /// shape() as-is; monotonicity/continuity are still sample-validated.
    static SigmaFn custom(std::string label, std::function<double(double)> eval,
                          double domain_hint, ShapeFlags declared);

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// sup{k : eval(k) <= y}; +inf when the function stays <= y.
    /// Closed form for monomial/logarithmic/clamped kinds, monotone bisection
    /// to |err| <= 1e-12 * max(1, result) otherwise.
    double pseudoinverse(double y) const;

    /// Largest integer m <= cap with eval(m) <= y, by integer bisection on
    /// exact evaluations (never by flooring a float).
    long long floor_pseudoinverse_int(double y, long long cap) const;

    ShapeFlags shape() const;
    double domain_hint() const { return domain_hint_; }
    /// d = pseudoinverse(1).
    double threshold() const { return pseudoinverse(1.0); }

    /// Closed-form functional inverse where the kind permits (monomial,
    /// logarithmic, affine-only piecewise); throws std::domain_error otherwise.
    SigmaFn inverse_fn() const;

    std::string describe() const;

    struct Monomial {
        double a, q, k0;
    };
    struct Logarithmic {
        double a, b;
    };
    struct ClampedLinear {
        double r;
    };
    struct Piecewise {
        std::vector<Segment> segments;
    };
    struct Min {
        std::vector<SigmaFn> operands;
    };
    struct Scaled {
        std::shared_ptr<const SigmaFn> base;
        double input_scale;
    };
    struct Custom {
        std::string label;
        std::function<double(double)> eval;
        ShapeFlags declared;
    };

    const Monomial* as_monomial() const { return std::get_if<Monomial>(&kind_); }
    const Logarithmic* as_logarithmic() const { return std::get_if<Logarithmic>(&kind_); }
    const ClampedLinear* as_clamped() const { return std::get_if<ClampedLinear>(&kind_); }
    const Piecewise* as_piecewise() const { return std::get_if<Piecewise>(&kind_); }
    const Min* as_min() const { return std::get_if<Min>(&kind_); }

private:
    using Kind =
        std::variant<Monomial, Logarithmic, ClampedLinear, Piecewise, Min, Scaled, Custom>;

    SigmaFn(Kind k, double domain_hint);
    void validate_samples() const;

    Kind kind_;
    double domain_hint_;
};

double segment_eval(const Segment& s, double x);

}  // namespace kronbound
