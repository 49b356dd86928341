#pragma once

#include <atomic>
#include <memory>
#include <vector>

#include "kronbound/sigma.hpp"

namespace kronbound {

enum class ComposeMethod { main_theorem, nested_closed_form, l_shaped, l_shaped_reduced };

const char* to_string(ComposeMethod m);

struct OperandMeta {
    SigmaFn fn;
    double n;  // domain hint, may be +inf
    double d;  // fn.pseudoinverse(1)
    double r;  // fn(n) when n is finite, +inf otherwise
};

/// A composed rank-expansion lower bound for a Kronecker product, carrying
/// the operands' metadata and how it was formed. The result function is
/// memoized per evaluation point; the memo behaves as if absent.
struct ComposedBound {
    SigmaFn result;
    ComposeMethod method;
    std::vector<OperandMeta> inputs;
    /// Set once any evaluation's minimizer leaves an operand's [d, n] range
    /// (main theorem only; the L-shaped path never extrapolates).
    std::shared_ptr<const std::atomic<bool>> extrapolated;

    double operator()(double k) const { return result.eval(k); }
};

/// min over k_a >= d_a, k_b >= d_b, k_a*k_b >= k of sa(k_a)*sb(k_b);
/// 1 for k <= d_a*d_b. Operands must be concave with value 0 at 0.
ComposedBound compose_main(const SigmaFn& sa, const SigmaFn& sb);

/// p-operand composition for concave, log-log-concave operands:
/// min_j sigma_j(k / prod_{i != j} d_i), with monomial and logarithmic
/// closed forms when every operand has that kind.
ComposedBound compose_nested(const std::vector<SigmaFn>& operands);

/// Extrapolation-free composition using the operands' finite domain hints:
/// the capped rectangle bound R_C, the L-shaped bound L_C where it binds,
/// and the reductions their shape flags allow.
ComposedBound compose_lshaped(const SigmaFn& sa, const SigmaFn& sb);

}  // namespace kronbound
