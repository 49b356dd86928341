#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kronbound/matrix.hpp"
#include "kronbound/sigma.hpp"

namespace kronbound {

/// Encoding/decoding triple (a, b, c) with a shared column count R; computes
/// z = c * ((a^T x) .* (b^T y)). Each matrix is full rank (checked).
struct BilinearAlgorithm {
    RationalMatrix a, b, c;
    std::string name;

    int rank_count() const { return a.cols(); }
};

BilinearAlgorithm make_bilinear(RationalMatrix a, RationalMatrix b, RationalMatrix c,
                                std::string name);

/// The exact 4x7 fast 2x2 matrix-multiplication triple.
BilinearAlgorithm strassen();

/// Toom-k convolution: a = b = transpose of the (2k-1) x k Vandermonde on the
/// given nodes (default 0, 1, -1, 2, -2, ...), c = exact inverse of the
/// square Vandermonde on the same nodes.
BilinearAlgorithm toom(int k, const std::vector<Rational>& nodes = {});

/// tau-fold Kronecker power of each matrix. Errors when the result would
/// exceed the entry-count ceiling, naming the would-be sizes.
BilinearAlgorithm nest(const BilinearAlgorithm& alg, int tau);

/// Apply the algorithm to concrete inputs: c * ((a^T x) .* (b^T y)).
std::vector<Rational> apply_bilinear(const BilinearAlgorithm& alg,
                                     std::span<const Rational> x, std::span<const Rational> y);

/// Symmetry-preserving contraction of symmetric tensors of order s+v and v+t
/// over v indices, mode dimension n. Represented by its sigma triple only.
struct SymContractionSpec {
    int s, t, v;
    int n;
};

struct SymSigmaTriple {
    SigmaFn a, b, c;
};

/// k^{(s+v)/(s+t+v)} / C(s+t+v, t) and the b/c analogues, with domain hint
/// n^{s+t+v}.
SymSigmaTriple sym_sigma(const SymContractionSpec& spec);

struct PartialSigmaTriple {
    std::optional<SigmaFn> a, b, c;
};

/// Nesting of two symmetry-preserving contractions (closed monomial forms),
/// or of one with a nonsymmetric contraction: in the latter case a slot's
/// bound exists only when the matching primed order (t', s', v') is zero.
PartialSigmaTriple sym_nested_sigma(const SymContractionSpec& first,
                                    const SymContractionSpec& second,
                                    bool second_is_nonsymmetric);

}  // namespace kronbound
