#include "kronbound/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kronbound {

namespace {

constexpr long long kNestEntryCeiling = 4'000'000;

void check_full_rank(const RationalMatrix& m, const std::string& name) {
    if (rank(m) != std::min(m.rows(), m.cols()))
        throw std::invalid_argument("bilinear algorithm '" + name +
                                    "': encoding matrix is not full rank");
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

BilinearAlgorithm make_bilinear(RationalMatrix a, RationalMatrix b, RationalMatrix c,
                                std::string name) {
    if (a.cols() != b.cols() || a.cols() != c.cols())
        throw std::invalid_argument("bilinear algorithm '" + name +
                                    "': matrices must share the column count R");
    check_full_rank(a, name);
    check_full_rank(b, name);
    check_full_rank(c, name);
    return BilinearAlgorithm{std::move(a), std::move(b), std::move(c), std::move(name)};
}

BilinearAlgorithm strassen() {
    auto a = RationalMatrix::from_int_rows({{1, 0, 1, 0, 1, -1, 0},
                                            {0, 0, 0, 0, 1, 0, 1},
                                            {0, 1, 0, 0, 0, 1, 0},
                                            {1, 1, 0, 1, 0, 0, 1}});
    auto b = RationalMatrix::from_int_rows({{1, 1, 0, -1, 0, 1, 0},
                                            {0, 0, 1, 0, 0, 1, 0},
                                            {0, 0, 0, 1, 0, 0, 1},
                                            {1, 0, -1, 0, 1, 0, 1}});
    auto c = RationalMatrix::from_int_rows({{1, 0, 0, 1, -1, 0, 1},
                                            {0, 0, 1, 0, 1, 0, 0},
                                            {0, 1, 0, 1, 0, 0, 0},
                                            {1, -1, 1, 0, 0, 1, 0}});
    return make_bilinear(std::move(a), std::move(b), std::move(c), "strassen");
}

BilinearAlgorithm toom(int k, const std::vector<Rational>& nodes_in) {
    if (k < 2) throw std::invalid_argument("toom: k must be >= 2");
    const int m = 2 * k - 1;
    std::vector<Rational> nodes = nodes_in;
    if (nodes.empty()) {
        nodes.emplace_back(0);
        for (int v = 1; static_cast<int>(nodes.size()) < m; ++v) {
            nodes.emplace_back(v);
            if (static_cast<int>(nodes.size()) < m) nodes.emplace_back(-v);
        }
    }
    if (static_cast<int>(nodes.size()) != m)
        throw std::invalid_argument("toom: need exactly 2k-1 nodes");
    std::set<std::string> seen;
    for (const auto& x : nodes)
        if (!seen.insert(x.to_string()).second)
            throw std::invalid_argument("toom: nodes must be distinct");

    // evaluation matrix: row i holds powers of node i
    RationalMatrix vf(m, m);
    for (int i = 0; i < m; ++i) {
        Rational p(1);
        for (int j = 0; j < m; ++j) {
            vf.at(i, j) = p;
            p *= nodes[i];
        }
    }
    RationalMatrix a(k, m);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < m; ++i) a.at(j, i) = vf.at(i, j);
    RationalMatrix c = inverse(vf);
    RationalMatrix b = a;
    return make_bilinear(std::move(a), std::move(b), std::move(c),
                         "toom-" + std::to_string(k));
}

BilinearAlgorithm nest(const BilinearAlgorithm& alg, int tau) {
    if (tau < 1) throw std::invalid_argument("nest: tau must be >= 1");
    auto would_be = [&](const RationalMatrix& m) {
        long long rows = 1, cols = 1;
        for (int t = 0; t < tau; ++t) {
            rows *= m.rows();
            cols *= m.cols();
        }
        return std::pair<long long, long long>{rows, cols};
    };
    for (const RationalMatrix* m : {&alg.a, &alg.b, &alg.c}) {
        auto [r, c] = would_be(*m);
        if (r * c > kNestEntryCeiling)
            throw std::invalid_argument(
                "nest: tau=" + std::to_string(tau) + " would give a " + std::to_string(r) + "x" +
                std::to_string(c) + " matrix, over the " + std::to_string(kNestEntryCeiling) +
                "-entry ceiling");
    }
    RationalMatrix a = alg.a, b = alg.b, c = alg.c;
    for (int t = 1; t < tau; ++t) {
        a = kron(a, alg.a);
        b = kron(b, alg.b);
        c = kron(c, alg.c);
    }
    return BilinearAlgorithm{std::move(a), std::move(b), std::move(c),
                             alg.name + "^" + std::to_string(tau)};
}

std::vector<Rational> apply_bilinear(const BilinearAlgorithm& alg,
                                     std::span<const Rational> x, std::span<const Rational> y) {
    std::vector<Rational> ax = multiply(alg.a.transposed(), x);
    std::vector<Rational> by = multiply(alg.b.transposed(), y);
    for (size_t i = 0; i < ax.size(); ++i) ax[i] *= by[i];
    return multiply(alg.c, ax);
}

SymSigmaTriple sym_sigma(const SymContractionSpec& spec) {
    const int o = spec.s + spec.t + spec.v;
    if (o < 1) throw std::invalid_argument("sym_sigma: s+t+v must be >= 1");
    if (spec.s < 0 || spec.t < 0 || spec.v < 0 || spec.n < 1)
        throw std::invalid_argument("sym_sigma: orders must be nonnegative, n >= 1");
    const double hint = std::pow(static_cast<double>(spec.n), o);
    auto slot = [&](int num, int choose) {
        if (num == 0)
            throw std::invalid_argument(
                "sym_sigma: degenerate order tuple gives a constant bound");
        return SigmaFn::monomial(1.0 / binom(o, choose), static_cast<double>(num) / o, 1.0,
                                 hint);
    };
    return SymSigmaTriple{slot(spec.s + spec.v, spec.t), slot(spec.v + spec.t, spec.s),
                          slot(spec.s + spec.t, spec.v)};
}

PartialSigmaTriple sym_nested_sigma(const SymContractionSpec& first,
                                    const SymContractionSpec& second,
                                    bool second_is_nonsymmetric) {
    const int o1 = first.s + first.t + first.v;
    const int o2 = second.s + second.t + second.v;
    if (o1 < 1 || o2 < 1) throw std::invalid_argument("sym_nested_sigma: s+t+v must be >= 1");
    const double hint = std::pow(static_cast<double>(first.n), o1) *
                        std::pow(static_cast<double>(second.n), o2);

    PartialSigmaTriple out;
    if (!second_is_nonsymmetric) {
        auto slot = [&](int num1, int choose1, int num2, int choose2) {
            if (num1 == 0 || num2 == 0)
                throw std::invalid_argument(
                    "sym_nested_sigma: degenerate order tuple gives a constant bound");
            double e = std::min(static_cast<double>(num1) / o1, static_cast<double>(num2) / o2);
            return SigmaFn::monomial(1.0 / (binom(o1, choose1) * binom(o2, choose2)), e, 1.0,
                                     hint);
        };
        out.a = slot(first.s + first.v, first.t, second.s + second.v, second.t);
        out.b = slot(first.v + first.t, first.s, second.v + second.t, second.s);
        out.c = slot(first.s + first.t, first.v, second.s + second.t, second.v);
        return out;
    }

    // Nonsymmetric second operand: a slot's bound carries over unchanged only
    // when the matching primed order vanishes; otherwise no bound exists.
    auto slot = [&](int num, int choose) {
        return SigmaFn::monomial(1.0 / binom(o1, choose), static_cast<double>(num) / o1, 1.0,
                                 hint);
    };
    if (second.t == 0) out.a = slot(first.s + first.v, first.t);
    if (second.s == 0) out.b = slot(first.v + first.t, first.s);
    if (second.v == 0) out.c = slot(first.s + first.t, first.v);
    return out;
}

}  // namespace kronbound
