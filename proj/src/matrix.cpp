#include "kronbound/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace kronbound {

ColumnSelection ColumnSelection::of(int source_cols, std::vector<int> indices) {
    if (source_cols < 1) throw std::invalid_argument("ColumnSelection: source_cols must be >= 1");
    int prev = 0;
    for (int ix : indices) {
        if (ix <= prev)
            throw std::invalid_argument("ColumnSelection: indices must be strictly increasing");
        if (ix > source_cols)
            throw std::invalid_argument("ColumnSelection: index " + std::to_string(ix) +
                                        " out of range [1," + std::to_string(source_cols) + "]");
        prev = ix;
    }
    return ColumnSelection{source_cols, std::move(indices)};
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("RationalMatrix: empty dimensions");
}

RationalMatrix::RationalMatrix(int rows, int cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), e_(std::move(entries)) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("RationalMatrix: empty dimensions");
    if (e_.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("RationalMatrix: entry count does not match dimensions");
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RationalMatrix RationalMatrix::from_int_rows(
    std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = static_cast<int>(rows.begin()->size());
    std::vector<Rational> e;
    e.reserve(static_cast<size_t>(r) * c);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("from_int_rows: ragged rows");
        for (long x : row) e.emplace_back(x);
    }
    return RationalMatrix(r, c, std::move(e));
}

std::vector<Rational> RationalMatrix::column(int j) const {
    std::vector<Rational> out;
    out.reserve(rows_);
    for (int i = 0; i < rows_; ++i) out.push_back(at(i, j));
    return out;
}

RationalMatrix RationalMatrix::transposed() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

int rank(const RationalMatrix& m) {
    const int r = m.rows(), c = m.cols();
    // Clear denominators row by row; row scaling leaves the rank unchanged.
    std::vector<mpz_class> w(static_cast<size_t>(r) * c);
    for (int i = 0; i < r; ++i) {
        mpz_class l = 1;
        for (int j = 0; j < c; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(),
                                            m.at(i, j).denominator().get_mpz_t());
        for (int j = 0; j < c; ++j)
            w[static_cast<size_t>(i) * c + j] =
                m.at(i, j).numerator() * (l / m.at(i, j).denominator());
    }
    auto at = [&](int i, int j) -> mpz_class& { return w[static_cast<size_t>(i) * c + j]; };

    mpz_class prev = 1;
    int pr = 0;  // pivot row
    for (int col = 0; col < c && pr < r; ++col) {
        int piv = -1;
        for (int i = pr; i < r; ++i)
            if (sgn(at(i, col)) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != pr)
            for (int j = col; j < c; ++j) std::swap(at(piv, j), at(pr, j));
        for (int i = pr + 1; i < r; ++i) {
            for (int j = col + 1; j < c; ++j) {
                mpz_class t = at(pr, col) * at(i, j) - at(i, col) * at(pr, j);
                mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            at(i, col) = 0;
        }
        prev = at(pr, col);
        ++pr;
    }
    return pr;
}

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b) {
    const int ma = a.rows(), na = a.cols(), mb = b.rows(), nb = b.cols();
    RationalMatrix out(ma * mb, na * nb);
    for (int ia = 0; ia < ma; ++ia)
        for (int ja = 0; ja < na; ++ja) {
            const Rational& s = a.at(ia, ja);
            if (s.is_zero()) continue;
            for (int ib = 0; ib < mb; ++ib)
                for (int jb = 0; jb < nb; ++jb)
                    out.at(ia * mb + ib, ja * nb + jb) = s * b.at(ib, jb);
        }
    return out;
}

RationalMatrix select_columns(const RationalMatrix& m, const ColumnSelection& p) {
    if (p.source_cols != m.cols())
        throw std::invalid_argument("select_columns: selection built for " +
                                    std::to_string(p.source_cols) + " columns, matrix has " +
                                    std::to_string(m.cols()));
    if (p.indices.empty()) throw std::invalid_argument("select_columns: empty selection");
    RationalMatrix out(m.rows(), p.count());
    for (int k = 0; k < p.count(); ++k) {
        const int j = p.indices[k] - 1;
        for (int i = 0; i < m.rows(); ++i) out.at(i, k) = m.at(i, j);
    }
    return out;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: dimension mismatch");
    RationalMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const Rational& s = a.at(i, k);
            if (s.is_zero()) continue;
            for (int j = 0; j < b.cols(); ++j) out.at(i, j) += s * b.at(k, j);
        }
    return out;
}

std::vector<Rational> multiply(const RationalMatrix& a, std::span<const Rational> x) {
    if (static_cast<int>(x.size()) != a.cols())
        throw std::invalid_argument("multiply: vector length mismatch");
    std::vector<Rational> out(a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out[i] += a.at(i, j) * x[j];
    return out;
}

RationalMatrix inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const int n = m.rows();
    RationalMatrix w = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!w.at(i, col).is_zero()) { piv = i; break; }
        if (piv < 0) throw std::invalid_argument("inverse: singular matrix");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(w.at(piv, j), w.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        Rational d = w.at(col, col);
        for (int j = 0; j < n; ++j) {
            w.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || w.at(i, col).is_zero()) continue;
            Rational f = w.at(i, col);
            for (int j = 0; j < n; ++j) {
                w.at(i, j) -= f * w.at(col, j);
                inv.at(i, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

}  // namespace kronbound
