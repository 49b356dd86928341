#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "kronbound/rational.hpp"

namespace kronbound {

/// k distinct columns of an identity matrix, given as 1-based strictly
/// increasing indices into a source matrix with source_cols columns.
struct ColumnSelection {
    int source_cols = 0;
    std::vector<int> indices;

    static ColumnSelection of(int source_cols, std::vector<int> indices);
    int count() const { return static_cast<int>(indices.size()); }
};

/// Dense exact-rational matrix, row-major.
class RationalMatrix {
public:
    RationalMatrix(int rows, int cols);
    RationalMatrix(int rows, int cols, std::vector<Rational> entries);

    static RationalMatrix identity(int n);
    static RationalMatrix from_int_rows(std::initializer_list<std::initializer_list<long>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Rational& at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
    Rational& at(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }

    std::vector<Rational> column(int j) const;  // 0-based
    RationalMatrix transposed() const;

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

private:
    int rows_, cols_;
    std::vector<Rational> e_;
};

/// Exact rank by fraction-free (Bareiss) elimination. Deterministic.
int rank(const RationalMatrix& m);

/// Kronecker product with block-column layout: column (i-1)*n_B + j of the
/// result is a_i (x) b_j for 1-based i, j.
RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b);

/// Submatrix of the selected columns in index order.
/// Throws std::invalid_argument when the selection does not fit m.
RationalMatrix select_columns(const RationalMatrix& m, const ColumnSelection& p);

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
std::vector<Rational> multiply(const RationalMatrix& a, std::span<const Rational> x);

/// Exact inverse via Gauss-Jordan. Throws std::invalid_argument on singular input.
RationalMatrix inverse(const RationalMatrix& m);

}  // namespace kronbound
