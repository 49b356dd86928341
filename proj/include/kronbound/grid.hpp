#pragma once

#include <compare>
#include <utility>
#include <vector>

#include "kronbound/matrix.hpp"
#include "kronbound/sigma.hpp"

namespace kronbound {

/// Cartesian grid point, 1-based. Ordering is colexicographic: (i,j) precedes
/// (i',j') when i < i', or i = i' and j < j'.
struct GridPoint {
    int i, j;
    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

/// Set of points in [n_a] x [n_b] identifying a column subset of a Kronecker
/// product; point (i,j) stands for column a_i (x) b_j.
class Grid {
public:
    Grid(int n_a, int n_b, std::vector<GridPoint> points);

    int n_a() const { return n_a_; }
    int n_b() const { return n_b_; }
    int size() const { return static_cast<int>(pts_.size()); }
    /// Points in colexicographic order.
    const std::vector<GridPoint>& points() const { return pts_; }
    bool contains(GridPoint p) const;

    /// |G_{[i,.]}| for i = 1..n_a.
    std::vector<int> column_heights() const;
    /// |G_{[.,j]}| for j = 1..n_b.
    std::vector<int> row_widths() const;

    static Grid dense_from_column_heights(int n_a, int n_b, const std::vector<int>& heights);
    static Grid dense_from_row_widths(int n_a, int n_b, const std::vector<int>& widths);

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int n_a_, n_b_;
    std::vector<GridPoint> pts_;
};

/// Column contexts pairing a grid with concrete matrices: a has n_a columns,
/// b has n_b columns.
struct GridContext {
    RationalMatrix a, b;
};

/// Column index c of a (x) maps to (i, j) with i = ceil(c / n_b),
/// j = c - (i-1) * n_b.
Grid grid_from_selection(const ColumnSelection& p, int n_a, int n_b);

/// (occupied grid-column indices, occupied grid-row indices), both sorted.
std::pair<std::vector<int>, std::vector<int>> projections(const Grid& g);

/// Colexicographic traversal adding a point iff its column is outside the
/// span of the points already selected; |result| = rank of the submatrix.
Grid basis_select(const Grid& g, const GridContext& ctx);

/// Vertical collapse: each nonempty column i becomes {i} x [|G_{[i,.]}|].
Grid vcollapse(const Grid& g);

bool is_dense(const Grid& g);
bool is_cdg(const Grid& g);

struct CdgResult {
    Grid cdg;
    /// 1-based: column_permutation[new_i - 1] = original column index.
    std::vector<int> column_permutation;
};

/// Reorders columns (stable, by non-increasing height) and rows so the result
/// is a compact dense grid. Throws std::invalid_argument when no reordering
/// can produce one.
CdgResult to_cdg(const Grid& g);

/// Vertical then horizontal inflation of the CDG shape of a pre-CDG:
/// heights become min{n_b, floor(sigma_b^+(h))}, then row widths become
/// min{n_a, floor(sigma_a^+(w))}.
Grid grid_expand(const Grid& pre_cdg, const SigmaFn& sigma_a, const SigmaFn& sigma_b);

/// Builds a pre-CDG S from an arbitrary grid with |S| <= rank(G) and
/// |G| <= |grid_expand(S)| for any valid lower bounds of the context
/// matrices: collapse, reorder to a CDG, take the basis, then trim each
/// basis column from the top to the exact rank of the original column.
Grid discrete_step(const Grid& g, const GridContext& ctx);

}  // namespace kronbound
