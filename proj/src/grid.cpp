#include "kronbound/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kronbound {

Grid::Grid(int n_a, int n_b, std::vector<GridPoint> points)
    : n_a_(n_a), n_b_(n_b), pts_(std::move(points)) {
    if (n_a < 1 || n_b < 1) throw std::invalid_argument("Grid: axes must be >= 1");
    std::sort(pts_.begin(), pts_.end());
    for (size_t k = 0; k < pts_.size(); ++k) {
        const auto& p = pts_[k];
        if (p.i < 1 || p.i > n_a || p.j < 1 || p.j > n_b)
            throw std::invalid_argument("Grid: point out of bounds");
        if (k > 0 && pts_[k - 1] == p) throw std::invalid_argument("Grid: duplicate point");
    }
}

bool Grid::contains(GridPoint p) const {
    return std::binary_search(pts_.begin(), pts_.end(), p);
}

std::vector<int> Grid::column_heights() const {
    std::vector<int> h(n_a_, 0);
    for (const auto& p : pts_) ++h[p.i - 1];
    return h;
}

std::vector<int> Grid::row_widths() const {
    std::vector<int> w(n_b_, 0);
    for (const auto& p : pts_) ++w[p.j - 1];
    return w;
}

Grid Grid::dense_from_column_heights(int n_a, int n_b, const std::vector<int>& heights) {
    std::vector<GridPoint> pts;
    for (int i = 1; i <= static_cast<int>(heights.size()); ++i)
        for (int j = 1; j <= heights[i - 1]; ++j) pts.push_back({i, j});
    return Grid(n_a, n_b, std::move(pts));
}

Grid Grid::dense_from_row_widths(int n_a, int n_b, const std::vector<int>& widths) {
    std::vector<GridPoint> pts;
    for (int j = 1; j <= static_cast<int>(widths.size()); ++j)
        for (int i = 1; i <= widths[j - 1]; ++i) pts.push_back({i, j});
    return Grid(n_a, n_b, std::move(pts));
}

Grid grid_from_selection(const ColumnSelection& p, int n_a, int n_b) {
    if (p.source_cols != n_a * n_b)
        throw std::invalid_argument("grid_from_selection: selection size != n_a * n_b");
    std::vector<GridPoint> pts;
    pts.reserve(p.indices.size());
    for (int c : p.indices) {
        int i = (c - 1) / n_b + 1;
        int j = c - (i - 1) * n_b;
        pts.push_back({i, j});
    }
    return Grid(n_a, n_b, std::move(pts));
}

std::pair<std::vector<int>, std::vector<int>> projections(const Grid& g) {
    std::vector<int> pa, pb;
    auto h = g.column_heights();
    auto w = g.row_widths();
    for (int i = 1; i <= g.n_a(); ++i)
        if (h[i - 1] > 0) pa.push_back(i);
    for (int j = 1; j <= g.n_b(); ++j)
        if (w[j - 1] > 0) pb.push_back(j);
    return {std::move(pa), std::move(pb)};
}

namespace {

// Incremental exact span membership for on-the-fly Kronecker columns.
class IncrementalSpan {
public:
    explicit IncrementalSpan(int dim) : dim_(dim) {}

    // Returns true (and keeps the vector) when v is outside the current span.
    bool add_if_new(std::vector<Rational> v) {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const Rational& x = v[piv_[r]];
            if (x.is_zero()) continue;
            Rational f = x;
            for (int i = piv_[r]; i < dim_; ++i)
                if (!rows_[r][i].is_zero()) v[i] -= f * rows_[r][i];
        }
        int p = -1;
        for (int i = 0; i < dim_; ++i)
            if (!v[i].is_zero()) { p = i; break; }
        if (p < 0) return false;
        Rational s = v[p];
        for (int i = p; i < dim_; ++i) v[i] /= s;
        rows_.push_back(std::move(v));
        piv_.push_back(p);
        return true;
    }

private:
    int dim_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<int> piv_;
};

std::vector<Rational> kron_column(const RationalMatrix& a, const RationalMatrix& b, int i1,
                                  int j1) {
    std::vector<Rational> v;
    v.reserve(static_cast<size_t>(a.rows()) * b.rows());
    for (int ra = 0; ra < a.rows(); ++ra) {
        const Rational& s = a.at(ra, i1 - 1);
        for (int rb = 0; rb < b.rows(); ++rb) v.push_back(s * b.at(rb, j1 - 1));
    }
    return v;
}

void check_context(const Grid& g, const GridContext& ctx) {
    if (ctx.a.cols() != g.n_a() || ctx.b.cols() != g.n_b())
        throw std::invalid_argument("grid context column counts do not match the grid axes");
}

}  // namespace

Grid basis_select(const Grid& g, const GridContext& ctx) {
    check_context(g, ctx);
    IncrementalSpan span(ctx.a.rows() * ctx.b.rows());
    std::vector<GridPoint> chosen;
    for (const auto& p : g.points())  // points() is the colexicographic traversal
        if (span.add_if_new(kron_column(ctx.a, ctx.b, p.i, p.j))) chosen.push_back(p);
    return Grid(g.n_a(), g.n_b(), std::move(chosen));
}

Grid vcollapse(const Grid& g) {
    auto h = g.column_heights();
    return Grid::dense_from_column_heights(g.n_a(), g.n_b(), h);
}

bool is_dense(const Grid& g) {
    auto h = g.column_heights();
    for (const auto& p : g.points())
        if (p.j > h[p.i - 1]) return false;  // dense iff every column is a bottom prefix
    return true;
}

bool is_cdg(const Grid& g) {
    if (!is_dense(g)) return false;
    auto h = g.column_heights();
    for (size_t i = 1; i < h.size(); ++i)
        if (h[i] > h[i - 1]) return false;
    return true;
}

CdgResult to_cdg(const Grid& g) {
    auto h = g.column_heights();
    auto w = g.row_widths();

    // Stable sort: equal column heights keep original relative order.
    std::vector<int> col_order(g.n_a());
    std::iota(col_order.begin(), col_order.end(), 1);
    std::stable_sort(col_order.begin(), col_order.end(),
                     [&](int a, int b) { return h[a - 1] > h[b - 1]; });
    std::vector<int> row_order(g.n_b());
    std::iota(row_order.begin(), row_order.end(), 1);
    std::stable_sort(row_order.begin(), row_order.end(),
                     [&](int a, int b) { return w[a - 1] > w[b - 1]; });

    std::vector<int> new_col(g.n_a() + 1), new_row(g.n_b() + 1);
    for (int k = 0; k < g.n_a(); ++k) new_col[col_order[k]] = k + 1;
    for (int k = 0; k < g.n_b(); ++k) new_row[row_order[k]] = k + 1;

    std::vector<GridPoint> pts;
    pts.reserve(g.size());
    for (const auto& p : g.points()) pts.push_back({new_col[p.i], new_row[p.j]});
    Grid out(g.n_a(), g.n_b(), std::move(pts));
    if (!is_cdg(out))
        throw std::invalid_argument("to_cdg: grid is not a pre-CDG (no reordering is dense)");
    return CdgResult{std::move(out), std::move(col_order)};
}

Grid grid_expand(const Grid& pre_cdg, const SigmaFn& sigma_a, const SigmaFn& sigma_b) {
    Grid cdg = to_cdg(pre_cdg).cdg;
    const int n_a = cdg.n_a(), n_b = cdg.n_b();

    std::vector<int> h = cdg.column_heights();
    std::vector<int> vh(n_a, 0);
    for (int i = 0; i < n_a; ++i)
        if (h[i] > 0)
            vh[i] = static_cast<int>(
                sigma_b.floor_pseudoinverse_int(static_cast<double>(h[i]), n_b));
    Grid vexp = Grid::dense_from_column_heights(n_a, n_b, vh);

    std::vector<int> w = vexp.row_widths();
    std::vector<int> hw(n_b, 0);
    for (int j = 0; j < n_b; ++j)
        if (w[j] > 0)
            hw[j] = static_cast<int>(
                sigma_a.floor_pseudoinverse_int(static_cast<double>(w[j]), n_a));
    return Grid::dense_from_row_widths(n_a, n_b, hw);
}

Grid discrete_step(const Grid& g, const GridContext& ctx) {
    check_context(g, ctx);
    CdgResult cr = to_cdg(vcollapse(g));
    const std::vector<int>& perm = cr.column_permutation;  // perm[new-1] = old

    // Permute the columns of a to match the CDG's column order.
    RationalMatrix pa(ctx.a.rows(), ctx.a.cols());
    for (int nc = 1; nc <= ctx.a.cols(); ++nc)
        for (int r = 0; r < ctx.a.rows(); ++r) pa.at(r, nc - 1) = ctx.a.at(r, perm[nc - 1] - 1);

    Grid basis = basis_select(cr.cdg, GridContext{pa, ctx.b});

    // Trim each basis column from the top to r_p, the exact rank of the
    // original grid column's b-vectors.
    std::vector<std::vector<int>> col_rows(g.n_a() + 1);
    for (const auto& p : basis.points()) col_rows[p.i].push_back(p.j);

    std::vector<std::vector<int>> orig_col_js(g.n_a() + 1);
    for (const auto& p : g.points()) orig_col_js[p.i].push_back(p.j);

    std::vector<GridPoint> kept;
    for (int p = 1; p <= g.n_a(); ++p) {
        if (col_rows[p].empty()) continue;
        std::vector<int> js = orig_col_js[perm[p - 1]];
        std::sort(js.begin(), js.end());
        int r_p = rank(select_columns(ctx.b, ColumnSelection::of(ctx.b.cols(), js)));
        auto& rows = col_rows[p];
        std::sort(rows.begin(), rows.end());
        for (int t = 0; t < std::min<int>(r_p, static_cast<int>(rows.size())); ++t)
            kept.push_back({p, rows[t]});
    }
    return Grid(g.n_a(), g.n_b(), std::move(kept));
}

}  // namespace kronbound
