#include "kronbound/stair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kronbound/optimize.hpp"

namespace kronbound {

namespace {

constexpr double kTieTol = 1e-12;

bool close(double a, double b) {
    return std::abs(a - b) <= kTieTol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Drops empty steps and fuses equal-height neighbours so the strict-decrease
// invariant holds.
std::vector<Step> normalized(std::vector<Step> in) {
    std::vector<Step> out;
    for (const auto& s : in) {
        if (s.height <= kTieTol) continue;
        if (!out.empty() && close(out.back().height, s.height))
            out.back().x_right = s.x_right;
        else
            out.push_back(s);
    }
    return out;
}

}  // namespace

Stair::Stair(std::vector<Step> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw std::invalid_argument("Stair: needs at least one step");
    double px = 0.0;
    double ph = std::numeric_limits<double>::infinity();
    for (const auto& s : steps_) {
        if (!(s.x_right > px)) throw std::invalid_argument("Stair: x-rights must increase");
        if (!(s.height > 0) || !(s.height < ph))
            throw std::invalid_argument("Stair: heights must strictly decrease");
        px = s.x_right;
        ph = s.height;
    }
}

Stair Stair::from_cdg(const Grid& cdg) {
    if (!is_cdg(cdg)) throw std::invalid_argument("Stair::from_cdg: grid is not a CDG");
    auto h = cdg.column_heights();
    std::vector<Step> steps;
    for (int i = 0; i < cdg.n_a() && h[i] > 0; ++i) {
        double height = static_cast<double>(h[i]);
        if (!steps.empty() && close(steps.back().height, height))
            steps.back().x_right = i + 1;
        else
            steps.push_back({static_cast<double>(i + 1), height});
    }
    return Stair(std::move(steps));
}

double Stair::area() const {
    double a = 0.0, px = 0.0;
    for (const auto& s : steps_) {
        a += (s.x_right - px) * s.height;
        px = s.x_right;
    }
    return a;
}

Stair LShape::to_stair() const {
    if (!(0 < x1 && x1 < x2 && 0 < y1 && y1 < y2))
        throw std::invalid_argument("LShape: need 0 < x1 < x2 and 0 < y1 < y2");
    return Stair({Step{x1, y2}, Step{x2, y1}});
}

double expansion_size(const Stair& s, const SigmaFn& f, const SigmaFn& g) {
    double total = 0.0, px = 0.0;
    for (const auto& st : s.steps()) {
        total += (f.eval(st.x_right) - f.eval(px)) * g.eval(st.height);
        px = st.x_right;
    }
    return total;
}

double expansion_size(const LShape& l, const SigmaFn& f, const SigmaFn& g) {
    return expansion_size(l.to_stair(), f, g);
}

Stair merge(const Stair& s, int k, const SigmaFn& f, const SigmaFn& g) {
    const auto& st = s.steps();
    const int m = s.step_count();
    if (k < 1 || k + 1 > m) throw std::out_of_range("merge: step index out of range");
    const int a = k - 1, b = k;

    const double x0 = a > 0 ? st[a - 1].x_right : 0.0;
    const double x1 = st[a].x_right;
    const double x2 = st[b].x_right;
    const double y3 = a > 0 ? st[a - 1].height : std::numeric_limits<double>::infinity();
    const double y0 = b + 1 < m ? st[b + 1].height : 0.0;

    // Equal-area mean height of the two steps; the merge slides the height
    // difference u while preserving it.
    const double ybar =
        ((x1 - x0) * st[a].height + (x2 - x1) * st[b].height) / (x2 - x0);
    const double u_upper = std::isfinite(y3) ? (y3 - ybar) * (x2 - x0) / (x2 - x1)
                                             : std::numeric_limits<double>::infinity();
    const double u_lower = (ybar - y0) * (x2 - x0) / (x1 - x0);
    const double u_max = std::min(u_upper, u_lower);

    auto build = [&](double u) {
        double ya = ybar + (x2 - x1) / (x2 - x0) * u;  // step k
        double yb = ybar - (x1 - x0) / (x2 - x0) * u;  // step k+1
        std::vector<Step> out(st.begin(), st.end());
        out[a].height = ya;
        out[b].height = yb;
        return Stair(normalized(std::move(out)));
    };

    Stair m1 = build(u_max);
    Stair m2 = build(0.0);
    return expansion_size(m1, f, g) >= expansion_size(m2, f, g) ? m1 : m2;
}

double phi_rect(double t, const SigmaFn& f, const SigmaFn& g, std::optional<PhiCaps> caps) {
    if (!(t >= 1.0)) throw std::domain_error("phi_rect: t must be >= 1");
    double lo = 1.0, hi = t;
    if (caps) {
        if (t > caps->r_a * caps->r_b * (1 + kCompareSlack))
            throw std::domain_error("phi_rect: t exceeds r_a * r_b");
        lo = std::max(1.0, t / caps->r_b);
        hi = std::min(caps->r_a, t);
        if (lo > hi) lo = hi;
    }
    auto h = [&](double ta) { return f.eval(ta) * g.eval(t / ta); };
    return sweep_max(h, lo, hi, /*log_spaced=*/true).value;
}

std::optional<double> phi_lshape(double t, const SigmaFn& f, const SigmaFn& g, double r_a,
                                 double r_b, double n_a, double n_b) {
    if (t > r_a * r_b * (1 + kCompareSlack))
        throw std::domain_error("phi_lshape: t exceeds r_a * r_b");
    if (t < std::max(r_a, r_b) * (1 - kCompareSlack)) return std::nullopt;

    const double c = std::max(0.0, r_a * r_b - t);
    const double xmax = r_a - c / r_b;
    auto h = [&](double x1) {
        double y1 = c == 0.0 ? r_b : r_b - c / (r_a - x1);
        return n_a * g.eval(y1) + n_b * f.eval(x1) - f.eval(x1) * g.eval(y1);
    };
    return sweep_max(h, 0.0, xmax, /*log_spaced=*/false).value;
}

}  // namespace kronbound
