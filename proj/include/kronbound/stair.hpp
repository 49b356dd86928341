#pragma once

#include <optional>
#include <vector>

#include "kronbound/grid.hpp"
#include "kronbound/sigma.hpp"

namespace kronbound {

/// One step of a stair: the rectangle (x_left, x_right] x [0, height], with
/// x_left the previous step's right edge (0 for the first step).
struct Step {
    double x_right;
    double height;
    friend bool operator==(const Step&, const Step&) = default;
};

/// Contiguous rectangles of strictly decreasing height; the continuous
/// relaxation of a CDG.
class Stair {
public:
    explicit Stair(std::vector<Step> steps);
    static Stair from_cdg(const Grid& cdg);

    const std::vector<Step>& steps() const { return steps_; }
    int step_count() const { return static_cast<int>(steps_.size()); }
    double area() const;

    friend bool operator==(const Stair&, const Stair&) = default;

private:
    std::vector<Step> steps_;
};

/// Two-step stair [0,x1] x [0,y2] union [0,x2] x [0,y1].
struct LShape {
    double x1, y1, x2, y2;
    Stair to_stair() const;
};

/// <S> = sum_i (f(x_i) - f(x_{i-1})) * g(y_i); f, g increasing with
/// f(0) = g(0) = 0 (the sigma-inverse role).
double expansion_size(const Stair& s, const SigmaFn& f, const SigmaFn& g);
double expansion_size(const LShape& l, const SigmaFn& f, const SigmaFn& g);

/// Area-preserving removal of one step: pushes the height difference of steps
/// k and k+1 (1-based) to its structural limit (M1) or to zero (M2) and keeps
/// whichever has the larger expansion size, M1 on ties.
Stair merge(const Stair& s, int k, const SigmaFn& f, const SigmaFn& g);

struct PhiCaps {
    double r_a, r_b;
};

/// max over t_a in [max(1, t/r_b), min(r_a, t)] of f(t_a) * g(t/t_a).
/// Without caps the range is [1, t]. Throws std::domain_error when t is
/// infeasible (t < 1, or t > r_a*r_b under caps).
double phi_rect(double t, const SigmaFn& f, const SigmaFn& g,
                std::optional<PhiCaps> caps = {});

/// L-shaped expansion ceiling: maximize n_a*g(y1) + n_b*f(x1) - f(x1)*g(y1)
/// over the curve r_b*x1 + r_a*y1 - x1*y1 = t. Returns nullopt below
/// max(r_a, r_b) (where the rectangle bound alone applies); throws
/// std::domain_error above r_a*r_b.
std::optional<double> phi_lshape(double t, const SigmaFn& f, const SigmaFn& g, double r_a,
                                 double r_b, double n_a, double n_b);

}  // namespace kronbound
