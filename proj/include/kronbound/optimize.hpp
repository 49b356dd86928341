#pragma once

#include <functional>

namespace kronbound {

/// One-dimensional optimum of a continuous function over [lo, hi]:
/// fixed-count sweep (log- or uniformly spaced) followed by golden-section
/// refinement around the best sample, to relative tolerance 1e-9 on x.
/// Endpoints are always included as candidates.
struct SweepArgmax {
    double x;
    double value;
};

SweepArgmax sweep_max(const std::function<double(double)>& h, double lo, double hi,
                      bool log_spaced, int samples = 1024);
SweepArgmax sweep_min(const std::function<double(double)>& h, double lo, double hi,
                      bool log_spaced, int samples = 1024);

}  // namespace kronbound
