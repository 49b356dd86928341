#include "kronbound/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kronbound {

namespace {

constexpr double kRelTol = 1e-9;

SweepArgmax golden_refine(const std::function<double(double)>& h, double a, double b) {
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double hc = h(c), hd = h(d);
    while (b - a > kRelTol * std::max({1.0, std::abs(a), std::abs(b)})) {
        if (hc >= hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - gr * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + gr * (b - a);
            hd = h(d);
        }
    }
    double mid = 0.5 * (a + b);
    return SweepArgmax{mid, h(mid)};
}

SweepArgmax run(const std::function<double(double)>& h, double lo, double hi, bool log_spaced,
                int samples, bool maximize) {
    if (!(hi >= lo)) throw std::invalid_argument("sweep: empty interval");
    auto f = maximize ? h : [&h](double x) { return -h(x); };
    if (hi - lo <= kRelTol * std::max(1.0, std::abs(lo))) {
        double v = h(lo);
        return SweepArgmax{lo, v};
    }
    if (log_spaced && !(lo > 0)) log_spaced = false;

    std::vector<double> xs(samples);
    if (log_spaced) {
        double sl = std::log(lo), sh = std::log(hi);
        for (int i = 0; i < samples; ++i) xs[i] = std::exp(sl + (sh - sl) * i / (samples - 1));
    } else {
        for (int i = 0; i < samples; ++i) xs[i] = lo + (hi - lo) * i / (samples - 1);
    }
    xs.front() = lo;
    xs.back() = hi;

    int best = 0;
    double bestv = f(xs[0]);
    for (int i = 1; i < samples; ++i) {
        double v = f(xs[i]);
        if (v > bestv) {
            bestv = v;
            best = i;
        }
    }
    double a = xs[std::max(0, best - 1)];
    double b = xs[std::min(samples - 1, best + 1)];
    SweepArgmax refined = golden_refine(f, a, b);
    if (refined.value < bestv) refined = SweepArgmax{xs[best], bestv};
    if (!maximize) refined.value = -refined.value;
    return refined;
}

}  // namespace

SweepArgmax sweep_max(const std::function<double(double)>& h, double lo, double hi,
                      bool log_spaced, int samples) {
    return run(h, lo, hi, log_spaced, samples, true);
}

SweepArgmax sweep_min(const std::function<double(double)>& h, double lo, double hi,
                      bool log_spaced, int samples) {
    return run(h, lo, hi, log_spaced, samples, false);
}

}  // namespace kronbound
