#pragma once

// Internal helper: log-spaced residual scan with bisection refinement,
// shared by the dead-time crossover searches.

#include <cmath>
#include <functional>
#include <vector>

#include "ctrlsyn/errors.hpp"

namespace ctrlsyn::detail {

// Scan a log-spaced grid for sign changes of `residual` and refine each
// bracket by bisection.  Grid points where the residual is not evaluable
// (pole hits) are skipped.
inline std::vector<double> bracket_scan(const std::function<double(double)>& residual, double lo,
                                        double hi, int samples) {
    std::vector<double> roots;
    const double step = std::log(hi / lo) / (samples - 1);
    double prev_w = 0.0, prev_r = 0.0;
    bool have_prev = false;
    for (int i = 0; i < samples; ++i) {
        const double w = lo * std::exp(step * i);
        double r;
        try {
            r = residual(w);
        } catch (const Error&) {
            have_prev = false;
            continue;
        }
        if (!std::isfinite(r)) {
            have_prev = false;
            continue;
        }
        if (have_prev && ((prev_r < 0.0) != (r < 0.0))) {
            double a = prev_w, b = w, fa = prev_r;
            for (int it = 0; it < 200 && (b - a) > 1e-14 * a; ++it) {
                const double mid = std::sqrt(a * b);
                double fm;
                try {
                    fm = residual(mid);
                } catch (const Error&) {
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_w = w;
        prev_r = r;
        have_prev = true;
    }
    return roots;
}

}  // namespace ctrlsyn::detail
