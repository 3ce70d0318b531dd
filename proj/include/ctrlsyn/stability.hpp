#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctrlsyn/transfer_function.hpp"

namespace ctrlsyn {

/// First column of the Routh table.  When degenerate is false,
/// sign_changes equals the number of open right-half-plane roots.
struct RouthResult {
    std::vector<double> first_column;
    int sign_changes = 0;
    bool degenerate = false;  // zero pivot or zero row was patched
};

/// Crossover frequencies and margins of a loop gain L(jw).
struct MarginReport {
    std::vector<double> omega_g_list;  // |L| = 1 crossings, ascending
    std::vector<double> omega_p_list;  // arg L = -pi crossings, ascending
    std::optional<double> pm;          // radians, at the first omega_g
    std::optional<double> gm;          // at the first omega_p
    bool well_defined = false;         // exactly one crossing of each kind
    std::string notes;
};

/// N_C N_G + D_C D_G for the unity feedback loop; requires both dead times
/// zero (DelayUnsupported).
Polynomial closed_loop_charpoly(const TransferFunction& controller, const TransferFunction& plant);

/// Routh table of p (degree >= 1, nonzero leading coefficient).  Isolated
/// zero pivots are replaced by +/- 1e-9 * ||row|| (both signs tried); a
/// vanishing row is replaced by the derivative of its auxiliary polynomial.
/// Degeneracy is reported, never thrown.
RouthResult routh(const Polynomial& p);

/// Parametric controller family over the gain margin; nullopt marks an
/// infeasible design point (treated as unstable).
using GmDesignFn = std::function<std::optional<TransferFunction>(double gm)>;

/// Gain-margin intervals within [gm_lo, gm_hi] for which the closed loop of
/// design_fn(gm) with the plant is asymptotically stable.  Log-spaced scan
/// of `samples` points, boundaries refined by bisection to 1e-6 relative.
std::vector<std::pair<double, double>> stable_gm_intervals(const TransferFunction& plant,
                                                           const GmDesignFn& design_fn,
                                                           double gm_lo, double gm_hi,
                                                           int samples);

struct FrequencyGrid {
    double lo = 1e-3;  // rad/s
    double hi = 1e3;
    int samples = 10000;
};

/// Default margin-search grid: [1e-3, 1e3] rad/s widened by x100 beyond the
/// loop's extreme finite pole/zero magnitudes.
FrequencyGrid default_grid(const TransferFunction& loop);

/// Locate every |L| = 1 and arg L = -pi crossing on a log grid, refine each
/// by bisection to 1e-10 relative in omega, and evaluate PM and GM there.
/// Missing crossings are reported through empty lists and notes.
MarginReport measure_margins(const TransferFunction& loop, const FrequencyGrid& grid);
MarginReport measure_margins(const TransferFunction& loop);

}  // namespace ctrlsyn
