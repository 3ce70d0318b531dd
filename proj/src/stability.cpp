#include "ctrlsyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ctrlsyn/errors.hpp"
#include "ctrlsyn/targets.hpp"

namespace ctrlsyn {

namespace {
constexpr double kPi = std::numbers::pi;
}

Polynomial closed_loop_charpoly(const TransferFunction& controller,
                                const TransferFunction& plant) {
    if (controller.delay != 0.0 || plant.delay != 0.0) {
        throw DelayUnsupported("closed_loop_charpoly: dead times give a non-polynomial equation");
    }
    return controller.num * plant.num + controller.den * plant.den;
}

namespace {

int count_sign_changes(const std::vector<double>& column) {
    int changes = 0;
    double prev = 0.0;
    for (double v : column) {
        if (v == 0.0) continue;
        if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) ++changes;
        prev = v;
    }
    return changes;
}

double row_norm(const std::vector<double>& row) {
    double m = 0.0;
    for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

// Build the table once with the given sign for the epsilon substitution.
// Row at power p holds floor(p/2) + 1 entries.
RouthResult routh_with_epsilon(const Polynomial& p, double epsilon_sign) {
    const int n = p.degree();
    std::vector<double> r0, r1;  // rows at powers `power + 1` and `power`
    for (int k = n; k >= 0; k -= 2) r0.push_back(p.coeff(static_cast<std::size_t>(k)));
    for (int k = n - 1; k >= 0; k -= 2) r1.push_back(p.coeff(static_cast<std::size_t>(k)));

    RouthResult res;
    res.first_column.push_back(r0[0]);

    int power = n - 1;
    while (power >= 0 && !r1.empty()) {
        const double norm = row_norm(r1);
        if (norm == 0.0) {
            // Vanishing row: replace with the derivative of the auxiliary
            // polynomial formed from the row above (at power + 1).
            res.degenerate = true;
            for (std::size_t i = 0; i < r1.size(); ++i) {
                const int pw = power + 1 - 2 * static_cast<int>(i);
                r1[i] = i < r0.size() ? r0[i] * static_cast<double>(pw) : 0.0;
            }
            if (row_norm(r1) == 0.0) break;
        }
        if (std::abs(r1[0]) <= 1e-12 * row_norm(r1)) {
            res.degenerate = true;
            r1[0] = epsilon_sign * 1e-9 * row_norm(r1);
        }
        res.first_column.push_back(r1[0]);
        if (power == 0) break;

        const std::size_t next_len = static_cast<std::size_t>((power - 1) / 2) + 1;
        std::vector<double> next(next_len, 0.0);
        for (std::size_t i = 0; i < next_len; ++i) {
            const double a = (i + 1) < r0.size() ? r0[i + 1] : 0.0;
            const double b = (i + 1) < r1.size() ? r1[i + 1] : 0.0;
            next[i] = (r1[0] * a - r0[0] * b) / r1[0];
        }
        r0 = std::move(r1);
        r1 = std::move(next);
        --power;
    }

    res.sign_changes = count_sign_changes(res.first_column);
    return res;
}

}  // namespace

RouthResult routh(const Polynomial& p) {
    if (p.degree() < 1) {
        throw Error("routh: degree >= 1 with nonzero leading coefficient required");
    }
    RouthResult plus = routh_with_epsilon(p, +1.0);
    if (!plus.degenerate) return plus;
    // Both epsilon signs are tried; disagreement marks imaginary-axis
    // sensitivity and the larger right-half-plane estimate is kept.
    RouthResult minus = routh_with_epsilon(p, -1.0);
    return minus.sign_changes > plus.sign_changes ? minus : plus;
}

std::vector<std::pair<double, double>> stable_gm_intervals(const TransferFunction& plant,
                                                           const GmDesignFn& design_fn,
                                                           double gm_lo, double gm_hi,
                                                           int samples) {
    auto stable_at = [&](double gm) -> bool {
        std::optional<TransferFunction> c;
        try {
            c = design_fn(gm);
        } catch (const Error&) {
            return false;
        }
        if (!c) return false;
        try {
            const Polynomial cp = closed_loop_charpoly(*c, plant);
            if (cp.degree() < 1) return false;
            const RouthResult r = routh(cp);
            return !r.degenerate && r.sign_changes == 0;
        } catch (const Error&) {
            return false;
        }
    };

    const double step = std::log(gm_hi / gm_lo) / (samples - 1);
    std::vector<double> grid(samples);
    std::vector<char> ok(samples);
    for (int i = 0; i < samples; ++i) {
        grid[i] = gm_lo * std::exp(step * i);
        ok[i] = stable_at(grid[i]) ? 1 : 0;
    }

    auto refine = [&](double inside, double outside) {
        // keeps the invariant: stable_at(inside) == true
        for (int it = 0; it < 200 && std::abs(outside - inside) > 1e-6 * inside; ++it) {
            const double mid = std::sqrt(inside * outside);
            if (stable_at(mid)) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        return 0.5 * (inside + outside);
    };

    std::vector<std::pair<double, double>> intervals;
    int i = 0;
    while (i < samples) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < samples && ok[j + 1]) ++j;
        double lo = grid[i];
        double hi = grid[j];
        if (i > 0) lo = refine(grid[i], grid[i - 1]);
        if (j + 1 < samples) hi = refine(grid[j], grid[j + 1]);
        intervals.emplace_back(lo, hi);
        i = j + 1;
    }
    return intervals;
}

FrequencyGrid default_grid(const TransferFunction& loop) {
    FrequencyGrid g;
    auto widen = [&](const Polynomial& p) {
        if (p.degree() < 1) return;
        try {
            for (const Complex& r : poly_all_roots(p)) {
                const double m = std::abs(r);
                if (m < 1e-12) continue;
                g.lo = std::min(g.lo, m / 100.0);
                g.hi = std::max(g.hi, m * 100.0);
            }
        } catch (const ConvergenceFailure&) {
            // keep defaults
        }
    };
    widen(loop.num);
    widen(loop.den);
    return g;
}

namespace {

// Bisect f to a sign change over [a, b] (log-spaced midpoints); returns the
// refined abscissa.  f(a) and f(b) must already straddle zero.
template <typename F>
double bisect_log(F&& f, double a, double b, double fa) {
    for (int it = 0; it < 200 && (b - a) > 1e-13 * a; ++it) {
        const double mid = std::sqrt(a * b);
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return std::sqrt(a * b);
}

}  // namespace

namespace {

void dedupe_sorted(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || std::abs(x - out.back()) > 1e-9 * x) out.push_back(x);
    }
    xs = std::move(out);
}

// Locate the extremum of f on [a, c] by ternary search (f unimodal there).
template <typename F>
double ternary_extremum(F&& f, double a, double c, bool maximize) {
    for (int it = 0; it < 120 && (c - a) > 1e-14 * a; ++it) {
        const double m1 = a + (c - a) / 3.0;
        const double m2 = c - (c - a) / 3.0;
        const bool left = maximize ? f(m1) > f(m2) : f(m1) < f(m2);
        if (left) {
            c = m2;
        } else {
            a = m1;
        }
    }
    return 0.5 * (a + c);
}

}  // namespace

MarginReport measure_margins(const TransferFunction& loop, const FrequencyGrid& grid) {
    if (grid.lo <= 0.0 || grid.hi <= grid.lo || grid.samples < 2) {
        throw Error("measure_margins: bad frequency grid");
    }
    MarginReport rep;

    auto gain_excess = [&](double w) { return std::abs(tf_eval(loop, w)) - 1.0; };
    auto im_part = [&](double w) { return std::imag(tf_eval(loop, w)); };

    // base log grid plus dense windows around every pole/zero magnitude,
    // where resonances compress the response into narrow bands
    std::vector<double> ws;
    ws.reserve(static_cast<std::size_t>(grid.samples) + 512);
    const double step = std::log(grid.hi / grid.lo) / (grid.samples - 1);
    for (int i = 0; i < grid.samples; ++i) {
        ws.push_back(grid.lo * std::exp(step * i));
    }
    auto add_window = [&](const Polynomial& p) {
        if (p.degree() < 1) return;
        try {
            for (const Complex& r : poly_all_roots(p)) {
                const double m = std::abs(r);
                if (m < grid.lo * 1.06 || m > grid.hi / 1.06) continue;
                for (int i = 0; i <= 128; ++i) {
                    ws.push_back(0.95 * m * std::exp(std::log(1.05 / 0.95) * (i / 128.0)));
                }
            }
        } catch (const ConvergenceFailure&) {
        }
    };
    add_window(loop.num);
    add_window(loop.den);
    std::sort(ws.begin(), ws.end());

    std::vector<double> w_ok;
    std::vector<Complex> v_ok;
    w_ok.reserve(ws.size());
    v_ok.reserve(ws.size());
    for (double w : ws) {
        if (!w_ok.empty() && w - w_ok.back() <= 1e-15 * w) continue;
        try {
            v_ok.push_back(tf_eval(loop, w));
            w_ok.push_back(w);
        } catch (const EvalOnPole&) {
        }
    }

    // pass 1: transversal crossings (sign change across a cell)
    for (std::size_t i = 1; i < w_ok.size(); ++i) {
        const Complex& va = v_ok[i - 1];
        const Complex& vb = v_ok[i];
        if ((std::abs(va) < 1.0) != (std::abs(vb) < 1.0)) {
            rep.omega_g_list.push_back(
                bisect_log(gain_excess, w_ok[i - 1], w_ok[i], std::abs(va) - 1.0));
        }
        if (va.real() < 0.0 && vb.real() < 0.0 && (va.imag() < 0.0) != (vb.imag() < 0.0)) {
            rep.omega_p_list.push_back(bisect_log(im_part, w_ok[i - 1], w_ok[i], va.imag()));
        }
    }

    // pass 2: grazing double crossings.  A discrete local extremum whose
    // endpoints sit on one side of the target level may overshoot it inside
    // the cell pair; the refined extremum splits it into two bisections.
    for (std::size_t i = 1; i + 1 < w_ok.size(); ++i) {
        const double fa = std::abs(v_ok[i - 1]) - 1.0;
        const double fb = std::abs(v_ok[i]) - 1.0;
        const double fc = std::abs(v_ok[i + 1]) - 1.0;
        if ((fb - fa) * (fc - fb) < 0.0 && (fa < 0.0) == (fb < 0.0) &&
            (fb < 0.0) == (fc < 0.0) && std::abs(fb) < 0.3) {
            const bool maximize = fb > fa;
            const double wx = ternary_extremum(gain_excess, w_ok[i - 1], w_ok[i + 1], maximize);
            const double fx = gain_excess(wx);
            if ((fx < 0.0) != (fb < 0.0) && fx != 0.0) {
                rep.omega_g_list.push_back(bisect_log(gain_excess, w_ok[i - 1], wx, fa));
                rep.omega_g_list.push_back(bisect_log(gain_excess, wx, w_ok[i + 1], fx));
            }
        }
        if (v_ok[i - 1].real() < 0.0 && v_ok[i].real() < 0.0 && v_ok[i + 1].real() < 0.0) {
            const double ga = v_ok[i - 1].imag();
            const double gb = v_ok[i].imag();
            const double gc = v_ok[i + 1].imag();
            if ((gb - ga) * (gc - gb) < 0.0 && (ga < 0.0) == (gb < 0.0) &&
                (gb < 0.0) == (gc < 0.0) && std::abs(gb) < 0.3 * std::abs(v_ok[i])) {
                const bool maximize = gb > ga;
                const double wx = ternary_extremum(im_part, w_ok[i - 1], w_ok[i + 1], maximize);
                const double gx = im_part(wx);
                if ((gx < 0.0) != (gb < 0.0) && gx != 0.0) {
                    rep.omega_p_list.push_back(bisect_log(im_part, w_ok[i - 1], wx, ga));
                    rep.omega_p_list.push_back(bisect_log(im_part, wx, w_ok[i + 1], gx));
                }
            }
        }
    }

    dedupe_sorted(rep.omega_g_list);
    dedupe_sorted(rep.omega_p_list);

    if (!rep.omega_g_list.empty()) {
        rep.pm = wrap_angle(kPi + std::arg(tf_eval(loop, rep.omega_g_list.front())));
    } else {
        // |L| may touch 1 only at the very bottom of the grid (e.g. a DC
        // gain of exactly 1 decaying from there).
        try {
            if (std::abs(gain_excess(grid.lo)) < 1e-6) {
                rep.notes += "gain crossover at or below the grid lower bound; ";
            } else {
                rep.notes += "no gain crossover on the grid; ";
            }
        } catch (const EvalOnPole&) {
            rep.notes += "no gain crossover on the grid; ";
        }
    }
    if (!rep.omega_p_list.empty()) {
        rep.gm = 1.0 / std::abs(tf_eval(loop, rep.omega_p_list.front()));
    } else {
        rep.notes += "no phase crossover on the grid; ";
    }
    rep.well_defined = rep.omega_g_list.size() == 1 && rep.omega_p_list.size() == 1;
    return rep;
}

MarginReport measure_margins(const TransferFunction& loop) {
    return measure_margins(loop, default_grid(loop));
}

}  // namespace ctrlsyn
