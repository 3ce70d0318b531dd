#include "ctrlsyn/pid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bracket_scan.hpp"
#include "ctrlsyn/errors.hpp"

namespace ctrlsyn {

namespace {

using detail::bracket_scan;

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// tan phi as sin/cos from the wrapped angle; rejects |cos phi| < 1e-12.
double safe_tan(double phi, const char* who) {
    const double c = std::cos(phi);
    if (std::abs(c) < 1e-12) {
        throw Infeasible(InfeasibleKind::Degenerate,
                         std::string(who) + ": |cos phi| < 1e-12, tan phi is not usable");
    }
    return std::sin(phi) / c;
}

}  // namespace

PidParams design_pid_sigma(const DesignTargets& t, double sigma) {
    if (sigma <= 0.0) {
        throw Error("design_pid_sigma: sigma must be positive");
    }
    if (!(t.phi > -kHalfPi && t.phi < kHalfPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pid_sigma: phi must lie in (-pi/2, pi/2)");
    }
    const double tanphi = safe_tan(t.phi, "design_pid_sigma");
    PidParams p;
    p.kp = t.M * std::cos(t.phi);
    p.ti = (tanphi + std::sqrt(tanphi * tanphi + 4.0 * sigma)) / (2.0 * t.omega * sigma);
    p.td = p.ti * sigma;
    return p;
}

PidParams design_pid_fix_ti(const DesignTargets& t, double ti) {
    if (ti <= 0.0) {
        throw Error("design_pid_fix_ti: T_i must be positive");
    }
    const double c = std::cos(t.phi);
    if (!(c > 1e-12)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pid_fix_ti: cos phi > 0 required");
    }
    const double tanphi = std::sin(t.phi) / c;
    if (std::abs(tanphi) > 1e-12) {
        // Assigning T_i freely is only admissible for phi in (-pi/2, 0),
        // where T_i must stay below -1/(omega tan phi).
        if (t.phi > 0.0) {
            throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                             "design_pid_fix_ti: assigning T_i requires phi in (-pi/2, 0)");
        }
        const double bound = -1.0 / (t.omega * tanphi);
        if (!(ti < bound)) {
            std::ostringstream os;
            os << "design_pid_fix_ti: T_i must be smaller than -1/(omega tan phi) = " << bound;
            throw Infeasible(InfeasibleKind::BoundViolated, os.str());
        }
    }
    PidParams p;
    p.kp = t.M * c;
    p.ti = ti;
    p.td = (1.0 + t.omega * ti * tanphi) / (ti * t.omega * t.omega);
    return p;
}

PidParams design_pid_fix_td(const DesignTargets& t, double td) {
    if (td <= 0.0) {
        throw Error("design_pid_fix_td: T_d must be positive");
    }
    const double c = std::cos(t.phi);
    if (!(c > 1e-12)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pid_fix_td: cos phi > 0 required");
    }
    const double tanphi = std::sin(t.phi) / c;
    const double denom = t.omega * t.omega * td - t.omega * tanphi;
    // the bound is strict; treat the floating boundary itself as violated
    if (!(denom > 1e-12 * t.omega * t.omega * td)) {
        std::ostringstream os;
        os << "design_pid_fix_td: T_d must exceed tan phi / omega = " << tanphi / t.omega;
        throw Infeasible(InfeasibleKind::BoundViolated, os.str());
    }
    PidParams p;
    p.kp = t.M * c;
    p.ti = 1.0 / denom;
    p.td = td;
    return p;
}

std::vector<PidGmCandidate> design_pid_gm(const TransferFunction& gbar, double omega_g, double pm,
                                          double gm) {
    const DesignTargets tg = targets_at_gain_crossover(gbar, omega_g, pm);
    if (!(tg.phi > -kHalfPi && tg.phi < kHalfPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pid_gm: phi_g must lie in (-pi/2, pi/2)");
    }
    const double tan_g = safe_tan(tg.phi, "design_pid_gm");
    const double kp = tg.M * std::cos(tg.phi);  // = M_p cos phi_p at every crossover candidate

    std::vector<double> roots;
    if (gbar.delay == 0.0) {
        // M_p cos phi_p = -A/(gm B) cleared of denominators.
        const EvenComponents ec = even_components(gbar);
        const Polynomial eq = ec.B * (kp * gm) + ec.A;
        if (eq.degree() >= 1) {
            roots = poly_real_roots_positive(eq);
            const Polynomial deq = eq.derivative();
            for (double& r : roots) {
                for (int it = 0; it < 4; ++it) {
                    const double d = deq.eval(r);
                    if (d == 0.0) break;
                    r -= eq.eval(r) / d;
                }
            }
        }
    } else {
        auto residual = [&](double w) {
            const DesignTargets tp = targets_at_phase_crossover(gbar, w, gm);
            return kp - tp.M * std::cos(tp.phi);
        };
        roots = bracket_scan(residual, omega_g * 1e-3, omega_g * 1e3, 10000);
    }

    std::vector<PidGmCandidate> out;
    for (double wp : roots) {
        // T_i and T_d share the vanishing factor w_g^2 - w_p^2.
        if (std::abs(wp - omega_g) < 1e-9 * omega_g) continue;
        const DesignTargets tp = targets_at_phase_crossover(gbar, wp, gm);
        double tan_p;
        try {
            tan_p = safe_tan(tp.phi, "design_pid_gm");
        } catch (const Infeasible&) {
            continue;
        }
        const bool lower = wp < omega_g && omega_g * tan_g > wp * tan_p &&
                           wp * tan_g > omega_g * tan_p;
        const bool upper = wp > omega_g && omega_g * tan_g < wp * tan_p &&
                           wp * tan_g < omega_g * tan_p;
        if (!lower && !upper) continue;

        PidGmCandidate cand;
        cand.omega_p = wp;
        cand.params.kp = kp;
        cand.params.ti = (omega_g * omega_g - wp * wp) /
                         (omega_g * wp * (wp * tan_g - omega_g * tan_p));
        cand.params.td = (omega_g * tan_g - wp * tan_p) / (omega_g * omega_g - wp * wp);
        if (!(cand.params.kp > 0.0 && cand.params.ti > 0.0 && cand.params.td > 0.0)) continue;
        out.push_back(cand);
    }

    std::sort(out.begin(), out.end(), [&](const PidGmCandidate& a, const PidGmCandidate& b) {
        return std::abs(a.omega_p - omega_g) < std::abs(b.omega_p - omega_g);
    });
    if (out.empty()) {
        throw NoFeasibleCrossover(
            "design_pid_gm: no phase-crossover candidate satisfies the ordering conditions");
    }
    return out;
}

PidParams design_pid_ki(const DesignTargets& t, double ki) {
    if (ki <= 0.0) {
        throw Error("design_pid_ki: K_i must be positive");
    }
    if (!(t.phi > 0.0 && t.phi < kPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pid_ki: phi must lie in (0, pi)");
    }
    const double c = std::cos(t.phi);
    if (!(t.M * c < 1.0)) {
        throw Infeasible(InfeasibleKind::MagnitudeInsufficient,
                         "design_pid_ki: M cos phi < 1 required");
    }
    const double s = std::sin(t.phi);
    PidParams p;
    p.ti = t.M * s / t.omega;
    p.td = (1.0 - t.M * c) / (t.omega * t.M * s);
    p.kp = ki * p.ti;
    return p;
}

PdParams design_pd(const DesignTargets& t) {
    if (!(t.phi > 0.0 && t.phi < kHalfPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pd: phi must lie in (0, pi/2)");
    }
    PdParams p;
    p.kp = t.M * std::cos(t.phi);
    p.td = std::tan(t.phi) / t.omega;
    return p;
}

PiParams design_pi(const DesignTargets& t) {
    if (!(t.phi > -kHalfPi && t.phi < 0.0)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_pi: phi must lie in (-pi/2, 0)");
    }
    PiParams p;
    p.kp = t.M * std::cos(t.phi);
    p.ti = -1.0 / (t.omega * std::tan(t.phi));
    return p;
}

std::pair<Complex, Complex> pid_zeros(const PidParams& p) {
    // roots of ti*td s^2 + ti s + 1
    const double a = p.ti * p.td;
    const double b = p.ti;
    const double disc = b * b - 4.0 * a;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        return {Complex((-b - sq) / (2.0 * a), 0.0), Complex((-b + sq) / (2.0 * a), 0.0)};
    }
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-disc) / (2.0 * a);
    return {Complex(re, -im), Complex(re, im)};
}

}  // namespace ctrlsyn
