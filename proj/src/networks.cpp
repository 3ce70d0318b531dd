#include "ctrlsyn/networks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bracket_scan.hpp"
#include "ctrlsyn/errors.hpp"

namespace ctrlsyn {

namespace {

using detail::bracket_scan;

constexpr double kHalfPi = std::numbers::pi / 2.0;

Complex unit_phasor(double m, double phi) { return std::polar(m, phi); }

Complex pq_response(const PQPair& pq) {
    return Complex(1.0, pq.P) / Complex(1.0, pq.Q);
}

void polish_real_root(const Polynomial& p, const Polynomial& dp, double& r) {
    for (int it = 0; it < 4; ++it) {
        const double d = dp.eval(r);
        if (d == 0.0) return;
        r -= p.eval(r) / d;
    }
}

}  // namespace

PQPair solve_pq(double m, double phi) {
    const double s = std::sin(phi);
    if (std::abs(s) < 1e-12) {
        throw DegeneratePhase("solve_pq: |sin phi| < 1e-12, compensator reduces to a pure gain");
    }
    const double c = std::cos(phi);
    return {(m - c) / s, (m * c - 1.0) / (m * s)};
}

LeadParams design_lead(const DesignTargets& t) {
    const double c = std::cos(t.phi);
    if (!(t.phi > 0.0 && t.phi < kHalfPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_lead: phi must lie in (0, pi/2)");
    }
    if (!(t.M * c > 1.0)) {
        throw Infeasible(InfeasibleKind::MagnitudeInsufficient,
                         "design_lead: M cos phi > 1 required (M > 1/cos phi)");
    }
    const double s = std::sin(t.phi);
    LeadParams p;
    p.alpha = (t.M * c - 1.0) / (t.M * (t.M - c));
    p.tau = (t.M - c) / (t.omega * s);
    return p;
}

LagParams design_lag(const DesignTargets& t) {
    const double c = std::cos(t.phi);
    if (!(t.phi > -kHalfPi && t.phi < 0.0)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_lag: phi must lie in (-pi/2, 0)");
    }
    if (!(t.M < c)) {
        throw Infeasible(InfeasibleKind::MagnitudeInsufficient,
                         "design_lag: M < cos phi required");
    }
    const double s = std::sin(t.phi);
    LagParams p;
    p.alpha = t.M * (c - t.M) / (1.0 - t.M * c);
    p.tau = (t.M * c - 1.0) / (t.omega * t.M * s);
    return p;
}

PQPair leadlag_response_pq(const LeadLagComplexParams& params, double omega) {
    if (std::abs(omega - params.omega_n) < 1e-12 * params.omega_n) {
        throw ResonanceFrequency("leadlag_response_pq: omega coincides with omega_n");
    }
    const double denom = params.omega_n * params.omega_n - omega * omega;
    const double common = 2.0 * omega * params.omega_n / denom;
    return {params.zeta1 * common, params.zeta2 * common};
}

Polynomial build_omega_p_equation(const TransferFunction& gbar, double gm, double gamma) {
    if (gbar.delay != 0.0) {
        throw DelayUnsupported(
            "build_omega_p_equation: dead-time plants need the sampled crossover search");
    }
    const EvenComponents ec = even_components(gbar);
    return ec.A * (gamma * gm + gm) + ec.B * (gamma * gm * gm) + ec.E;
}

namespace {

// Error constant of gbar (lim s^type Gbar); NaN when undefined.
double error_constant(const TransferFunction& gbar) {
    try {
        const int type = system_type(gbar);
        return gbar.num.coeff(0) / gbar.den.coeff(static_cast<std::size_t>(type));
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Phase crossovers of gbar itself (arg = -pi), for the identity-compensator
// degenerate path.
std::vector<double> plant_phase_crossovers(const TransferFunction& gbar, double omega_g) {
    auto im_on_negative_axis = [&](double w) {
        const Complex g = tf_eval(gbar, w);
        if (g.real() >= 0.0) throw Error("off the negative real axis");
        return std::imag(g);
    };
    return bracket_scan(im_on_negative_axis, omega_g * 1e-3, omega_g * 1e3, 10000);
}

}  // namespace

LeadLagDesign design_leadlag(const TransferFunction& gbar, double omega_g, double pm, double gm) {
    const DesignTargets tg = targets_at_gain_crossover(gbar, omega_g, pm);
    if (!(tg.phi > -kHalfPi && tg.phi < kHalfPi)) {
        throw Infeasible(InfeasibleKind::PhaseOutOfRange,
                         "design_leadlag: phi_g must lie in (-pi/2, pi/2)");
    }

    LeadLagDesign out;
    out.search.H = gm * error_constant(gbar);

    const double cg = std::cos(tg.phi);

    // Plant already meets both margins: the unity compensator solves the
    // problem and the zeta expressions degenerate.
    if (std::abs(tg.M - 1.0) <= 1e-9 && std::abs(tg.phi) <= 1e-9) {
        out.search.gamma = 0.0;
        for (double wp : plant_phase_crossovers(gbar, omega_g)) {
            const DesignTargets tp = targets_at_phase_crossover(gbar, wp, gm);
            if (std::abs(tp.M - 1.0) <= 1e-9 && std::abs(tp.phi) <= 1e-9) {
                LeadLagCandidate cand;
                cand.omega_p = wp;
                cand.complex_form = {1.0, 1.0, 1.0, std::sqrt(omega_g * wp)};
                out.search.omega_p_candidates.push_back(wp);
                out.candidates.push_back(std::move(cand));
            }
        }
        if (out.candidates.empty()) {
            throw NoFeasibleCrossover(
                "design_leadlag: unity gain-crossover targets but no matching phase crossover");
        }
        return out;
    }

    if (std::abs(std::sin(tg.phi)) < 1e-12) {
        throw Infeasible(InfeasibleKind::Degenerate,
                         "design_leadlag: phi_g = 0 with M_g != 1 requires a pure gain != 1");
    }
    if (std::abs(cg - 1.0 / tg.M) < 1e-12) {
        throw Infeasible(InfeasibleKind::Degenerate,
                         "design_leadlag: cos phi_g = 1/M_g is on the feasibility boundary");
    }

    const double gamma = (tg.M - cg) / (cg - 1.0 / tg.M);
    out.search.gamma = gamma;

    std::vector<double> roots;
    if (gbar.delay == 0.0) {
        const Polynomial eq = build_omega_p_equation(gbar, gm, gamma);
        if (eq.degree() >= 1) {
            roots = poly_real_roots_positive(eq);
            const Polynomial deq = eq.derivative();
            for (double& r : roots) polish_real_root(eq, deq, r);
        }
    } else {
        auto residual = [&](double w) {
            const DesignTargets tp = targets_at_phase_crossover(gbar, w, gm);
            const double cp = std::cos(tp.phi);
            return gamma * (cp - 1.0 / tp.M) - (tp.M - cp);
        };
        roots = bracket_scan(residual, omega_g * 1e-3, omega_g * 1e3, 10000);
    }
    out.search.omega_p_candidates = roots;

    const PQPair pqg = solve_pq(tg.M, tg.phi);
    if (std::abs(pqg.P) < 1e-300 || std::abs(pqg.Q) < 1e-300) {
        throw Infeasible(InfeasibleKind::Degenerate,
                         "design_leadlag: gain-crossover targets sit on a region boundary");
    }

    for (double wp : roots) {
        if (std::abs(wp - omega_g) < 1e-9 * omega_g) continue;
        const DesignTargets tp = targets_at_phase_crossover(gbar, wp, gm);
        if (std::abs(std::sin(tp.phi)) < 1e-12) continue;
        const PQPair pqp = solve_pq(tp.M, tp.phi);
        if (std::abs(pqp.P) < 1e-300 || std::abs(pqp.Q) < 1e-300) continue;

        LeadLagCandidate cand;
        cand.omega_p = wp;
        cand.phi1 = omega_g / pqp.P - wp / pqg.P;
        cand.phi2 = wp / pqp.P - omega_g / pqg.P;
        cand.psi1 = omega_g / pqp.Q - wp / pqg.Q;
        cand.psi2 = wp / pqp.Q - omega_g / pqg.Q;

        // All four must share the sign dictated by the crossover ordering.
        const bool want_positive = wp < omega_g;
        auto sign_ok = [&](double v) { return want_positive ? v > 0.0 : v < 0.0; };
        if (!(sign_ok(cand.phi1) && sign_ok(cand.phi2) && sign_ok(cand.psi1) &&
              sign_ok(cand.psi2))) {
            continue;
        }

        const double wg2_wp2 = omega_g * omega_g - wp * wp;
        const double rad1 = cand.phi2 / (omega_g * wp * cand.phi1);
        const double rad2 = cand.psi2 / (omega_g * wp * cand.psi1);
        const double radn = omega_g * wp * cand.phi1 / cand.phi2;
        if (rad1 <= 0.0 || rad2 <= 0.0 || radn <= 0.0) continue;

        LeadLagComplexParams cp;
        cp.zeta1 = wg2_wp2 / (2.0 * cand.phi2) * std::sqrt(rad1);
        cp.zeta2 = wg2_wp2 / (2.0 * cand.psi2) * std::sqrt(rad2);
        cp.omega_n = std::sqrt(radn);
        if (!(cp.zeta1 > 0.0 && cp.zeta2 > 0.0 && cp.omega_n > 0.0)) continue;
        cand.complex_form = cp;

        // Round trip: the constructed network must reproduce both target
        // phasors before the candidate is reported.
        try {
            const Complex resp_g = pq_response(leadlag_response_pq(cp, omega_g));
            const Complex resp_p = pq_response(leadlag_response_pq(cp, wp));
            if (std::abs(resp_g - unit_phasor(tg.M, tg.phi)) > 1e-9 * tg.M) continue;
            if (std::abs(resp_p - unit_phasor(tp.M, tp.phi)) > 1e-7 * tp.M) continue;
        } catch (const ResonanceFrequency&) {
            continue;  // omega_n collapsed onto a crossover frequency
        }

        if (cp.zeta1 > 1.0 && cp.zeta2 > 1.0) {
            cand.real_forms = leadlag_complex_to_real(cp);
        }
        out.candidates.push_back(std::move(cand));
    }

    std::sort(out.candidates.begin(), out.candidates.end(),
              [&](const LeadLagCandidate& a, const LeadLagCandidate& b) {
                  return std::abs(a.omega_p - omega_g) < std::abs(b.omega_p - omega_g);
              });
    if (out.candidates.empty()) {
        throw NoFeasibleCrossover(
            "design_leadlag: no crossover frequency satisfies the same-sign condition");
    }
    return out;
}

LeadLagComplexParams leadlag_real_to_complex(const LeadLagRealParams& p) {
    const double g = std::sqrt(p.tau1 * p.tau2);
    LeadLagComplexParams c;
    c.gain = p.gain;
    c.zeta1 = (p.tau1 + p.tau2) / (2.0 * g);
    c.zeta2 = (p.alpha * p.tau1 + p.tau2 / p.alpha) / (2.0 * g);
    c.omega_n = 1.0 / g;
    return c;
}

std::vector<RealFormResult> leadlag_complex_to_real(const LeadLagComplexParams& p) {
    if (!(p.zeta1 > 1.0) || !(p.zeta2 > 1.0)) {
        throw RealFormUnavailable("leadlag_complex_to_real: requires zeta1 > 1 and zeta2 > 1");
    }
    const double z1p = p.zeta1 + std::sqrt(p.zeta1 * p.zeta1 - 1.0);
    const double z1m = p.zeta1 - std::sqrt(p.zeta1 * p.zeta1 - 1.0);
    const double z2p = p.zeta2 + std::sqrt(p.zeta2 * p.zeta2 - 1.0);
    const double z2m = p.zeta2 - std::sqrt(p.zeta2 * p.zeta2 - 1.0);

    std::vector<RealFormResult> out;
    auto push = [&](double alpha, double tau1, double tau2, bool degenerate) {
        RealFormResult r;
        r.params = {p.gain, alpha, tau1, tau2};
        r.alpha_degenerate = degenerate;
        out.push_back(r);
    };

    if (std::abs(p.zeta1 - p.zeta2) <= 1e-12 * std::max(p.zeta1, p.zeta2)) {
        // Unity network: any alpha cancels, pinned at the excluded value 1.
        push(1.0, z1p / p.omega_n, z1m / p.omega_n, true);
    } else if (p.zeta1 < p.zeta2) {
        push(z2m / z1m, z1m / p.omega_n, z1p / p.omega_n, false);
    } else {
        push(z2m / z1p, z1p / p.omega_n, z1m / p.omega_n, false);
        push(z2p / z1p, z1p / p.omega_n, z1m / p.omega_n, false);
    }
    return out;
}

}  // namespace ctrlsyn
