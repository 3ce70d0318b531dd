#pragma once

#include <vector>

#include "ctrlsyn/targets.hpp"
#include "ctrlsyn/transfer_function.hpp"

namespace ctrlsyn {

/// Lead network K(1 + tau s)/(1 + alpha tau s), alpha in (0,1), tau > 0.
struct LeadParams {
    double gain = 1.0;  // DC gain K
    double alpha = 0.0;
    double tau = 0.0;  // seconds
};

/// Lag network K(1 + alpha tau s)/(1 + tau s).
struct LagParams {
    double gain = 1.0;
    double alpha = 0.0;
    double tau = 0.0;
};

/// Lead-lag with real poles/zeros:
/// K(1 + tau1 s)(1 + tau2 s) / ((1 + alpha tau1 s)(1 + (tau2/alpha) s)).
struct LeadLagRealParams {
    double gain = 1.0;
    double alpha = 0.0;  // (0,1) except in the flagged-degenerate conversion case
    double tau1 = 0.0;
    double tau2 = 0.0;
};

/// Lead-lag with complex poles/zeros:
/// K(s^2 + 2 zeta1 wn s + wn^2) / (s^2 + 2 zeta2 wn s + wn^2).
struct LeadLagComplexParams {
    double gain = 1.0;
    double zeta1 = 0.0;
    double zeta2 = 0.0;
    double omega_n = 0.0;  // rad/s
};

/// Solution of (1 + jP)/(1 + jQ) = M e^{j phi}.
struct PQPair {
    double P = 0.0;
    double Q = 0.0;
};

/// Diagnostics of the phase-crossover search in design_leadlag.
struct LeadLagSearch {
    double gamma = 0.0;  // (M_g - cos phi_g)/(cos phi_g - 1/M_g)
    double H = 0.0;      // gm * (error constant of the gain-folded plant)
    std::vector<double> omega_p_candidates;  // every positive crossover-equation root
};

/// Real-form conversion result; alpha_degenerate marks the zeta1 == zeta2
/// case where the unity network admits the tau pair with alpha pinned at 1.
struct RealFormResult {
    LeadLagRealParams params;
    bool alpha_degenerate = false;
};

/// One accepted phase-crossover frequency with its network parameters.
struct LeadLagCandidate {
    double omega_p = 0.0;
    double phi1 = 0.0, phi2 = 0.0;  // Phi_1, Phi_2
    double psi1 = 0.0, psi2 = 0.0;  // Psi_1, Psi_2
    LeadLagComplexParams complex_form;
    std::vector<RealFormResult> real_forms;  // present iff zeta1 > 1 and zeta2 > 1
};

struct LeadLagDesign {
    LeadLagSearch search;
    std::vector<LeadLagCandidate> candidates;  // sorted by |omega_p - omega_g| ascending
};

/// P = (M - cos phi)/sin phi,  Q = (M cos phi - 1)/(M sin phi).
/// Throws DegeneratePhase when |sin phi| < 1e-12.
PQPair solve_pq(double m, double phi);

/// Lead inversion formulae; requires 0 < phi < pi/2 and M cos phi > 1
/// (strict), otherwise Infeasible.  Returned gain is 1.
LeadParams design_lead(const DesignTargets& targets);

/// Lag inversion formulae; requires -pi/2 < phi < 0 and M < cos phi.
LagParams design_lag(const DesignTargets& targets);

/// P(w) = 2 zeta1 w wn / (wn^2 - w^2), Q(w) likewise with zeta2.
/// Throws ResonanceFrequency when |w - wn| < 1e-12 * wn.
PQPair leadlag_response_pq(const LeadLagComplexParams& params, double omega);

/// Polynomial in w whose positive real roots are the phase-crossover
/// frequencies compatible with the gain-crossover ratio gamma:
/// gamma*gm*(A + gm*B) + E + gm*A with (A,B,E) = even_components(gbar).
/// Requires delay == 0 (DelayUnsupported).
Polynomial build_omega_p_equation(const TransferFunction& gbar, double gm, double gamma);

/// Full lead-lag synthesis for assigned (omega_g, PM, GM): solves the
/// crossover equation (polynomially for rational plants, by sampling and
/// bisection when a dead time is present), filters candidates by the
/// same-sign condition on Phi/Psi, and returns all feasible networks.
/// Throws NoFeasibleCrossover when nothing survives.
LeadLagDesign design_leadlag(const TransferFunction& gbar, double omega_g, double pm, double gm);

/// zeta1 = (t1+t2)/(2 sqrt(t1 t2)), zeta2 = (a t1 + t2/a)/(2 sqrt(t1 t2)),
/// wn = 1/sqrt(t1 t2).
LeadLagComplexParams leadlag_real_to_complex(const LeadLagRealParams& p);

/// Inverse conversion; requires zeta1 > 1 and zeta2 > 1
/// (RealFormUnavailable otherwise).  zeta1 < zeta2 yields one solution,
/// zeta1 > zeta2 two, zeta1 == zeta2 the degenerate-alpha tau pair.
std::vector<RealFormResult> leadlag_complex_to_real(const LeadLagComplexParams& p);

}  // namespace ctrlsyn
