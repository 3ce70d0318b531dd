#pragma once

#include <string>

#include "ctrlsyn/transfer_function.hpp"

namespace ctrlsyn {

/// Principal value in (-pi, pi].
double wrap_angle(double theta);

/// Which steady-state quantity is being assigned.
enum class SteadyStateKind {
    ErrorConstant,  // assign K_p / K_v / K_a directly
    ErrorValue,     // assign e_p / e_v / e_a (reciprocal of the constant)
};

/// Steady-state requirement: `order` 0/1/2 selects the position, velocity
/// or acceleration constant and must match the plant type.
struct SteadyStateSpec {
    SteadyStateKind kind = SteadyStateKind::ErrorConstant;
    int order = 0;
    double value = 1.0;  // > 0
};

/// The (M, phi, omega) triple a compensator must realize at one frequency:
/// C(j*omega) = M * e^{j*phi} with phi wrapped to (-pi, pi].
struct DesignTargets {
    double M = 1.0;       // > 0
    double phi = 0.0;     // radians in (-pi, pi]
    double omega = 1.0;   // rad/s, > 0
};

/// Truth values of the admissible-region inequalities for each compensator
/// family at a given (M, phi).  All inequalities are strict.
struct FeasibilityReport {
    bool lead = false;              // phi in (0, pi/2) and M cos phi > 1
    bool lag = false;               // phi in (-pi/2, 0) and cos phi > M
    bool leadlag_z1_gt_z2 = false;  // phi in (-pi/2, pi/2) and M cos phi > 1
    bool leadlag_z2_gt_z1 = false;  // phi in (-pi/2, pi/2) and cos phi > M
    bool pid = false;               // phi in (-pi/2, pi/2)   (sigma form)
    bool pd = false;                // phi in (0, pi/2)
    bool pi = false;                // phi in (-pi/2, 0)
    std::string notes;
};

/// DC gain K of a unity-DC-gain compensation so the requested error
/// constant (or error value) is met: K = value / lim s^order G(s) for an
/// error constant, K = 1 / (value * lim) for an error value.
/// Throws TypeMismatch when the plant type differs from spec.order and
/// NonpositiveGain when the limit forces K <= 0.
double dc_gain_from_spec(const TransferFunction& plant, const SteadyStateSpec& spec);

/// Targets forcing |L(j w_g)| = 1 and arg L(j w_g) = PM - pi for the loop
/// L = Cbar * Gbar:  M = 1/|Gbar|, phi = wrap(PM - pi - arg Gbar).
DesignTargets targets_at_gain_crossover(const TransferFunction& gbar, double omega_g, double pm);

/// Targets forcing |L(j w_p)| = 1/GM and arg L(j w_p) = -pi:
/// M = 1/(GM |Gbar|), phi = wrap(-pi - arg Gbar).
DesignTargets targets_at_phase_crossover(const TransferFunction& gbar, double omega_p, double gm);

/// Targets for the PID whose integration constant K_i = K_p/T_i is fixed by
/// the steady-state requirements.  The factor K_i/s is viewed as part of
/// the plant, so M = w_g / (K_i |G(j w_g)|) and
/// phi = wrap(PM - pi/2 - arg G(j w_g)).
DesignTargets pid_targets_constrained_ki(const TransferFunction& plant, double omega_g, double pm,
                                         double ki);

struct PmRange {
    double pm_min;  // radians; open interval (pm_min, pm_max)
    double pm_max;
};

/// Open interval of phase margins a lead network can realize at omega_g.
/// Requires |Gbar(j w_g)| < 1, otherwise InfeasibleAtFrequency.
PmRange pm_range_lead(const TransferFunction& gbar, double omega_g);

/// Open interval of phase margins a lag network can realize at omega_g.
/// Requires |Gbar(j w_g)| > 1.
PmRange pm_range_lag(const TransferFunction& gbar, double omega_g);

/// Classify (M, phi) against the admissible region of every family.
FeasibilityReport classify(const DesignTargets& targets);

}  // namespace ctrlsyn
