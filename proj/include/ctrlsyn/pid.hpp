#pragma once

#include <utility>
#include <vector>

#include "ctrlsyn/targets.hpp"
#include "ctrlsyn/transfer_function.hpp"

namespace ctrlsyn {

/// K_p (1 + 1/(T_i s) + T_d s) with all parameters strictly positive.
/// The zeros are the roots of 1 + T_i s + T_i T_d s^2, real iff T_i >= 4 T_d.
struct PidParams {
    double kp = 0.0;
    double ti = 0.0;  // seconds
    double td = 0.0;  // seconds

    double ki() const { return kp / ti; }  // integration constant K_p/T_i
};

/// K_p (1 + 1/(T_i s)).
struct PiParams {
    double kp = 0.0;
    double ti = 0.0;
};

/// K_p (1 + T_d s).
struct PdParams {
    double kp = 0.0;
    double td = 0.0;
};

struct PidGmCandidate {
    PidParams params;
    double omega_p = 0.0;
};

/// PID with the zero ratio sigma = T_d/T_i assigned.  Solvable iff
/// phi in (-pi/2, pi/2):
///   K_p = M cos phi
///   T_i = (tan phi + sqrt(tan^2 phi + 4 sigma)) / (2 omega sigma)
///   T_d = sigma T_i
PidParams design_pid_sigma(const DesignTargets& targets, double sigma);

/// PID with T_i assigned; K_p = M cos phi and
/// T_d = (1 + omega T_i tan phi)/(T_i omega^2).  Feasible for phi = 0 with
/// any T_i, or phi in (-pi/2, 0) with T_i < -1/(omega tan phi).
PidParams design_pid_fix_ti(const DesignTargets& targets, double ti);

/// PID with T_d assigned; T_i = 1/(omega^2 T_d - omega tan phi).
/// T_d is arbitrary for phi in (-pi/2, 0]; phi in (0, pi/2) requires
/// T_d > tan phi / omega.
PidParams design_pid_fix_td(const DesignTargets& targets, double td);

/// PID realizing gain crossover, phase margin and gain margin at once: the
/// phase-crossover frequency solves M_g cos phi_g = M_p(w) cos phi_p(w)
/// (a polynomial equation for rational plants, sampled and bisected when a
/// dead time is present).  Candidates must satisfy the ordering conditions
/// that make T_i, T_d positive.  Returns all solutions sorted by
/// |omega_p - omega_g|; throws NoFeasibleCrossover when none survives.
std::vector<PidGmCandidate> design_pid_gm(const TransferFunction& gbar, double omega_g, double pm,
                                          double gm);

/// PID with the integration constant K_i = K_p/T_i fixed by steady-state
/// requirements; expects targets from pid_targets_constrained_ki.
/// Solvable iff 0 < phi < pi and M cos phi < 1:
///   T_i = M sin phi / omega,  T_d = (1 - M cos phi)/(omega M sin phi),
///   K_p = K_i T_i.
PidParams design_pid_ki(const DesignTargets& targets, double ki);

/// PD restriction: K_p = M cos phi, T_d = tan phi / omega;
/// admissible region phi in (0, pi/2).
PdParams design_pd(const DesignTargets& targets);

/// PI restriction: K_p = M cos phi, T_i = -1/(omega tan phi);
/// admissible region phi in (-pi/2, 0).
PiParams design_pi(const DesignTargets& targets);

/// Roots of 1 + T_i s + T_i T_d s^2 (the controller zeros).
std::pair<Complex, Complex> pid_zeros(const PidParams& p);

}  // namespace ctrlsyn
