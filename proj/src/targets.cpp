#include "ctrlsyn/targets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ctrlsyn/errors.hpp"

namespace ctrlsyn {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
}  // namespace

double wrap_angle(double theta) {
    double w = std::remainder(theta, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;  // remainder lands in [-pi, pi]; move -pi to +pi
    return w;
}

double dc_gain_from_spec(const TransferFunction& plant, const SteadyStateSpec& spec) {
    if (spec.value <= 0.0) {
        throw Error("dc_gain_from_spec: steady-state value must be positive");
    }
    const int type = system_type(plant);
    if (type != spec.order) {
        std::ostringstream os;
        os << "dc_gain_from_spec: plant type " << type << " does not match spec order "
           << spec.order;
        throw TypeMismatch(os.str());
    }
    // With den = s^type * dtil(s), lim s^order G(s) = num(0) / dtil(0).
    const double lim = plant.num.coeff(0) / plant.den.coeff(static_cast<std::size_t>(type));
    const double k = spec.kind == SteadyStateKind::ErrorConstant ? spec.value / lim
                                                                 : 1.0 / (spec.value * lim);
    if (!(k > 0.0)) {
        throw NonpositiveGain("dc_gain_from_spec: required DC gain is not positive");
    }
    return k;
}

DesignTargets targets_at_gain_crossover(const TransferFunction& gbar, double omega_g, double pm) {
    const Complex g = tf_eval(gbar, omega_g);
    const double mag = std::abs(g);
    if (mag == 0.0) {
        throw EvalOnPole("targets_at_gain_crossover: Gbar(j w_g) = 0");
    }
    return {1.0 / mag, wrap_angle(pm - kPi - std::arg(g)), omega_g};
}

DesignTargets targets_at_phase_crossover(const TransferFunction& gbar, double omega_p, double gm) {
    const Complex g = tf_eval(gbar, omega_p);
    const double mag = std::abs(g);
    if (mag == 0.0) {
        throw EvalOnPole("targets_at_phase_crossover: Gbar(j w_p) = 0");
    }
    return {1.0 / (gm * mag), wrap_angle(-kPi - std::arg(g)), omega_p};
}

DesignTargets pid_targets_constrained_ki(const TransferFunction& plant, double omega_g, double pm,
                                         double ki) {
    if (ki <= 0.0) {
        throw Error("pid_targets_constrained_ki: K_i must be positive");
    }
    const Complex g = tf_eval(plant, omega_g);
    const double mag = std::abs(g);
    if (mag == 0.0) {
        throw EvalOnPole("pid_targets_constrained_ki: G(j w_g) = 0");
    }
    return {omega_g / (ki * mag), wrap_angle(pm - kHalfPi - std::arg(g)), omega_g};
}

PmRange pm_range_lead(const TransferFunction& gbar, double omega_g) {
    const Complex g = tf_eval(gbar, omega_g);
    const double mag = std::abs(g);
    if (mag >= 1.0) {
        throw InfeasibleAtFrequency(
            "pm_range_lead: |Gbar(j w_g)| >= 1, a lead network cannot place the gain crossover "
            "here");
    }
    const double pm_min = wrap_angle(kPi + std::arg(g));
    return {pm_min, pm_min + std::acos(mag)};
}

PmRange pm_range_lag(const TransferFunction& gbar, double omega_g) {
    const Complex g = tf_eval(gbar, omega_g);
    const double mag = std::abs(g);
    if (mag <= 1.0) {
        throw InfeasibleAtFrequency(
            "pm_range_lag: |Gbar(j w_g)| <= 1, a lag network cannot place the gain crossover "
            "here");
    }
    const double pm_max = wrap_angle(kPi + std::arg(g));
    return {pm_max - std::acos(1.0 / mag), pm_max};
}

FeasibilityReport classify(const DesignTargets& t) {
    FeasibilityReport r;
    const double c = std::cos(t.phi);
    const bool right_half = t.phi > -kHalfPi && t.phi < kHalfPi;

    r.lead = t.phi > 0.0 && t.phi < kHalfPi && t.M * c > 1.0;
    r.lag = t.phi > -kHalfPi && t.phi < 0.0 && c > t.M;
    r.leadlag_z1_gt_z2 = right_half && t.M * c > 1.0;
    r.leadlag_z2_gt_z1 = right_half && c > t.M;
    r.pid = right_half;
    r.pd = t.phi > 0.0 && t.phi < kHalfPi;
    r.pi = t.phi > -kHalfPi && t.phi < 0.0;

    std::ostringstream notes;
    notes << "pid flag is the sigma-form (fixed T_d/T_i) region phi in (-pi/2, pi/2); ";
    notes << "constrained-K_i form applies iff 0 < phi < pi and M cos phi < 1: "
          << ((t.phi > 0.0 && t.phi < kPi && t.M * c < 1.0) ? "true" : "false");
    r.notes = notes.str();
    return r;
}

}  // namespace ctrlsyn
