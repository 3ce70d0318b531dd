#include "ctrlsyn/compensator.hpp"

namespace ctrlsyn {

namespace {

struct BuildTf {
    TransferFunction operator()(const LeadParams& p) const {
        return TransferFunction(Polynomial{p.gain, p.gain * p.tau},
                                Polynomial{1.0, p.alpha * p.tau});
    }
    TransferFunction operator()(const LagParams& p) const {
        return TransferFunction(Polynomial{p.gain, p.gain * p.alpha * p.tau},
                                Polynomial{1.0, p.tau});
    }
    TransferFunction operator()(const LeadLagRealParams& p) const {
        const Polynomial n = Polynomial{1.0, p.tau1} * Polynomial{1.0, p.tau2};
        const Polynomial d =
            Polynomial{1.0, p.alpha * p.tau1} * Polynomial{1.0, p.tau2 / p.alpha};
        return TransferFunction(n * p.gain, d);
    }
    TransferFunction operator()(const LeadLagComplexParams& p) const {
        const double wn2 = p.omega_n * p.omega_n;
        return TransferFunction(
            Polynomial{wn2 * p.gain, 2.0 * p.zeta1 * p.omega_n * p.gain, p.gain},
            Polynomial{wn2, 2.0 * p.zeta2 * p.omega_n, 1.0});
    }
    TransferFunction operator()(const PidParams& p) const {
        return TransferFunction(Polynomial{p.kp, p.kp * p.ti, p.kp * p.ti * p.td},
                                Polynomial{0.0, p.ti});
    }
    TransferFunction operator()(const PiParams& p) const {
        return TransferFunction(Polynomial{p.kp, p.kp * p.ti}, Polynomial{0.0, p.ti});
    }
    TransferFunction operator()(const PdParams& p) const {
        return TransferFunction(Polynomial{p.kp, p.kp * p.td}, Polynomial{1.0});
    }
};

struct KindName {
    std::string operator()(const LeadParams&) const { return "lead"; }
    std::string operator()(const LagParams&) const { return "lag"; }
    std::string operator()(const LeadLagRealParams&) const { return "leadlag"; }
    std::string operator()(const LeadLagComplexParams&) const { return "leadlag_complex"; }
    std::string operator()(const PidParams&) const { return "pid"; }
    std::string operator()(const PiParams&) const { return "pi"; }
    std::string operator()(const PdParams&) const { return "pd"; }
};

}  // namespace

TransferFunction controller_tf(const CompensatorParams& params) {
    return std::visit(BuildTf{}, params);
}

std::string compensator_kind(const CompensatorParams& params) {
    return std::visit(KindName{}, params);
}

}  // namespace ctrlsyn
