#pragma once

#include <string>
#include <variant>

#include "ctrlsyn/networks.hpp"
#include "ctrlsyn/pid.hpp"
#include "ctrlsyn/transfer_function.hpp"

namespace ctrlsyn {

/// Tagged union over every compensator family the library designs.
using CompensatorParams = std::variant<LeadParams, LagParams, LeadLagRealParams,
                                       LeadLagComplexParams, PidParams, PiParams, PdParams>;

/// Materialize the compensator transfer function:
///   lead      K(1 + tau s)/(1 + alpha tau s)
///   lag       K(1 + alpha tau s)/(1 + tau s)
///   lead-lag  K(1 + tau1 s)(1 + tau2 s)/((1 + a tau1 s)(1 + (tau2/a) s))
///   lead-lag' K(s^2 + 2 z1 wn s + wn^2)/(s^2 + 2 z2 wn s + wn^2)
///   pid       kp (ti td s^2 + ti s + 1)/(ti s)
///   pi        kp (ti s + 1)/(ti s)
///   pd        kp (1 + td s)
TransferFunction controller_tf(const CompensatorParams& params);

/// Short family tag ("lead", "lag", "leadlag", "leadlag_complex", "pid",
/// "pi", "pd") for reports.
std::string compensator_kind(const CompensatorParams& params);

}  // namespace ctrlsyn
