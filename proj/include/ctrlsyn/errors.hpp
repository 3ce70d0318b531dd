#pragma once

#include <stdexcept>
#include <string>

namespace ctrlsyn {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transfer-function evaluation hit a denominator magnitude below the floor.
struct EvalOnPole : Error {
    using Error::Error;
};

/// The iterative root solver did not reach its residual target.
struct ConvergenceFailure : Error {
    using Error::Error;
};

/// system_type cannot be decided because the numerator vanishes at s = 0.
struct AmbiguousType : Error {
    using Error::Error;
};

/// Operation requires a rational (delay-free) transfer function.
struct DelayUnsupported : Error {
    using Error::Error;
};

/// Steady-state specification order does not match the plant type.
struct TypeMismatch : Error {
    using Error::Error;
};

/// Steady-state specification forces a non-positive DC gain.
struct NonpositiveGain : Error {
    using Error::Error;
};

/// The requested network cannot act at this frequency (|G| on the wrong
/// side of 1 for the phase-margin range computation).
struct InfeasibleAtFrequency : Error {
    using Error::Error;
};

/// sin(phi) is numerically zero: the compensator degenerates to a pure gain
/// and the P/Q inversion has no finite solution.
struct DegeneratePhase : Error {
    using Error::Error;
};

/// Frequency coincides with the natural frequency of the lead-lag network.
struct ResonanceFrequency : Error {
    using Error::Error;
};

/// No phase-crossover candidate survives the sign/feasibility filter.
struct NoFeasibleCrossover : Error {
    using Error::Error;
};

/// Complex-form lead-lag has zeta <= 1 and admits no real pole/zero form.
struct RealFormUnavailable : Error {
    using Error::Error;
};

/// Why a design operation rejected its targets.
enum class InfeasibleKind {
    PhaseOutOfRange,        // phi outside the admissible open interval
    MagnitudeInsufficient,  // M fails the strict magnitude inequality
    BoundViolated,          // an assigned parameter violates its bound
    Degenerate,             // boundary/degenerate inputs (alpha = 0, zeta = 1, ...)
};

/// Design targets fall outside the admissible region of the requested
/// compensator family.  `kind` distinguishes which inequality failed.
struct Infeasible : Error {
    InfeasibleKind kind;
    Infeasible(InfeasibleKind k, const std::string& what) : Error(what), kind(k) {}
};

/// Malformed request/plant document; message carries the field path.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace ctrlsyn
