#pragma once

#include "ctrlsyn/polynomial.hpp"

namespace ctrlsyn {

/// Rational transfer function num(s)/den(s) with optional dead time
/// e^{-delay*s}.  The representation is kept exactly as supplied: no
/// pole-zero cancellation is ever performed.
struct TransferFunction {
    Polynomial num;
    Polynomial den;
    double delay = 0.0;  // seconds, >= 0

    TransferFunction() : num{1.0}, den{1.0} {}
    TransferFunction(Polynomial n, Polynomial d, double t0 = 0.0);

    bool is_rational() const { return delay == 0.0; }
};

/// Frequency response num(jw)/den(jw) * e^{-j*w*delay}.
/// Throws EvalOnPole when |den(jw)| < 1e-300.
Complex tf_eval(const TransferFunction& tf, double omega);

/// Series interconnection (a*b), delays add.
TransferFunction series(const TransferFunction& a, const TransferFunction& b);

/// Scale the numerator by k.
TransferFunction scale(const TransferFunction& tf, double k);

/// Multiplicity of the pole at s = 0, read off the low-order denominator
/// coefficients (entries below 1e-12 * max|coeff| count as zero).
/// Throws AmbiguousType when num(0) = 0.
int system_type(const TransferFunction& tf);

/// Even polynomials in w clearing the denominators of a frequency response:
///   A(w) = Re(N(jw) * conj(D(jw)))     so Re G(jw)  = A/E
///   B(w) = |N(jw)|^2                   so |G(jw)|^2 = B/E
///   E(w) = |D(jw)|^2
struct EvenComponents {
    Polynomial A;
    Polynomial B;
    Polynomial E;
};

/// Splits N(jw) and D(jw) into real/imaginary coefficient polynomials and
/// forms the products above.  Requires delay == 0 (DelayUnsupported).
EvenComponents even_components(const TransferFunction& tf);

}  // namespace ctrlsyn
