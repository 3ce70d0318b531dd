#include "ctrlsyn/transfer_function.hpp"

#include <cmath>

#include "ctrlsyn/errors.hpp"

namespace ctrlsyn {

TransferFunction::TransferFunction(Polynomial n, Polynomial d, double t0)
    : num(std::move(n)), den(std::move(d)), delay(t0) {
    if (den.is_zero()) {
        throw Error("TransferFunction: denominator is the zero polynomial");
    }
    if (delay < 0.0) {
        throw Error("TransferFunction: negative dead time");
    }
}

Complex tf_eval(const TransferFunction& tf, double omega) {
    const Complex s(0.0, omega);
    const Complex d = tf.den.eval(s);
    if (std::abs(d) < 1e-300) {
        throw EvalOnPole("tf_eval: |den(jw)| below 1e-300 at w = " + std::to_string(omega));
    }
    Complex v = tf.num.eval(s) / d;
    if (tf.delay != 0.0) {
        v *= std::polar(1.0, -omega * tf.delay);
    }
    return v;
}

TransferFunction series(const TransferFunction& a, const TransferFunction& b) {
    return TransferFunction(a.num * b.num, a.den * b.den, a.delay + b.delay);
}

TransferFunction scale(const TransferFunction& tf, double k) {
    return TransferFunction(tf.num * k, tf.den, tf.delay);
}

int system_type(const TransferFunction& tf) {
    const double eps = 1e-12 * tf.den.coeff_norm();
    if (std::abs(tf.num.coeff(0)) <= 1e-12 * std::max(tf.num.coeff_norm(), 1.0)) {
        throw AmbiguousType("system_type: num(0) = 0, pole multiplicity at the origin is ambiguous");
    }
    int type = 0;
    while (type <= tf.den.degree() && std::abs(tf.den.coeff(static_cast<std::size_t>(type))) <= eps) {
        ++type;
    }
    return type;
}

namespace {

// N(jw) = even_part(w) + j*odd_part(w), both real polynomials in w.
void split_jomega(const Polynomial& p, Polynomial& re, Polynomial& im) {
    std::vector<double> r, i;
    const auto& c = p.coeffs();
    r.resize(c.size(), 0.0);
    i.resize(c.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        // j^k cycles 1, j, -1, -j
        switch (k % 4) {
            case 0: r[k] = c[k]; break;
            case 1: i[k] = c[k]; break;
            case 2: r[k] = -c[k]; break;
            case 3: i[k] = -c[k]; break;
        }
    }
    re = Polynomial(std::move(r));
    im = Polynomial(std::move(i));
}

}  // namespace

EvenComponents even_components(const TransferFunction& tf) {
    if (tf.delay != 0.0) {
        throw DelayUnsupported("even_components: dead time is not representable as polynomials in w");
    }
    Polynomial nr, ni, dr, di;
    split_jomega(tf.num, nr, ni);
    split_jomega(tf.den, dr, di);
    EvenComponents ec;
    ec.A = nr * dr + ni * di;
    ec.B = nr * nr + ni * ni;
    ec.E = dr * dr + di * di;
    return ec;
}

}  // namespace ctrlsyn
