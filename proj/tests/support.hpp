#pragma once

// Shared helpers for the test suites: deterministic generators for plants,
// polynomials and targets, and small independent oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ctrlsyn/polynomial.hpp"
#include "ctrlsyn/transfer_function.hpp"

namespace testsup {

using ctrlsyn::Complex;
using ctrlsyn::Polynomial;
using ctrlsyn::TransferFunction;

inline std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(g);
}

inline double log_uniform(std::mt19937_64& g, double lo, double hi) {
    return std::exp(uniform(g, std::log(lo), std::log(hi)));
}

inline bool chance(std::mt19937_64& g, double p) { return uniform(g, 0.0, 1.0) < p; }

/// The running example plant (s + 10) / (s (s^2 + 2 s + 10)).
inline TransferFunction example_plant() {
    return TransferFunction(Polynomial{10.0, 1.0}, Polynomial{0.0, 10.0, 2.0, 1.0});
}

/// Random roots for a stable polynomial: real parts in [-5, -0.05],
/// magnitudes kept moderate so crossovers stay on the default grid.
inline std::vector<Complex> random_stable_roots(std::mt19937_64& g, int count) {
    std::vector<Complex> roots;
    while (static_cast<int>(roots.size()) < count) {
        if (count - static_cast<int>(roots.size()) >= 2 && chance(g, 0.4)) {
            const double re = -log_uniform(g, 0.05, 5.0);
            const double im = log_uniform(g, 0.05, 5.0);
            roots.emplace_back(re, im);
            roots.emplace_back(re, -im);
        } else {
            roots.emplace_back(-log_uniform(g, 0.05, 5.0), 0.0);
        }
    }
    return roots;
}

struct PlantOptions {
    bool allow_integrator = true;
    int min_den_degree = 2;
    int max_den_degree = 5;
};

/// Random strictly proper plant with left-half-plane poles (an optional
/// integrator) and negative real zeros; positive gain.
inline TransferFunction random_plant(std::mt19937_64& g, const PlantOptions& opt = {}) {
    const int nd = opt.min_den_degree +
                   static_cast<int>(uniform(g, 0.0, 1.0) * (opt.max_den_degree -
                                                            opt.min_den_degree + 1));
    const bool integrator = opt.allow_integrator && chance(g, 0.4);
    std::vector<Complex> poles = random_stable_roots(g, integrator ? nd - 1 : nd);
    if (integrator) poles.emplace_back(0.0, 0.0);

    const int nz = static_cast<int>(uniform(g, 0.0, 1.0) * nd);  // 0 .. nd-1
    std::vector<Complex> zeros = random_stable_roots(g, nz);

    const double gain = log_uniform(g, 0.2, 5.0);
    return TransferFunction(Polynomial::from_roots(zeros, gain),
                            Polynomial::from_roots(poles, 1.0));
}

/// Naive power-sum evaluation (term-by-term, no Horner) as an oracle.
inline Complex eval_power_sum(const Polynomial& p, Complex s) {
    Complex acc = 0.0;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        Complex pw = 1.0;
        for (std::size_t i = 0; i < k; ++i) pw *= s;
        acc += p.coeffs()[k] * pw;
    }
    return acc;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

inline double rel_err(Complex got, Complex want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace testsup
